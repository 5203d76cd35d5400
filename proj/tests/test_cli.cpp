#include <sys/wait.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qtr_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(QTR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "run.ini";
    std::ofstream(p) << text;
    return p;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

const char* kFiles[][2] = {{"modes", "modes.csv"},           {"potential", "potential.csv"},
                           {"tunnel", "tunnel_summary.csv"}, {"walk", "walk.csv"},
                           {"interfere", "interfere.csv"},   {"adiabat", "adiabat.csv"}};

}  // namespace

TEST(Cli, EveryCommandIsDeterministic) {
    for (const auto& [cmd, file] : kFiles) {
        const fs::path a = scratch(std::string(cmd) + "_a"), b = scratch(std::string(cmd) + "_b");
        ASSERT_EQ(run(std::string(cmd) + " --out " + a.string()), 0) << cmd;
        ASSERT_EQ(run(std::string(cmd) + " --out " + b.string()), 0) << cmd;
        const std::string x = slurp(a / file), y = slurp(b / file);
        EXPECT_FALSE(x.empty()) << cmd;
        EXPECT_EQ(x, y) << cmd;
        EXPECT_EQ(x.find('\r'), std::string::npos);
    }
}

TEST(Cli, ModesTableShape) {
    const fs::path d = scratch("modes_shape");
    const fs::path cfg = write_config(d, "[trap]\nn_ions = 5\n[modes]\nratio_min = 1.001\nratio_max = 1.05\nratio_steps = 10\n");
    ASSERT_EQ(run("modes --config " + cfg.string() + " --out " + d.string()), 0);
    const auto t = rows(slurp(d / "modes.csv"));
    ASSERT_EQ(t.size(), 1u + 11 * 10);
    EXPECT_EQ(t[0], (std::vector<std::string>{"ratio", "mode_index", "freq_over_omega_z", "label"}));
}

TEST(Cli, AntipodalSiteColumnIsDark) {
    const fs::path d = scratch("walk_dark");
    ASSERT_EQ(run("walk --config " + std::string(QTR_CONFIG_DIR) + "/walk_n3_theta_pi6.ini --out " + d.string()), 0);
    const auto t = rows(slurp(d / "walk.csv"));
    ASSERT_EQ(t[0], (std::vector<std::string>{"t_normalized", "site", "probability"}));
    std::size_t seen = 0;
    for (std::size_t r = 1; r < t.size(); ++r) {
        if (t[r][1] != "4") continue;
        ++seen;
        EXPECT_LT(std::stod(t[r][2]), 1e-10);
    }
    EXPECT_EQ(seen, 401u);
    // First time row is a delta on the start site.
    EXPECT_EQ(t[1][0], "0");
    EXPECT_EQ(std::stod(t[1][2]), 1.0);
    EXPECT_LT(std::stod(t[2][2]), 1e-15);
}

TEST(Cli, PotentialWithWavefunctions) {
    const fs::path d = scratch("potential_psi");
    ASSERT_EQ(run("potential --with-wavefunctions --out " + d.string()), 0);
    const auto t = rows(slurp(d / "potential.csv"));
    ASSERT_EQ(t.size(), 257u);
    EXPECT_EQ(t[0].back(), "psi_down");
    EXPECT_EQ(t[0][0], "theta_rad");
    EXPECT_NE(slurp(d / "potential.csv").find("# config_hash = "), std::string::npos);
}

TEST(Cli, FlatPotentialWhenIsotropic) {
    const fs::path d = scratch("potential_flat");
    const fs::path cfg = write_config(d, "[trap]\nanisotropy = 1.0\n[potential]\ngrid_size = 64\n");
    ASSERT_EQ(run("potential --config " + cfg.string() + " --out " + d.string()), 0);
    const auto t = rows(slurp(d / "potential.csv"));
    for (std::size_t r = 1; r < t.size(); ++r) EXPECT_LT(std::fabs(std::stod(t[r][2])), 1e-12);
}

TEST(Cli, FormatSelection) {
    const fs::path d = scratch("svg_only");
    ASSERT_EQ(run("interfere --format svg --out " + d.string()), 0);
    EXPECT_TRUE(fs::exists(d / "interfere.svg"));
    EXPECT_FALSE(fs::exists(d / "interfere.csv"));
    const fs::path e = scratch("both");
    ASSERT_EQ(run("adiabat --format both --out " + e.string()), 0);
    EXPECT_TRUE(fs::exists(e / "adiabat.svg"));
    EXPECT_TRUE(fs::exists(e / "adiabat.csv"));
    EXPECT_NE(slurp(e / "adiabat.svg").find("<svg"), std::string::npos);
}

TEST(Cli, UsageAndConfigErrorsExitTwo) {
    const fs::path d = scratch("errors");
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("spin"), 2);
    EXPECT_EQ(run("walk --format pdf --out " + d.string()), 2);
    EXPECT_EQ(run("modes --seed spiral --out " + d.string()), 2);
    EXPECT_EQ(run("walk --config /nonexistent.ini"), 2);
    EXPECT_EQ(run("modes --config " + write_config(d, "[modes]\nratios =\n").string()), 2);
    EXPECT_EQ(run("walk --config " + write_config(d, "[walk]\nspeed = 3\n").string()), 2);
    EXPECT_EQ(run("adiabat --config " + write_config(d, "[adiabat]\nratio_end = 0.99\n").string()), 2);
}

TEST(Cli, NumericalFailureExitsOne) {
    const fs::path d = scratch("regime");
    EXPECT_EQ(run("tunnel --config " + write_config(d, "[trap]\nanisotropy = 1.0\n").string() + " --out " + d.string()), 1);
}

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("walk --help"), 0);
}

TEST(Cli, EveryExampleConfigRuns) {
    for (const auto& entry : fs::directory_iterator(QTR_CONFIG_DIR)) {
        const std::string name = entry.path().stem().string();
        std::string cmd;
        for (const char* c : {"modes", "potential", "tunnel", "walk", "interfere", "adiabat"})
            if (name.find(c) != std::string::npos) cmd = c;
        ASSERT_FALSE(cmd.empty()) << name;
        const fs::path d = scratch("example_" + name);
        EXPECT_EQ(run(cmd + " --config " + entry.path().string() + " --out " + d.string()), 0) << name;
    }
}
