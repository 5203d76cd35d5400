#pragma once
// Run configuration: an INI file with one section per command. Parsing is strict: unknown
// sections or keys, malformed values and duplicate keys are all ConfigErrors.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qtr/crystal.hpp"
#include "qtr/cyclewalk.hpp"
#include "qtr/physcore.hpp"
#include "qtr/rotor.hpp"
#include "qtr/tunnel.hpp"

namespace qtr {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "': '" + s + "' is not a finite number");
    return v;
}

inline std::size_t parse_count(const std::string& raw, const std::string& key) {
    const double v = parse_number(raw, key);
    if (v < 0 || v != std::floor(v) || v > 1e9)
        throw ConfigError("key '" + key + "': expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false");
}

inline std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

/// Phase literal: a number, or [c*]pi[/d] with optional leading minus ("pi/6", "-pi/24",
/// "2*pi/3", "0.5").
inline double parse_phase(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty phase value");
    const auto pos = s.find("pi");
    if (pos == std::string::npos) return detail::parse_number(s, "phase");
    double sign = 1.0;
    std::string head = s.substr(0, pos);
    if (!head.empty() && head[0] == '-') {
        sign = -1.0;
        head.erase(0, 1);
    }
    double coef = 1.0;
    if (!head.empty()) {
        if (head.back() != '*') throw ConfigError("malformed phase '" + raw + "'");
        coef = detail::parse_number(head.substr(0, head.size() - 1), "phase");
    }
    std::string tail = s.substr(pos + 2);
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') throw ConfigError("malformed phase '" + raw + "'");
        denom = detail::parse_number(tail.substr(1), "phase");
        if (denom == 0) throw ConfigError("phase denominator is zero");
    }
    return sign * coef * std::numbers::pi / denom;
}

struct RunConfig {
    TrapConfig trap{};

    struct Modes {
        std::vector<double> ratios;
        NamedSeed seed = NamedSeed::ring_up;
        bool eigenvectors = false;
    } modes;

    struct Potential {
        std::size_t grid_size = 256;
        bool rigid_overlay = true;
        bool with_wavefunctions = false;
        std::size_t resolution = 256;
    } potential;

    struct Tunnel {
        std::size_t grid_size = 256;
        std::size_t resolution = 256;
        RingMethod solver = RingMethod::fourier;
    } tunnel;

    struct Walk {
        double theta_ab = 0.0;
        double t_max = 10.0;  // normalized, j t
        std::optional<double> t_max_seconds;
        std::size_t t_steps = 200;
        std::size_t initial_site = 1;
    } walk;

    struct Interfere {
        std::vector<double> theta_ab{0.0, std::numbers::pi / 24, std::numbers::pi / 12,
                                     std::numbers::pi / 6, std::numbers::pi / 2};
        double t_max = 4.0;
        std::size_t t_steps = 200;
    } interfere;

    struct Adiabat {
        double ratio_start = 1.1;
        double ratio_end = 1.001;
        double duration_s = 0.01;
        std::size_t samples = 101;
    } adiabat;

    RunConfig() {
        for (int k = 0; k <= 100; ++k) modes.ratios.push_back(1.0005 + (1.2 - 1.0005) * k / 100.0);
    }

    void validate() const {
        trap.validate();
        if (modes.ratios.empty()) throw ConfigError("[modes] anisotropy grid is empty");
        if (potential.grid_size < 64) throw ConfigError("[potential] grid_size must be >= 64");
        if (tunnel.grid_size < 64) throw ConfigError("[tunnel] grid_size must be >= 64");
        if (tunnel.resolution < 128 || potential.resolution < 128)
            throw ConfigError("ring solver resolution must be >= 128");
        if (walk.initial_site < 1 || walk.initial_site > 2 * trap.n_ions)
            throw ConfigError("[walk] initial_site must be in [1, 2 n_ions]");
        if (walk.t_steps == 0 || interfere.t_steps == 0) throw ConfigError("t_steps must be >= 1");
        if (!(walk.t_max >= 0) || !(interfere.t_max >= 0)) throw ConfigError("t_max must be >= 0");
        if (interfere.theta_ab.empty()) throw ConfigError("[interfere] theta_ab list is empty");
        if (adiabat.samples < 2) throw ConfigError("[adiabat] samples must be >= 2");
        if (!(adiabat.duration_s > 0)) throw ConfigError("[adiabat] duration_s must be > 0");
    }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"trap", {"n_ions", "omega_z_hz", "anisotropy", "mass_u"}},
        {"modes", {"ratios", "ratio_min", "ratio_max", "ratio_steps", "seed", "eigenvectors"}},
        {"potential", {"grid_size", "rigid_overlay", "with_wavefunctions", "resolution"}},
        {"tunnel", {"grid_size", "resolution", "solver"}},
        {"walk", {"theta_ab", "t_max", "t_max_seconds", "t_steps", "initial_site"}},
        {"interfere", {"theta_ab", "t_max", "t_steps"}},
        {"adiabat", {"ratio_start", "ratio_end", "duration_s", "samples"}},
    };
    return schema;
}

}  // namespace detail

inline RunConfig parse_run_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    const auto& schema = detail::config_schema();
    for (const auto& [section, body] : tree) {
        const auto it = schema.find(section);
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' outside of any section");
        if (it == schema.end()) throw ConfigError("unknown config section [" + section + "]");
        for (const auto& [key, value] : body)
            if (!it->second.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }

    RunConfig c;
    auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
        const auto s = tree.get_child_optional(section);
        if (!s) return std::nullopt;
        const auto v = s->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return detail::trim(*v);
    };
    auto number = [&](const std::string& s, const std::string& k, double& out) {
        if (auto v = get(s, k)) out = detail::parse_number(*v, s + "." + k);
    };
    auto count = [&](const std::string& s, const std::string& k, std::size_t& out) {
        if (auto v = get(s, k)) out = detail::parse_count(*v, s + "." + k);
    };
    auto flag = [&](const std::string& s, const std::string& k, bool& out) {
        if (auto v = get(s, k)) out = detail::parse_bool(*v, s + "." + k);
    };

    count("trap", "n_ions", c.trap.n_ions);
    if (auto v = get("trap", "omega_z_hz"))
        c.trap.omega_z = 2.0 * std::numbers::pi * detail::parse_number(*v, "trap.omega_z_hz");
    number("trap", "anisotropy", c.trap.anisotropy);
    if (auto v = get("trap", "mass_u"))
        c.trap.ion_mass = detail::parse_number(*v, "trap.mass_u") * PhysicalConstants::atomic_mass_unit;

    const auto ratios = get("modes", "ratios");
    const auto rmin = get("modes", "ratio_min"), rmax = get("modes", "ratio_max"),
               rsteps = get("modes", "ratio_steps");
    if (ratios && (rmin || rmax || rsteps))
        throw ConfigError("[modes] give either ratios or ratio_min/ratio_max/ratio_steps");
    if (ratios) {
        c.modes.ratios.clear();
        for (const auto& item : detail::split_list(*ratios))
            c.modes.ratios.push_back(detail::parse_number(item, "modes.ratios"));
    } else if (rmin || rmax || rsteps) {
        if (!(rmin && rmax && rsteps))
            throw ConfigError("[modes] ratio_min, ratio_max and ratio_steps must be given together");
        const double a = detail::parse_number(*rmin, "modes.ratio_min");
        const double b = detail::parse_number(*rmax, "modes.ratio_max");
        const std::size_t n = detail::parse_count(*rsteps, "modes.ratio_steps");
        c.modes.ratios.clear();
        if (n == 0) {
            c.modes.ratios.push_back(a);
        } else {
            for (std::size_t k = 0; k <= n; ++k)
                c.modes.ratios.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(n));
        }
    }
    if (auto v = get("modes", "seed")) c.modes.seed = parse_seed(*v);
    flag("modes", "eigenvectors", c.modes.eigenvectors);

    count("potential", "grid_size", c.potential.grid_size);
    flag("potential", "rigid_overlay", c.potential.rigid_overlay);
    flag("potential", "with_wavefunctions", c.potential.with_wavefunctions);
    count("potential", "resolution", c.potential.resolution);

    count("tunnel", "grid_size", c.tunnel.grid_size);
    count("tunnel", "resolution", c.tunnel.resolution);
    if (auto v = get("tunnel", "solver")) c.tunnel.solver = parse_ring_method(*v);

    if (auto v = get("walk", "theta_ab")) c.walk.theta_ab = parse_phase(*v);
    number("walk", "t_max", c.walk.t_max);
    if (auto v = get("walk", "t_max_seconds")) {
        if (get("walk", "t_max")) throw ConfigError("[walk] give either t_max or t_max_seconds");
        c.walk.t_max_seconds = detail::parse_number(*v, "walk.t_max_seconds");
        if (!(*c.walk.t_max_seconds >= 0)) throw ConfigError("[walk] t_max_seconds must be >= 0");
    }
    count("walk", "t_steps", c.walk.t_steps);
    count("walk", "initial_site", c.walk.initial_site);

    if (auto v = get("interfere", "theta_ab")) {
        c.interfere.theta_ab.clear();
        for (const auto& item : detail::split_list(*v)) c.interfere.theta_ab.push_back(parse_phase(item));
    }
    number("interfere", "t_max", c.interfere.t_max);
    count("interfere", "t_steps", c.interfere.t_steps);

    number("adiabat", "ratio_start", c.adiabat.ratio_start);
    number("adiabat", "ratio_end", c.adiabat.ratio_end);
    number("adiabat", "duration_s", c.adiabat.duration_s);
    count("adiabat", "samples", c.adiabat.samples);

    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

inline RunConfig parse_run_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

/// 64-bit FNV-1a, used to tag outputs with the configuration that produced them.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace qtr
