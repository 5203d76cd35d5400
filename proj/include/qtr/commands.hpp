#pragma once
// Command implementations behind the `qtr` executable. Each command writes its CSV/SVG files
// into the output directory and returns a printable summary.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qtr/config.hpp"
#include "qtr/crystal.hpp"
#include "qtr/csv.hpp"
#include "qtr/cyclewalk.hpp"
#include "qtr/rotor.hpp"
#include "qtr/svg.hpp"
#include "qtr/tunnel.hpp"

namespace qtr::cli {

enum class OutputFormat { csv, svg, both };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "svg") return OutputFormat::svg;
    if (s == "both") return OutputFormat::both;
    throw ConfigError("unknown format '" + s + "' (expected csv, svg or both)");
}

struct OutputOptions {
    std::filesystem::path dir = ".";
    OutputFormat format = OutputFormat::csv;
};

struct CommandResult {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

inline std::string canonical_string(const RunConfig& c) {
    std::ostringstream s;
    s << "n_ions=" << c.trap.n_ions << ";omega_z=" << format_double(c.trap.omega_z)
      << ";anisotropy=" << format_double(c.trap.anisotropy) << ";mass=" << format_double(c.trap.ion_mass)
      << ";ratios=";
    for (double r : c.modes.ratios) s << format_double(r) << ',';
    s << ";seed=" << to_string(c.modes.seed) << ";pot_grid=" << c.potential.grid_size
      << ";pot_res=" << c.potential.resolution << ";tun_grid=" << c.tunnel.grid_size
      << ";tun_res=" << c.tunnel.resolution << ";solver=" << to_string(c.tunnel.solver)
      << ";walk_theta=" << format_double(c.walk.theta_ab) << ";walk_tmax=" << format_double(c.walk.t_max)
      << ";walk_steps=" << c.walk.t_steps << ";walk_site=" << c.walk.initial_site << ";int_theta=";
    for (double t : c.interfere.theta_ab) s << format_double(t) << ',';
    s << ";int_tmax=" << format_double(c.interfere.t_max) << ";int_steps=" << c.interfere.t_steps
      << ";ramp=" << format_double(c.adiabat.ratio_start) << ',' << format_double(c.adiabat.ratio_end)
      << ',' << format_double(c.adiabat.duration_s) << ',' << c.adiabat.samples;
    return s.str();
}

inline std::string config_hash(const RunConfig& c) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_string(c))));
    return buf;
}

namespace detail {

inline bool want_csv(const OutputOptions& o) { return o.format != OutputFormat::svg; }
inline bool want_svg(const OutputOptions& o) { return o.format != OutputFormat::csv; }

inline std::filesystem::path prepare(const OutputOptions& o, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(o.dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + o.dir.string() + "'");
    return o.dir / name;
}

inline void emit_csv(const CsvTable& t, const OutputOptions& o, const std::string& name, CommandResult& r) {
    if (!want_csv(o)) return;
    const auto p = prepare(o, name);
    t.write(p.string());
    r.files.push_back(p);
}

inline void emit_svg(const std::string& svg, const OutputOptions& o, const std::string& name, CommandResult& r) {
    if (!want_svg(o)) return;
    const auto p = prepare(o, name);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << svg;
    r.files.push_back(p);
}

}  // namespace detail

inline CommandResult cmd_modes(const RunConfig& config, const OutputOptions& out) {
    const auto scan = scan_modes(config.trap, config.modes.ratios, config.modes.seed);
    CommandResult r;
    CsvTable t;
    t.header = {"ratio", "mode_index", "freq_over_omega_z", "label"};
    CsvTable ev;
    ev.header = {"ratio", "mode_index", "ion_index", "dx", "dz"};
    const std::size_t dim = 2 * config.trap.n_ions;
    std::vector<svg::Series> series(dim);
    for (const auto& p : scan) {
        for (std::size_t m = 0; m < dim; ++m) {
            const std::size_t k = p.tracked[m];
            t.add_row({format_double(p.ratio), std::to_string(m), format_double(p.spectrum.frequencies[k]),
                       p.spectrum.labels[k]});
            series[m].x.push_back(p.ratio);
            series[m].y.push_back(p.spectrum.frequencies[k]);
            if (series[m].name.empty()) series[m].name = "mode " + std::to_string(m);
            if (config.modes.eigenvectors) {
                for (std::size_t i = 0; i < config.trap.n_ions; ++i) {
                    const auto col = static_cast<Eigen::Index>(k);
                    ev.add_row({format_double(p.ratio), std::to_string(m), std::to_string(i),
                                format_double(p.spectrum.eigenvectors(static_cast<Eigen::Index>(2 * i), col)),
                                format_double(p.spectrum.eigenvectors(static_cast<Eigen::Index>(2 * i + 1), col))});
                }
            }
        }
    }
    detail::emit_csv(t, out, "modes.csv", r);
    if (config.modes.eigenvectors) detail::emit_csv(ev, out, "modes_eigenvectors.csv", r);
    detail::emit_svg(svg::line_plot(series, "Collective mode frequencies, N = " + std::to_string(config.trap.n_ions),
                                    "omega_x / omega_z", "omega / omega_z"),
                     out, "modes.svg", r);
    std::ostringstream s;
    s << "modes: " << scan.size() << " ratios x " << dim << " modes\n";
    r.summary = s.str();
    return r;
}

inline CommandResult cmd_potential(const RunConfig& config, const OutputOptions& out) {
    const RotorPotential relaxed =
        effective_potential(config.trap, {PotentialMethod::relaxed, config.potential.grid_size, false});
    std::optional<RotorPotential> rigid;
    if (config.potential.rigid_overlay)
        rigid = effective_potential(config.trap, {PotentialMethod::rigid, config.potential.grid_size, false});
    std::optional<TunnelDoublet> doublet;
    if (config.potential.with_wavefunctions) {
        RingSolverOptions o;
        o.resolution = config.potential.resolution;
        doublet = solve_ring(relaxed, o);
    }

    CommandResult r;
    CsvTable t;
    t.comments = {{"n_ions", std::to_string(config.trap.n_ions)},
                  {"anisotropy", format_double(config.trap.anisotropy)},
                  {"method", "relaxed"},
                  {"inertia_kg_m2", format_double(relaxed.inertia)},
                  {"barrier_joule", format_double(barrier_height(relaxed))},
                  {"minima_per_period", std::to_string(relaxed.minima_count)},
                  {"config_hash", config_hash(config)}};
    if (rigid) t.comments.push_back({"rigid_barrier_joule", format_double(barrier_height(*rigid))});
    t.header = {"theta_rad", "V_joule", "V_dimensionless"};
    if (rigid) t.header.insert(t.header.end(), {"V_rigid_joule", "V_rigid_dimensionless"});
    t.header.push_back("inertia_kg_m2");
    if (doublet) t.header.insert(t.header.end(), {"psi_up", "psi_down"});
    for (std::size_t k = 0; k < relaxed.size(); ++k) {
        std::vector<std::string> row{format_double(relaxed.theta_grid[k]), format_double(relaxed.values_joule[k]),
                                     format_double(relaxed.values[k])};
        if (rigid) {
            row.push_back(format_double(rigid->values_joule[k]));
            row.push_back(format_double(rigid->values[k]));
        }
        row.push_back(format_double(relaxed.inertia_trace[k]));
        if (doublet) {
            row.push_back(format_double(doublet->psi_up[k]));
            row.push_back(format_double(doublet->psi_down[k]));
        }
        t.add_row(std::move(row));
    }
    detail::emit_csv(t, out, "potential.csv", r);

    std::vector<svg::Series> series{{"relaxed V / h [Hz]", relaxed.theta_grid, {}}};
    for (double v : relaxed.values_joule) series[0].y.push_back(v / PhysicalConstants::planck);
    detail::emit_svg(svg::line_plot(series, "Effective rotor potential", "theta [rad]", "V / h [Hz]"), out,
                     "potential.svg", r);

    std::ostringstream s;
    s << "barrier (relaxed): " << format_double(barrier_height(relaxed)) << " J = "
      << format_double(barrier_height(relaxed) / PhysicalConstants::planck) << " Hz x h\n";
    if (rigid) s << "barrier (rigid):   " << format_double(barrier_height(*rigid)) << " J\n";
    s << "moment of inertia: " << format_double(relaxed.inertia) << " kg m^2\n";
    if (!relaxed.warning.empty()) s << "warning: " << relaxed.warning << "\n";
    r.summary = s.str();
    return r;
}

inline CommandResult cmd_tunnel(const RunConfig& config, const OutputOptions& out) {
    TunnelingOptions o;
    o.grid_size = config.tunnel.grid_size;
    o.solver.resolution = config.tunnel.resolution;
    o.solver.method = config.tunnel.solver;
    const TunnelingReport rep = tunneling_analysis(config.trap, o);

    CommandResult r;
    CsvTable t;
    t.header = {"e0_J", "e1_J", "splitting_J", "rate_hz", "method", "resolution"};
    for (const auto* d : {&rep.relaxed, &rep.rigid}) {
        const std::string pot = d == &rep.relaxed ? "relaxed" : "rigid";
        t.add_row({format_double(d->e0), format_double(d->e1), format_double(d->splitting),
                   format_double(d->rate_hz), pot + "-" + to_string(d->method), std::to_string(d->resolution)});
    }
    detail::emit_csv(t, out, "tunnel_summary.csv", r);

    CsvTable w;
    w.header = {"theta_rad", "psi0", "psi1", "psi_up", "psi_down"};
    const TunnelDoublet& d = rep.relaxed;
    for (std::size_t k = 0; k < d.theta_grid.size(); ++k)
        w.add_row({format_double(d.theta_grid[k]), format_double(d.psi0[k]), format_double(d.psi1[k]),
                   format_double(d.psi_up[k]), format_double(d.psi_down[k])});
    detail::emit_csv(w, out, "tunnel_wavefunctions.csv", r);

    std::vector<svg::Series> series{{"psi_up", d.theta_grid, d.psi_up}, {"psi_down", d.theta_grid, d.psi_down}};
    detail::emit_svg(svg::line_plot(series, "Localized orientation states", "theta [rad]", "psi"), out,
                     "tunnel_wavefunctions.svg", r);

    std::ostringstream s;
    for (const auto* dd : {&rep.relaxed, &rep.rigid}) {
        const bool rel = dd == &rep.relaxed;
        s << (rel ? "[relaxed potential]\n" : "[rigid potential]\n");
        s << "  e0              = " << format_double(dd->e0) << " J\n";
        s << "  e1              = " << format_double(dd->e1) << " J\n";
        s << "  splitting       = " << format_double(dd->splitting) << " J\n";
        s << "  rate_j          = " << format_double(dd->rate_j) << " rad/s  (splitting / 2 hbar)\n";
        s << "  rate_hz         = " << format_double(dd->rate_hz) << " Hz     (rate_j / 2 pi)\n";
        s << "  splitting / h   = " << format_double(dd->splitting_hz) << " Hz\n";
        if (!dd->warning.empty()) s << "  warning: " << dd->warning << "\n";
    }
    r.summary = s.str();
    return r;
}

inline CommandResult cmd_walk(const RunConfig& config, const OutputOptions& out) {
    double tau_max = config.walk.t_max;
    std::string time_note;
    if (config.walk.t_max_seconds) {
        TunnelingOptions o;
        o.grid_size = config.tunnel.grid_size;
        o.solver.resolution = config.tunnel.resolution;
        const double j = tunneling_analysis(config.trap, o).relaxed.rate_j;
        tau_max = j * *config.walk.t_max_seconds;
        time_note = "tunneling rate j = " + format_double(j) + " rad/s\n";
    }
    const WalkHamiltonian h = build_cycle_hamiltonian(config.trap.n_ions, 1.0, ABPhase(config.walk.theta_ab));
    const auto rows = walk_distribution(h, config.walk.initial_site, time_grid(tau_max, config.walk.t_steps));

    CommandResult r;
    CsvTable t;
    t.header = {"t_normalized", "site", "probability"};
    std::vector<std::vector<double>> grid;
    for (const auto& row : rows) {
        for (std::size_t s = 0; s < row.probabilities.size(); ++s)
            t.add_row({format_double(row.tau), std::to_string(s + 1), format_double(row.probabilities[s])});
        grid.push_back(row.probabilities);
    }
    detail::emit_csv(t, out, "walk.csv", r);
    detail::emit_svg(svg::heat_map(grid, 0.0, tau_max, "Cyclic walk, 2N = " + std::to_string(h.size),
                                   "j t", "site"),
                     out, "walk.svg", r);
    r.summary = time_note + "walk: " + std::to_string(h.size) + " sites, " + std::to_string(rows.size()) +
                " time samples, theta_ab = " + format_double(h.theta_ab.value()) + "\n";
    return r;
}

inline CommandResult cmd_interfere(const RunConfig& config, const OutputOptions& out) {
    std::vector<ABPhase> thetas;
    for (double t : config.interfere.theta_ab) thetas.emplace_back(t);
    const auto taus = time_grid(config.interfere.t_max, config.interfere.t_steps);
    const auto rows = interference_scan(thetas, taus);

    CommandResult r;
    CsvTable t;
    t.header = {"t_normalized", "theta_ab", "p_up"};
    std::vector<svg::Series> series;
    for (const auto& row : rows) {
        t.add_row({format_double(row.tau), format_double(row.theta_ab), format_double(row.p_up)});
        if (series.empty() || series.back().name != "theta = " + svg::detail::num(row.theta_ab))
            series.push_back({"theta = " + svg::detail::num(row.theta_ab), {}, {}});
        series.back().x.push_back(row.tau);
        series.back().y.push_back(row.p_up);
    }
    detail::emit_csv(t, out, "interfere.csv", r);
    detail::emit_svg(svg::line_plot(series, "AB interference, P(up)", "j t", "P_up"), out, "interfere.svg", r);
    r.summary = "interfere: " + std::to_string(thetas.size()) + " phases x " + std::to_string(taus.size()) +
                " time samples\n";
    return r;
}

inline CommandResult cmd_adiabat(const RunConfig& config, const OutputOptions& out) {
    const auto& a = config.adiabat;
    const auto [times, wx] = linear_ramp(config.trap.omega_z, a.ratio_start, a.ratio_end, a.duration_s, a.samples);
    const AdiabaticityReport rep = adiabaticity(config.trap, times, wx);

    CommandResult r;
    CsvTable t;
    t.header = {"t_s", "ratio", "omega_rot_rad_s", "eta"};
    for (std::size_t k = 0; k < times.size(); ++k)
        t.add_row({format_double(times[k]), format_double(wx[k] / config.trap.omega_z),
                   format_double(rep.omega_rot[k]), format_double(rep.eta[k])});
    detail::emit_csv(t, out, "adiabat.csv", r);
    detail::emit_svg(svg::line_plot({{"eta", times, rep.eta}}, "Ramp adiabaticity", "t [s]",
                                    "|d omega_rot/dt| / omega_rot^2"),
                     out, "adiabat.svg", r);
    r.summary = "max eta = " + format_double(rep.max_eta) + "\n";
    return r;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"modes", "potential", "tunnel", "walk", "interfere", "adiabat"};
    return names;
}

inline CommandResult run_command(const std::string& name, const RunConfig& config, const OutputOptions& out) {
    if (name == "modes") return cmd_modes(config, out);
    if (name == "potential") return cmd_potential(config, out);
    if (name == "tunnel") return cmd_tunnel(config, out);
    if (name == "walk") return cmd_walk(config, out);
    if (name == "interfere") return cmd_interfere(config, out);
    if (name == "adiabat") return cmd_adiabat(config, out);
    throw ConfigError("unknown command '" + name + "'");
}

}  // namespace qtr::cli
