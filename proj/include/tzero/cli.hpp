// cli.hpp - command-line front end.
//
// All times on the command line and in the output are natural-unit times
// (rescaled time multiplied by hbar); beta is in inverse energy units.
// Exit codes: 0 success, 1 compute failure or requested no-result, 2 bad
// input.

#pragma once

#include "tzero/tzero.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tzero::cli {

struct CommandConfig {
    std::string command;
    std::string spectrum_path;
    std::string output_path; // empty: standard output
    std::optional<double> hbar;

    // t0
    std::optional<double> horizon;
    double zero_tol = 1e-9;
    double grid_factor = 0.05;
    bool require_zero = false;
    // bounds
    int n_max = 4;
    int gamma_order = 12;
    bool csv = false;
    // scan
    double t_max = 0.0;
    std::optional<double> step;
    // zeno
    double t = 0.0;
    std::optional<std::int64_t> n;
    std::optional<double> target;
    std::optional<double> t0;
    // bochner
    int trials = 200;
    int r_max = 6;
    std::uint64_t seed = 20240901;
    std::optional<double> bochner_horizon;
    std::string witness_path;
    // thermo
    double beta_min = 0.0;
    double beta_max = 1.0;
    int steps = 10;
    // zeros
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;
    double cell = 0.25;
    // limits
    double energy = 0.0;
    double length = 0.0;
};

namespace detail {

inline Spectrum load(const CommandConfig& cfg) {
    auto s = load_spectrum_file(cfg.spectrum_path);
    if (cfg.hbar) s = s.with_hbar(*cfg.hbar);
    return s;
}

inline int cmd_t0(const CommandConfig& cfg, std::ostream& out) {
    const auto s = load(cfg);
    ZeroSearchConfig zc;
    if (cfg.horizon) zc.horizon = *cfg.horizon / s.hbar();
    zc.zero_tol = cfg.zero_tol;
    zc.grid_factor = cfg.grid_factor;
    const auto r = find_first_zero(s, zc);
    if (r.status == ZeroStatus::found) {
        out << "T0 = " << format_fixed(*r.t0 * s.hbar()) << " (found), |Phi| = " << format_sci_short(r.min_abs)
            << "\n";
        return 0;
    }
    out << "T0 = none (" << to_string(r.status) << "), min |Phi| = " << format_fixed(r.min_abs)
        << " at t = " << format_fixed(r.argmin * s.hbar()) << "\n";
    return cfg.require_zero ? 1 : 0;
}

struct BoundRow {
    std::string name;
    std::optional<double> value;
    bool certified = true;
    std::string formula;
};

inline std::vector<BoundRow> bound_rows(const BoundReport& r) {
    std::vector<BoundRow> rows;
    rows.push_back({"ml", r.ml, true, "pi*hbar/(2*<H-E0>)"});
    rows.push_back({"mt", r.mt, true, "pi*hbar/(2*DeltaH)"});
    rows.push_back({"family", r.family, true, "inf{T : Q_n(T)>=0 for all n<=n_max}"});
    for (std::size_t i = 0; i < r.family_per_n.size(); ++i) {
        rows.push_back({"family_n" + std::to_string(i + 1), r.family_per_n[i], true,
                        "inf{T : Q_k(T)>=0 for all k<=" + std::to_string(i + 1) + "}"});
    }
    rows.push_back({"radius", r.radius.estimate, false, "hbar/limsup|gamma_n|^(1/n)"});
    const auto finite = [](double v) { return std::isfinite(v) ? std::optional<double>(v) : std::nullopt; };
    rows.push_back({"radius_naive", r.radius.estimate ? finite(r.radius.naive) : std::nullopt, false,
                    "hbar/max_tail|gamma_n|^(1/n)"});
    rows.push_back({"radius_extrapolated", r.radius.estimate ? finite(r.radius.extrapolated) : std::nullopt,
                    false, "hbar*R from fit log(n|gamma_n|)=a-n*log(R)"});
    rows.push_back({"best", r.best, true, "max(ml;mt;family)"});
    return rows;
}

inline int cmd_bounds(const CommandConfig& cfg, std::ostream& out) {
    const auto s = load(cfg);
    const auto report = bound_report(s, cfg.n_max, cfg.gamma_order);
    const auto rows = bound_rows(report);
    if (cfg.csv) {
        out << "bound,value,certified,paper_eq\n";
        for (const auto& row : rows) {
            out << row.name << ',' << (row.value ? format_sig(*row.value) : "") << ','
                << (row.certified ? "true" : "false") << ',' << row.formula << '\n';
        }
        return 0;
    }
    out << std::left << std::setw(20) << "bound" << std::setw(16) << "value" << "certified\n";
    for (const auto& row : rows) {
        out << std::left << std::setw(20) << row.name << std::setw(16)
            << (row.value ? format_fixed(*row.value) : std::string("-")) << (row.certified ? "yes" : "no")
            << '\n';
    }
    return 0;
}

inline int cmd_scan(const CommandConfig& cfg, std::ostream& out) {
    const auto s = load(cfg);
    double step = 0.0;
    if (cfg.step) {
        step = *cfg.step / s.hbar();
    } else {
        if (!(s.spectral_diameter() > 0.0)) {
            throw ValidationError("point spectrum: pass --step explicitly");
        }
        if (!(cfg.grid_factor > 0.0 && cfg.grid_factor <= 0.25)) {
            throw ValidationError("grid_factor must lie in (0, 0.25]");
        }
        step = cfg.grid_factor / s.spectral_diameter();
    }
    const auto rows = scan_overlap(s, cfg.t_max / s.hbar(), step);
    out << "t,re_phi,im_phi,abs_phi\n";
    for (const auto& row : rows) {
        out << format_sig(row.t * s.hbar()) << ',' << format_sig(row.phi.real()) << ','
            << format_sig(row.phi.imag()) << ',' << format_sig(std::abs(row.phi)) << '\n';
    }
    return 0;
}

inline int cmd_zeno(const CommandConfig& cfg, std::ostream& out) {
    const auto s = load(cfg);
    const double t = cfg.t / s.hbar();
    if (cfg.n) {
        const auto z = zeno_stasis(s, t, *cfg.n);
        out << "n = " << *cfg.n << "\n"
            << "exact = " << format_fixed(z.exact) << "\n"
            << "approx = " << format_fixed(z.approx) << "\n"
            << "|exact - approx| = " << format_sci_short(std::abs(z.exact - z.approx)) << "\n";
        return 0;
    }
    std::optional<double> t0;
    if (cfg.t0) t0 = *cfg.t0 / s.hbar();
    const auto req = zeno_required_n(s, t, *cfg.target, t0);
    out << "n = " << req.n << "\n";
    if (req.scale_ratio) out << "(t/T0)^2 = " << format_fixed(*req.scale_ratio) << "\n";
    return 0;
}

inline int cmd_bochner(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto s = load(cfg);
    std::optional<double> horizon;
    if (cfg.bochner_horizon) horizon = *cfg.bochner_horizon / s.hbar();
    const auto summary = certify_spectrum_overlap(s, cfg.trials, cfg.r_max, cfg.seed, horizon);
    out << "trials = " << summary.trials << "\n"
        << "violations = " << summary.violations << "\n"
        << "worst min eigenvalue = " << format_sci_short(summary.worst_min_eigenvalue, 6) << "\n"
        << "verdict = " << (summary.all_psd() ? "psd" : "violated") << "\n";
    if (summary.all_psd()) return 0;

    std::ostringstream csv;
    const auto& cert = *summary.first_failure;
    csv << "index,t,alpha_re,alpha_im\n";
    for (std::size_t i = 0; i < cert.points.size(); ++i) {
        const auto a = (*cert.witness)[i];
        csv << i << ',' << format_sig(cert.points[i] * s.hbar()) << ',' << format_sig(a.real()) << ','
            << format_sig(a.imag()) << '\n';
    }
    if (cfg.witness_path.empty()) {
        err << csv.str();
    } else {
        std::ofstream f(cfg.witness_path, std::ios::binary);
        if (!f || !(f << csv.str())) throw ValidationError("cannot write witness file " + cfg.witness_path);
    }
    return 1;
}

inline int cmd_thermo(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto s = load(cfg);
    if (cfg.steps < 0) throw ValidationError("--steps must be >= 0");
    if (cfg.steps > 0 && !(cfg.beta_max >= cfg.beta_min)) {
        throw ValidationError("--beta-max must be >= --beta-min");
    }
    if (cfg.beta_min < 0.0) err << "warning: negative beta values are outside the physical range\n";
    out << "beta,Z,entropy,mean_energy\n";
    for (int i = 0; i <= cfg.steps; ++i) {
        const double beta = cfg.steps == 0
                                ? cfg.beta_min
                                : cfg.beta_min + (cfg.beta_max - cfg.beta_min) * i / static_cast<double>(cfg.steps);
        const auto st = canonical_distribution(s, beta);
        const auto ent = canonical_entropy(s, beta);
        out << format_sig(beta) << ',' << format_sig(partition_function(s, beta)) << ','
            << format_sig(ent.entropy) << ',' << format_sig(st.mean_energy) << '\n';
    }
    return 0;
}

inline int cmd_zeros(const CommandConfig& cfg, std::ostream& out) {
    const auto s = load(cfg);
    const double h = s.hbar();
    const Region region{cfg.re_min / h, cfg.re_max / h, cfg.im_min / h, cfg.im_max / h};
    const auto zeros = complex_zero_scan(s, region, cfg.cell / h);
    out << "re,im,winding,residual\n";
    for (const auto& z : zeros) {
        out << format_sig(z.location.real() * h) << ',' << format_sig(z.location.imag() * h) << ','
            << z.winding << ',' << format_sig(z.residual) << '\n';
    }
    return 0;
}

inline int cmd_limits(const CommandConfig& cfg, std::ostream& out) {
    out << "bekenstein       S/k_B < " << format_sig(bekenstein_bound(cfg.energy, cfg.length), 6) << "\n"
        << "entropy_rate     |dS/dt|/k_B < " << format_sig(entropy_rate_limit(cfg.energy), 6) << " 1/s\n"
        << "holographic      S/k_B < " << format_sig(holographic_bound(cfg.length), 6) << "\n";
    return 0;
}

inline int dispatch(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "t0") return cmd_t0(cfg, out);
    if (cfg.command == "bounds") return cmd_bounds(cfg, out);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    if (cfg.command == "zeno") return cmd_zeno(cfg, out);
    if (cfg.command == "bochner") return cmd_bochner(cfg, out, err);
    if (cfg.command == "thermo") return cmd_thermo(cfg, out, err);
    if (cfg.command == "zeros") return cmd_zeros(cfg, out);
    if (cfg.command == "limits") return cmd_limits(cfg, out);
    throw ParseError("unknown command '" + cfg.command + "'");
}

} // namespace detail

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CommandConfig cfg;
    CLI::App app{"Lower bounds on the first orthogonalization time of a quantum state", "tzero"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--hbar", cfg.hbar, "Override the spectrum file's hbar")->check(CLI::PositiveNumber);
    app.add_option("--output", cfg.output_path, "Write output to PATH instead of standard output");

    auto with_spectrum = [&](CLI::App* sub) {
        sub->add_option("spectrum", cfg.spectrum_path, "Spectrum file (JSON)")->required();
        return sub;
    };

    auto* t0 = with_spectrum(app.add_subcommand("t0", "First zero of the overlap"));
    t0->add_option("--horizon", cfg.horizon, "Largest time searched");
    t0->add_option("--zero-tol", cfg.zero_tol, "|Phi| threshold for a zero")->capture_default_str();
    t0->add_option("--grid-factor", cfg.grid_factor, "Grid step times spectral diameter")->capture_default_str();
    t0->add_flag("--require-zero", cfg.require_zero, "Exit 1 if no zero is found");

    auto* bounds = with_spectrum(app.add_subcommand("bounds", "Lower bounds on T0"));
    bounds->add_option("--n-max", cfg.n_max, "Highest moment-family order")->capture_default_str()->check(CLI::PositiveNumber);
    bounds->add_option("--gamma-order", cfg.gamma_order, "Order of the log-series")->capture_default_str()->check(CLI::Range(4, 160));
    bounds->add_flag("--csv", cfg.csv, "Emit CSV bound,value,certified,paper_eq");

    auto* scan = with_spectrum(app.add_subcommand("scan", "Tabulate Phi(t) on a uniform grid"));
    scan->add_option("--t-max", cfg.t_max, "Last time of the grid")->required();
    scan->add_option("--step", cfg.step, "Grid step (default grid-factor / spectral diameter)");
    scan->add_option("--grid-factor", cfg.grid_factor, "Used when --step is absent")->capture_default_str();

    auto* zeno = with_spectrum(app.add_subcommand("zeno", "Zeno stasis probability"));
    zeno->add_option("--t", cfg.t, "Total evolution time")->required();
    auto* zeno_n = zeno->add_option("--n", cfg.n, "Number of projective measurements")->check(CLI::PositiveNumber);
    auto* zeno_target = zeno->add_option("--target", cfg.target, "Required stasis probability");
    zeno_n->excludes(zeno_target);
    zeno->add_option("--t0", cfg.t0, "T0 for the (t/T0)^2 comparison");

    auto* bochner = with_spectrum(app.add_subcommand("bochner", "Random Gram-matrix positivity trials"));
    bochner->add_option("--trials", cfg.trials, "Number of point sets")->capture_default_str();
    bochner->add_option("--r-max", cfg.r_max, "Largest point-set size")->capture_default_str();
    bochner->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    bochner->add_option("--horizon", cfg.bochner_horizon, "Points are drawn from [0, horizon]");
    bochner->add_option("--witness", cfg.witness_path, "CSV file for a violation witness");

    auto* thermo = with_spectrum(app.add_subcommand("thermo", "Partition function sweep"));
    thermo->add_option("--beta-min", cfg.beta_min)->required();
    thermo->add_option("--beta-max", cfg.beta_max)->required();
    thermo->add_option("--steps", cfg.steps, "Number of beta intervals")->required();

    auto* zeros = with_spectrum(app.add_subcommand("zeros", "Complex zeros of Phi in a rectangle"));
    zeros->add_option("--re-min", cfg.re_min)->required();
    zeros->add_option("--re-max", cfg.re_max)->required();
    zeros->add_option("--im-min", cfg.im_min)->required();
    zeros->add_option("--im-max", cfg.im_max)->required();
    zeros->add_option("--cell", cfg.cell, "Cell side")->capture_default_str();

    auto* limits = app.add_subcommand("limits", "Entropy limits for energy E (J) and size L (m)");
    limits->add_option("--energy", cfg.energy, "Energy in joules")->required();
    limits->add_option("--length", cfg.length, "Length in meters")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: parse: " << e.what() << "\n";
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    std::ostringstream buffer;
    int status = 0;
    try {
        status = detail::dispatch(cfg, buffer, err);
    } catch (const ParseError& e) {
        err << "error: parse: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: validate: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        err << "error: compute: " << e.what() << "\n";
        return 1;
    }

    if (cfg.output_path.empty()) {
        out << buffer.str();
    } else {
        std::ofstream f(cfg.output_path, std::ios::binary);
        if (!f || !(f << buffer.str())) {
            err << "error: validate: cannot write output path " << cfg.output_path << "\n";
            return 2;
        }
    }
    return status;
}

} // namespace tzero::cli
