#pragma once

// Command-line front end. run_cli() is the whole program; tools/casimir.cpp
// only forwards argv. Exit codes: 0 ok, 2 configuration or usage error,
// 3 numerical failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/core.hpp"
#include "casimir/force.hpp"
#include "casimir/io.hpp"
#include "casimir/modulation.hpp"
#include "casimir/observables.hpp"
#include "casimir/validation.hpp"

namespace casimir {

inline constexpr const char* tool_version = "0.1.0";

/// Numerical failure at a named point; maps to exit code 3.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CliOptions {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    bool plot = false;
    bool verify = false;
    unsigned threads = 0;
    std::optional<double> rel_tol;
    std::optional<double> cutoff;

    std::optional<double> omega_max;  // spectrum, force
    double omega_min = 0.0;           // sweep
    double sweep_max = 0.0;
    int steps = 0;
    std::string order = "1";  // force
    std::optional<double> t_max;
    int t_points = 201;
    std::string mode;  // efficiency
    std::string left_path, right_path, weight_path;
    double k = 1.0;
    double mass = 0.0;
    std::optional<double> band_lo, band_hi;
};

inline void to_json(json& j, const CliOptions& o) {
    j = json{{"command", o.command},     {"config_path", o.config_path}, {"plot", o.plot},
             {"verify", o.verify},       {"threads", o.threads},         {"omega_min", o.omega_min},
             {"sweep_max", o.sweep_max}, {"steps", o.steps},             {"order", o.order},
             {"t_points", o.t_points},   {"mode", o.mode},               {"left_path", o.left_path},
             {"right_path", o.right_path}, {"weight_path", o.weight_path}, {"k", o.k},
             {"mass", o.mass}};
    auto opt = [&j](const char* key, const std::optional<double>& v) { j[key] = v ? json(*v) : json(nullptr); };
    opt("rel_tol", o.rel_tol);
    opt("cutoff", o.cutoff);
    opt("omega_max", o.omega_max);
    opt("t_max", o.t_max);
    opt("band_lo", o.band_lo);
    opt("band_hi", o.band_hi);
}

inline void from_json(const json& j, CliOptions& o) {
    j.at("command").get_to(o.command);
    j.at("config_path").get_to(o.config_path);
    j.at("plot").get_to(o.plot);
    j.at("verify").get_to(o.verify);
    j.at("threads").get_to(o.threads);
    j.at("omega_min").get_to(o.omega_min);
    j.at("sweep_max").get_to(o.sweep_max);
    j.at("steps").get_to(o.steps);
    j.at("order").get_to(o.order);
    j.at("t_points").get_to(o.t_points);
    j.at("mode").get_to(o.mode);
    j.at("left_path").get_to(o.left_path);
    j.at("right_path").get_to(o.right_path);
    j.at("weight_path").get_to(o.weight_path);
    j.at("k").get_to(o.k);
    j.at("mass").get_to(o.mass);
    auto opt = [&j](const char* key, std::optional<double>& v) {
        if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<double>();
        else v.reset();
    };
    opt("rel_tol", o.rel_tol);
    opt("cutoff", o.cutoff);
    opt("omega_max", o.omega_max);
    opt("t_max", o.t_max);
    opt("band_lo", o.band_lo);
    opt("band_hi", o.band_hi);
}

namespace cli_detail {

namespace fs = std::filesystem;

struct Context {
    CliOptions opt;
    std::optional<RunConfig> cfg;
    std::vector<std::string> outputs;
    std::ostream* log = &std::cerr;

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return fs::path(opt.out_dir) / name;
    }
};

/// Command-line overrides applied to the file's JSON before parsing.
inline RunConfig effective_config(json j, const CliOptions& o, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (o.cutoff) j["cutoff"] = *o.cutoff;
    if (o.rel_tol) {
        if (!j.contains("quadrature") || !j["quadrature"].is_object()) j["quadrature"] = json::object();
        j["quadrature"]["rel_tol"] = *o.rel_tol;
    }
    return parse_config(std::move(j), base_dir);
}

inline void write_verify(Context& c, const std::vector<OracleReport>& reps) {
    CsvWriter w(c.out("verify.csv"), "quantity,oracle,main,rel_diff,resolution,passed");
    int failed = 0;
    for (const auto& r : reps) {
        w.row(r.quantity, r.oracle, r.main, r.rel_diff, r.resolution, r.passed ? 1 : 0);
        failed += r.passed ? 0 : 1;
    }
    if (failed) *c.log << "verify: " << failed << " of " << reps.size() << " checks outside tolerance\n";
}

inline long even_panels(double length, double step) {
    auto n = static_cast<long>(std::ceil(length / step));
    n = std::clamp(n, 2L, 1L << 24);
    return n + (n % 2);
}

inline std::string at_omega(const char* what, double w) { return std::string(what) + " at omega=" + format_double(w); }

// ---------------------------------------------------------------------------

inline void cmd_spectrum(Context& c) {
    const auto& rc = *c.cfg;
    const auto& cav = rc.cavity;
    const double wmax = c.opt.omega_max.value_or(std::min(cav.cutoff(), 10.0 * pi / cav.length()));
    if (!(wmax > 0.0) || wmax > cav.cutoff()) throw ConfigError("--omega-max: must lie in (0, cutoff]");
    if (!cav.dirichlet()) throw ConfigError("left_coupling: spectra need the Dirichlet left mirror");
    const auto grid = make_grid(cav, wmax, rc.points_per_period);
    SpectralDensity s{grid, std::vector<double>(grid.size())};
    std::vector<std::string> errors(grid.size());
    parallel_for(grid.size(), resolve_threads(c.opt.threads), [&](std::size_t i) {
        try {
            s.values[i] = emission_spectrum(cav, rc.profile, grid.points[i], rc.quadrature);
        } catch (const std::exception& e) {
            errors[i] = at_omega("n", grid.points[i]) + ": " + e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw NumericFailure(e);

    CsvWriter w(c.out("spectrum.csv"), "omega,n");
    for (std::size_t i = 0; i < grid.size(); ++i) w.row(grid.points[i], s.values[i]);
    if (c.opt.plot) write_svg_plot(c.out("spectrum.svg"), "Emission spectrum", "omega", "n(omega)", {grid.points, s.values});

    if (c.opt.verify) {
        auto reps = cross_check_spectrum(cav, rc.profile, 20, 20240611, 1e-6, resolve_threads(c.opt.threads));
        const double step = std::min(rc.profile.line_width(), cav.resonance_spacing()) / 20.0;
        const long panels = even_panels(cav.cutoff(), step);
        for (double frac : {0.25, 0.5, 0.75}) {
            const auto idx = static_cast<std::size_t>(frac * static_cast<double>(grid.size() - 1));
            const double w0 = grid.points[idx];
            if (w0 == 0.0) continue;
            const auto o = oracle_spectrum(cav, rc.profile, w0, panels, 1e-8);
            OracleReport r{"n(" + format_double(w0) + ") simpson", o.value, s.values[idx], 0.0,
                           "simpson panels=" + std::to_string(panels) + " doubling change=" + format_double(o.change()),
                           false};
            r.rel_diff = relative_difference(r.oracle, r.main);
            r.passed = o.converged && (r.rel_diff <= 1e-6 || std::max(std::abs(r.oracle), std::abs(r.main)) < 1e-300);
            reps.push_back(r);
        }
        write_verify(c, reps);
    }
}

inline void cmd_sweep(Context& c) {
    const auto& rc = *c.cfg;
    const auto& o = c.opt;
    if (!(o.omega_min > 0.0) || !(o.sweep_max > o.omega_min)) throw ConfigError("--omega-min/--omega-max: need 0 < min < max");
    if (o.steps < 2) throw ConfigError("--steps: need at least 2");
    if (!rc.cavity.dirichlet()) throw ConfigError("left_coupling: totals need the Dirichlet left mirror");
    std::vector<double> drives(static_cast<std::size_t>(o.steps));
    for (int i = 0; i < o.steps; ++i) drives[static_cast<std::size_t>(i)] = o.omega_min + i * (o.sweep_max - o.omega_min) / (o.steps - 1);
    drives.back() = o.sweep_max;
    const auto rows = sweep_totals(rc.cavity, drives, rc.quadrature, resolve_threads(o.threads));

    CsvWriter w(c.out("sweep.csv"), "omega_drive,N,P,E");
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (r.error) {
            ++failed;
            w.row(r.drive, NAN, NAN, NAN);
        } else {
            w.row(r.drive, r.totals.particle_number, r.totals.momentum, r.totals.energy);
        }
    }
    if (failed) {
        CsvWriter e(c.out("sweep_errors.csv"), "omega_drive,error");
        for (const auto& r : rows)
            if (r.error) e.row(r.drive, "\"" + *r.error + "\"");
        *c.log << "sweep: " << failed << " of " << rows.size() << " drive frequencies failed, see sweep_errors.csv\n";
    }
    if (failed == rows.size()) throw NumericFailure("sweep: every drive frequency failed");

    if (o.plot) {
        PlotSeries n, p;
        for (const auto& r : rows) {
            n.x.push_back(r.drive);
            p.x.push_back(r.drive);
            n.y.push_back(r.error ? NAN : r.totals.particle_number);
            p.y.push_back(r.error ? NAN : r.totals.momentum);
        }
        write_svg_plot(c.out("N.svg"), "Total particle number", "drive frequency", "N", n);
        write_svg_plot(c.out("P.svg"), "Total momentum", "drive frequency", "P", p);
    }

    if (o.verify) {
        std::vector<OracleReport> reps;
        for (std::size_t idx : {std::size_t{0}, rows.size() / 2, rows.size() - 1}) {
            const auto& r = rows[idx];
            if (r.error) continue;
            const long panels = 200000;
            for (int moment : {0, 1}) {
                const auto ov = oracle_monochromatic(rc.cavity, r.drive, moment, panels, 1e-9);
                OracleReport rep;
                rep.quantity = std::string(moment == 0 ? "N" : "P") + "(" + format_double(r.drive) + ")";
                rep.oracle = ov.value;
                rep.main = moment == 0 ? r.totals.particle_number : r.totals.momentum;
                rep.rel_diff = relative_difference(rep.oracle, rep.main);
                rep.resolution = "simpson panels=" + std::to_string(panels) + " doubling change=" + format_double(ov.change());
                rep.passed = ov.converged && rep.rel_diff <= 1e-7;
                reps.push_back(rep);
            }
        }
        write_verify(c, reps);
    }
}

inline void cmd_force(Context& c) {
    const auto& rc = *c.cfg;
    const auto& cav = rc.cavity;
    const auto& o = c.opt;
    const bool first = o.order == "1" || o.order == "both";
    const bool second = o.order == "2" || o.order == "both";
    if (!cav.dirichlet()) throw ConfigError("left_coupling: forces need the Dirichlet left mirror");
    const double wmax = o.omega_max.value_or(std::min(4.0 * pi / cav.length(), 0.5 * cav.cutoff()));
    if (!(wmax > 0.0) || !(wmax < cav.cutoff())) throw ConfigError("--omega-max: must lie in (0, cutoff)");
    if (second) *c.log << "force: second order evaluates two nested integrals per mirror and frequency; expect minutes\n";

    const auto grid = make_symmetric_grid(cav, wmax, rc.points_per_period);
    ForceBreakdown fb;
    try {
        fb = total_force_spectrum(cav, rc.profile, grid, first, second, rc.quadrature, resolve_threads(o.threads));
    } catch (const ToleranceNotReached& e) {
        throw NumericFailure(std::string("force: ") + e.what());
    }

    std::ofstream imp(c.out("impulse.txt"), std::ios::binary);
    imp << "cutoff " << format_double(fb.cutoff) << "\n";
    for (int order : {1, 2}) {
        if ((order == 1 && !first) || (order == 2 && !second)) continue;
        const auto& l = order == 1 ? *fb.left1 : *fb.left2;
        const auto& r = order == 1 ? *fb.right1 : *fb.right2;
        const std::string name = "force_order" + std::to_string(order);
        CsvWriter w(c.out(name + ".csv"), "omega,reF_left,imF_left,reF_right,imF_right,order");
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row(grid[i], l.values[i].real(), l.values[i].imag(), r.values[i].real(), r.values[i].imag(), order);

        const auto tot = fb.total(order);
        const auto im = impulse(tot);
        const auto il = impulse(l);
        const auto ir = impulse(r);
        imp << "order " << order << " F_total[0] " << format_double(im.value) << " " << format_double(im.imaginary)
            << " left " << format_double(il.value) << " right " << format_double(ir.value) << "\n";

        if (o.t_max) {
            std::vector<double> times(static_cast<std::size_t>(o.t_points));
            for (int i = 0; i < o.t_points; ++i)
                times[static_cast<std::size_t>(i)] = -*o.t_max + 2.0 * *o.t_max * i / std::max(1, o.t_points - 1);
            const auto sig = time_domain(tot, times);
            if (sig.alias_risk)
                *c.log << "force: frequency spacing exceeds pi/(4 t_max); the time signal may alias\n";
            if (sig.max_imag_ratio > 1e-6)
                *c.log << "force: imaginary residue " << format_double(sig.max_imag_ratio) << " of the signal scale\n";
            CsvWriter tw(c.out(name + "_time.csv"), "t,F");
            for (std::size_t i = 0; i < times.size(); ++i) tw.row(times[i], sig.values[i]);
            if (o.plot) write_svg_plot(c.out(name + "_time.svg"), "Total force, order " + std::to_string(order), "t", "F(t)",
                                       {times, sig.values});
        }
        if (o.plot) {
            std::vector<double> re(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) re[i] = tot.values[i].real();
            write_svg_plot(c.out(name + ".svg"), "Re F[omega], order " + std::to_string(order), "omega", "Re F", {grid, re});
        }
    }

    if (o.verify && first) {
        std::vector<OracleReport> reps;
        const long panels = even_panels(cav.cutoff(), cav.resonance_spacing() / 64.0);
        const std::size_t mid = grid.size() / 2;
        for (std::size_t i : {mid, mid + (grid.size() - mid) / 2, grid.size() - 1}) {
            for (Mirror m : {Mirror::left, Mirror::right}) {
                const cplx main = (m == Mirror::left ? fb.left1 : fb.right1)->values[i];
                const cplx ref = oracle_force1(cav, rc.profile, m, grid[i], panels);
                const cplx half = oracle_force1(cav, rc.profile, m, grid[i], panels / 2 + (panels / 2) % 2);
                // the integrals are bounded by 4 * cutoff, so rounding in either path
                // sits near eps * lambda0 |f[w]| cutoff / 2pi
                const double scale = cav.lambda0() * std::abs(rc.profile.fourier(grid[i])) * cav.cutoff() / (2.0 * pi);
                OracleReport r;
                r.quantity = std::string("|F1_") + to_string(m) + "(" + format_double(grid[i]) + ")|";
                r.oracle = std::abs(ref);
                r.main = std::abs(main);
                const double d = std::abs(ref - main);
                r.rel_diff = d == 0.0 ? 0.0 : d / std::max(std::abs(ref), std::abs(main));
                r.resolution = "simpson panels=" + std::to_string(panels) +
                               " halving change=" + format_double(std::abs(ref - half));
                r.passed = d <= 1e-6 * std::max(std::abs(ref), std::abs(main)) + 1e-8 * scale;
                reps.push_back(r);
            }
        }
        write_verify(c, reps);
    }
}

inline void cmd_efficiency(Context& c) {
    const auto& o = c.opt;
    CsvWriter w(c.out("efficiency.csv"), "mode,k,m,band_lo,band_hi,left,right,weight,eta");
    if (o.mode == "two_sided") {
        if (o.left_path.empty() || o.right_path.empty()) throw ConfigError("--left/--right: both spectra are required");
        const auto l = read_spectrum_csv(o.left_path);
        const auto r = read_spectrum_csv(o.right_path);
        double eta;
        try {
            eta = efficiency_two_sided(l, r, o.k);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        w.row("two_sided", o.k, "", "", "", o.left_path, o.right_path, "", eta);
    } else if (o.mode == "massive") {
        if (!o.band_lo || !o.band_hi) throw ConfigError("--band-lo/--band-hi: both band edges are required");
        std::optional<SpectralDensity> weight;
        if (!o.weight_path.empty()) weight = read_spectrum_csv(o.weight_path);
        double eta;
        try {
            eta = efficiency_massive(o.mass, o.k, Band{*o.band_lo, *o.band_hi}, weight ? &*weight : nullptr);
        } catch (const EmptyBand& e) {
            throw ConfigError(e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        w.row("massive", o.k, o.mass, *o.band_lo, *o.band_hi, "", "", o.weight_path, eta);
    } else {
        throw ConfigError("--mode: expected two_sided or massive");
    }
}

inline void dispatch(Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(c.opt.out_dir);
    if (c.cfg)
        for (const auto& wmsg : c.cfg->warnings) *c.log << "warning: " << wmsg << "\n";
    if (c.opt.command == "spectrum") cmd_spectrum(c);
    else if (c.opt.command == "sweep") cmd_sweep(c);
    else if (c.opt.command == "force") cmd_force(c);
    else if (c.opt.command == "efficiency") cmd_efficiency(c);
    else throw ConfigError("unknown subcommand " + c.opt.command);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json m;
    m["tool"] = "casimir";
    m["version"] = tool_version;
    m["subcommand"] = c.opt.command;
    m["options"] = c.opt;
    m["config"] = c.cfg ? c.cfg->effective : json(nullptr);
    m["outputs"] = c.outputs;
    m["duration_seconds"] = secs;
    std::ofstream(fs::path(c.opt.out_dir) / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
}

}  // namespace cli_detail

/// Full program. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace cli_detail;
    CLI::App app{"Asymmetric dynamical Casimir cavity: spectra, totals, forces, efficiency"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);
    CliOptions o;
    std::string manifest_path;
    std::optional<std::string> replay_out;

    auto common = [&](CLI::App* s, bool needs_config) {
        auto* cfg = s->add_option("--config", o.config_path, "JSON configuration file");
        if (needs_config) cfg->required();
        s->add_option("--out", o.out_dir, "output directory")->capture_default_str();
        s->add_flag("--plot", o.plot, "also write SVG plots");
        s->add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
        s->add_option("--rel-tol", o.rel_tol, "override quadrature.rel_tol");
        s->add_option("--cutoff", o.cutoff, "override cutoff");
        s->add_flag("--verify", o.verify, "write verify.csv with brute-force oracle comparisons");
    };

    auto* sp = app.add_subcommand("spectrum", "emission spectrum n(omega) on a grid");
    common(sp, true);
    sp->add_option("--omega-max", o.omega_max, "upper grid frequency (default min(cutoff, 10 pi/L))");

    auto* sw = app.add_subcommand("sweep", "N, P, E against drive frequency (monochromatic drive)");
    common(sw, true);
    sw->add_option("--omega-min", o.omega_min, "first drive frequency")->required();
    sw->add_option("--omega-max", o.sweep_max, "last drive frequency")->required();
    sw->add_option("--steps", o.steps, "number of drive frequencies")->required();

    auto* fo = app.add_subcommand("force", "force spectrum on both mirrors and the impulse");
    common(fo, true);
    fo->add_option("--omega-max", o.omega_max, "grid covers [-omega_max, omega_max]");
    fo->add_option("--order", o.order, "1, 2 or both")->check(CLI::IsMember({"1", "2", "both"}))->capture_default_str();
    fo->add_option("--t-max", o.t_max, "also reconstruct F(t) on [-t_max, t_max]");
    fo->add_option("--t-points", o.t_points, "time samples")->check(CLI::Range(2, 1000000))->capture_default_str();

    auto* ef = app.add_subcommand("efficiency", "propelling efficiency");
    common(ef, false);
    ef->add_option("--mode", o.mode, "two_sided or massive")->required()->check(CLI::IsMember({"two_sided", "massive"}));
    ef->add_option("--left", o.left_path, "left spectrum CSV (omega,n)");
    ef->add_option("--right", o.right_path, "right spectrum CSV (omega,n)");
    ef->add_option("--weight", o.weight_path, "optional weight spectrum CSV for massive mode");
    ef->add_option("--k", o.k, "work-to-radiation fraction in (0, 1]")->capture_default_str();
    ef->add_option("--mass", o.mass, "field mass")->capture_default_str();
    ef->add_option("--band-lo", o.band_lo, "lower band edge");
    ef->add_option("--band-hi", o.band_hi, "upper band edge");

    auto* rp = app.add_subcommand("replay", "re-run from a manifest.json");
    rp->add_option("manifest", manifest_path, "manifest.json")->required();
    rp->add_option("--out", replay_out, "output directory (default: the recorded one)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Context c;
    c.log = &err;
    try {
        if (rp->parsed()) {
            const json m = load_json_file(manifest_path);
            try {
                c.opt = m.at("options").get<CliOptions>();
                if (replay_out) c.opt.out_dir = *replay_out;
                if (!m.at("config").is_null()) c.cfg = parse_config(m.at("config"));
            } catch (const json::exception& e) {
                throw ConfigError(std::string("manifest: ") + e.what());
            }
        } else {
            for (auto* s : {sp, sw, fo, ef})
                if (s->parsed()) o.command = s->get_name();
            c.opt = o;
            if (!o.config_path.empty()) {
                const fs::path p = o.config_path;
                c.cfg = effective_config(load_json_file(p), o, p.has_parent_path() ? p.parent_path() : fs::path("."));
            }
        }
        dispatch(c);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyBand& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args);
}

}  // namespace casimir
