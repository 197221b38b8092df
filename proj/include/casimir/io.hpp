#pragma once

// JSON run configuration, CSV files at 17 significant digits, and a small
// static SVG line plotter.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/core.hpp"
#include "casimir/modulation.hpp"
#include "casimir/observables.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using json = nlohmann::json;

/// Parsed configuration plus the effective JSON it came from (defaults filled
/// in, relative paths resolved) for the run manifest.
struct RunConfig {
    json effective;
    CavityConfig cavity;
    ModulationProfile profile;
    QuadratureSpec quadrature;
    int points_per_period = 16;
    std::vector<std::string> warnings;
};

namespace io_detail {

inline double number(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + key + ": missing");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + key + ": expected a number");
    return v.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& path) {
    return j.contains(key) ? number(j, key, path) : fallback;
}

}  // namespace io_detail

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Two-column t,f samples; an optional non-numeric header row is skipped.
/// Times must be uniformly spaced.
inline SampledWindow read_samples_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("modulation.samples_path: cannot open " + file.string());
    std::vector<double> t, f;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a >> b)) {
            if (first) {
                first = false;
                continue;
            }
            throw ConfigError("modulation.samples_path: malformed row '" + line + "'");
        }
        first = false;
        t.push_back(a);
        f.push_back(b);
    }
    if (t.size() < 2) throw ConfigError("modulation.samples_path: need at least two rows");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::abs(dt))
            throw ConfigError("modulation.samples_path: times must be uniformly spaced");
    return SampledWindow{t.front(), dt, f};
}

inline ModulationProfile parse_modulation(json& m, const std::filesystem::path& base_dir) {
    if (!m.is_object()) throw ConfigError("modulation: expected an object");
    if (!m.contains("type") || !m["type"].is_string()) throw ConfigError("modulation.type: missing");
    const std::string type = m["type"];
    const std::string path = "modulation.";
    if (type == "damped_cosine")
        return DampedCosine{io_detail::number(m, "omega", path), io_detail::number(m, "T", path)};
    if (type == "gaussian")
        return GaussianPulse{io_detail::number(m, "omega", path), io_detail::number(m, "sigma_t", path)};
    if (type == "sampled") {
        if (!m.contains("samples_path") || !m["samples_path"].is_string())
            throw ConfigError("modulation.samples_path: missing");
        std::filesystem::path p = m["samples_path"].get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        p = std::filesystem::absolute(p).lexically_normal();
        m["samples_path"] = p.string();
        return read_samples_csv(p);
    }
    throw ConfigError("modulation.type: unknown value '" + type + "'");
}

/// Builds a RunConfig from JSON. `base_dir` resolves relative sample paths.
inline RunConfig parse_config(json j, const std::filesystem::path& base_dir = ".") {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    const double L = io_detail::number(j, "length", "");
    const double lam = io_detail::number(j, "lambda0", "");
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("length: must be positive");
    const double cut = io_detail::number_or(j, "cutoff", CavityConfig::default_cutoff(L), "");
    j["cutoff"] = cut;

    LeftCoupling left = DirichletLimit{};
    if (!j.contains("left_coupling")) j["left_coupling"] = "dirichlet";
    const auto& lc = j["left_coupling"];
    if (lc.is_string()) {
        if (lc.get<std::string>() != "dirichlet") throw ConfigError("left_coupling: expected \"dirichlet\" or {\"g\": value}");
    } else if (lc.is_object()) {
        left = FiniteG{io_detail::number(lc, "g", "left_coupling.")};
    } else {
        throw ConfigError("left_coupling: expected \"dirichlet\" or {\"g\": value}");
    }
    CavityConfig cavity(L, lam, cut, left);

    if (!j.contains("modulation")) throw ConfigError("modulation: missing");
    ModulationProfile profile = parse_modulation(j["modulation"], base_dir);

    QuadratureSpec q;
    if (!j.contains("quadrature")) j["quadrature"] = json::object();
    auto& jq = j["quadrature"];
    if (!jq.is_object()) throw ConfigError("quadrature: expected an object");
    q.rel_tol = io_detail::number_or(jq, "rel_tol", q.rel_tol, "quadrature.");
    q.abs_tol = io_detail::number_or(jq, "abs_tol", q.abs_tol, "quadrature.");
    const double subdiv = io_detail::number_or(jq, "max_subdivisions", q.max_subdivisions, "quadrature.");
    if (subdiv != std::floor(subdiv) || subdiv < 1 || subdiv > 1e8)
        throw ConfigError("quadrature.max_subdivisions: must be a positive integer");
    q.max_subdivisions = static_cast<int>(subdiv);
    q.validate();
    jq = {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}, {"max_subdivisions", q.max_subdivisions}};

    int ppp = 16;
    if (!j.contains("grid")) j["grid"] = json::object();
    if (!j["grid"].is_object()) throw ConfigError("grid: expected an object");
    {
        const double v = io_detail::number_or(j["grid"], "points_per_period", ppp, "grid.");
        if (v != std::floor(v) || v < 8 || v > 1e6) throw ConfigError("grid.points_per_period: must be an integer >= 8");
        ppp = static_cast<int>(v);
        j["grid"]["points_per_period"] = ppp;
    }

    RunConfig rc{j, cavity, profile, q, ppp, {}};
    if (cavity.lambda0_is_large())
        rc.warnings.push_back("lambda0 * length = " + format_double(lam * L) + " is not small; perturbation theory may be poor");
    if (auto periods = profile.drive_periods(); periods && *periods < 10.0)
        rc.warnings.push_back("drive spans only " + format_double(*periods) +
                              " radians of phase over its lifetime (Omega*T < 10); the line is broad");
    return rc;
}

inline json load_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + file.string() + ": " + e.what());
    }
}

inline RunConfig load_config(const std::filesystem::path& file) {
    return parse_config(load_json_file(file), file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
}

// ---------------------------------------------------------------------------

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const std::string& header) : out_(file, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + file.string());
        out_ << header << '\n';
    }

    template <class... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::ofstream out_;
};

/// omega,n file back into a SpectralDensity.
inline SpectralDensity read_spectrum_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("spectrum file: cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("omega,n", 0) != 0)
        throw ConfigError("spectrum file " + file.string() + ": expected header omega,n");
    SpectralDensity s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("spectrum file " + file.string() + ": malformed row");
        try {
            s.grid.points.push_back(std::stod(line.substr(0, comma)));
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError("spectrum file " + file.string() + ": malformed row '" + line + "'");
        }
    }
    for (std::size_t i = 1; i < s.grid.size(); ++i)
        if (!(s.grid.points[i] > s.grid.points[i - 1]))
            throw ConfigError("spectrum file " + file.string() + ": omega must increase");
    return s;
}

// ---------------------------------------------------------------------------

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line plot with framed axes and min/max tick labels.
inline void write_svg_plot(const std::filesystem::path& file, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const PlotSeries& s) {
    const double W = 640, H = 400, ml = 80, mr = 20, mt = 40, mb = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
    }
    if (!(x1 > x0)) { x0 = 0; x1 = 1; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    char buf[128];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << title
        << "</text>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", ml, mt,
                  W - ml - mr, H - mt - mb);
    out << buf;
    auto label = [&](double x, double y, const char* anchor, double v) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"%s\" font-family=\"sans-serif\" font-size=\"11\">%.4g</text>\n", x, y,
                      anchor, v);
        out << buf;
    };
    label(ml, H - mb + 16, "middle", x0);
    label(W - mr, H - mb + 16, "middle", x1);
    label(ml - 6, H - mb, "end", y0);
    label(ml - 6, mt + 10, "end", y1);
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (mt + H - mb) / 2 << ")\">" << ylabel << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

}  // namespace casimir
