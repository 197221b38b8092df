#include "casimir/app.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace casimir;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("casimir_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << body;
    return p;
}

int run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    UNSCOPED_INFO("stderr: " << err.str());
    return rc;
}

std::vector<std::vector<double>> read_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

const char* kSpectrumConfig =
    R"({"length": 1, "lambda0": 0.01, "modulation": {"type": "damped_cosine", "omega": 3, "T": 200},
        "grid": {"points_per_period": 8}})";

}  // namespace

TEST_CASE("spectrum command", "[cli]") {
    const auto dir = scratch("spectrum");
    const auto cfg = write_config(dir, kSpectrumConfig);
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", (dir / "a").string(), "--threads", "1", "--plot"}) == 0);
    const std::string head = slurp(dir / "a" / "spectrum.csv").substr(0, 8);
    CHECK(head == "omega,n\n");
    CHECK(fs::exists(dir / "a" / "spectrum.svg"));
    CHECK(fs::exists(dir / "a" / "manifest.json"));

    const auto rows = read_rows(dir / "a" / "spectrum.csv");
    double mx = 0.0;
    for (const auto& r : rows) mx = std::max(mx, r[1]);
    for (const auto& r : rows) {
        const double n = std::round(r[0] / pi);
        if (n >= 1 && std::abs(r[0] - n * pi) < 1e-9) CHECK(r[1] < 1e-10);
    }
    CHECK(mx > 0.0);

    // determinism across runs and thread counts
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "8"}) == 0);
    CHECK(slurp(dir / "a" / "spectrum.csv") == slurp(dir / "b" / "spectrum.csv"));

    // replay from the manifest
    REQUIRE(run({"replay", (dir / "a" / "manifest.json").string(), "--out", (dir / "r").string()}) == 0);
    CHECK(slurp(dir / "a" / "spectrum.csv") == slurp(dir / "r" / "spectrum.csv"));
}

TEST_CASE("spectrum with zero coupling", "[cli]") {
    const auto dir = scratch("zero");
    const auto cfg = write_config(dir, R"({"length": 1, "lambda0": 0, "modulation": {"type": "gaussian", "omega": 3, "sigma_t": 5}})");
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", dir.string()}) == 0);
    for (const auto& r : read_rows(dir / "spectrum.csv")) CHECK(r[1] == 0.0);
}

TEST_CASE("spectrum verify writes oracle reports", "[cli]") {
    const auto dir = scratch("verify");
    const auto cfg = write_config(dir, kSpectrumConfig);
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", dir.string(), "--verify", "--omega-max", "6.283185307179586"}) == 0);
    const std::string v = slurp(dir / "verify.csv");
    CHECK(v.rfind("quantity,oracle,main,rel_diff,resolution,passed\n", 0) == 0);
    std::stringstream ss(v);
    std::string line;
    std::getline(ss, line);
    int n = 0;
    while (std::getline(ss, line)) {
        ++n;
        CHECK(line.back() == '1');
    }
    CHECK(n >= 21);
}

TEST_CASE("sweep command", "[cli]") {
    const auto dir = scratch("sweep");
    const auto cfg = write_config(dir, R"({"length": 1, "lambda0": 1, "modulation": {"type": "damped_cosine", "omega": 3, "T": 100}})");
    const std::string hi = "12.566370614359172";
    REQUIRE(run({"sweep", "--config", cfg.string(), "--omega-min", "0.1", "--omega-max", hi, "--steps", "41", "--out",
                 (dir / "full").string(), "--plot"}) == 0);
    REQUIRE(run({"sweep", "--config", cfg.string(), "--omega-min", "0.1", "--omega-max", hi, "--steps", "21", "--out",
                 (dir / "half").string(), "--threads", "3"}) == 0);
    CHECK(slurp(dir / "full" / "sweep.csv").rfind("omega_drive,N,P,E\n", 0) == 0);
    CHECK(fs::exists(dir / "full" / "N.svg"));
    CHECK(fs::exists(dir / "full" / "P.svg"));
    const auto full = read_rows(dir / "full" / "sweep.csv");
    const auto half = read_rows(dir / "half" / "sweep.csv");
    REQUIRE(full.size() == 41);
    for (std::size_t j = 0; j < half.size(); ++j) {
        CHECK(half[j][0] == full[2 * j][0]);
        CHECK(half[j][1] == full[2 * j][1]);
        CHECK(half[j][2] == full[2 * j][2]);
    }
    for (const auto& r : full) CHECK(r[3] == r[2]);

    CHECK(run({"sweep", "--config", cfg.string(), "--omega-min", "0", "--omega-max", "1", "--steps", "5", "--out", dir.string()}) == 2);
    CHECK(run({"sweep", "--config", cfg.string(), "--omega-min", "1", "--omega-max", "2", "--steps", "1", "--out", dir.string()}) == 2);
}

TEST_CASE("force command", "[cli]") {
    const auto dir = scratch("force");
    const auto cfg = write_config(dir, R"({"length": 1, "lambda0": 0.01, "cutoff": 32.201324699295384,
        "modulation": {"type": "damped_cosine", "omega": 3, "T": 50}, "grid": {"points_per_period": 8}})");
    CHECK(run({"force", "--config", cfg.string(), "--order", "0", "--out", dir.string()}) == 2);
    REQUIRE(run({"force", "--config", cfg.string(), "--order", "1", "--out", dir.string(), "--t-max", "2", "--verify"}) == 0);
    CHECK(slurp(dir / "force_order1.csv").rfind("omega,reF_left,imF_left,reF_right,imF_right,order\n", 0) == 0);
    CHECK(slurp(dir / "force_order1_time.csv").rfind("t,F\n", 0) == 0);
    std::istringstream imp(slurp(dir / "impulse.txt"));
    std::string key, word, lw, rw;
    double cut, order, re, im, l, r;
    imp >> key >> cut >> word >> order >> key >> re >> im >> lw >> l >> rw >> r;
    CHECK(cut == Catch::Approx(32.201324699295384));
    CHECK(std::abs(re) <= 1e-8 * std::max(std::abs(l), std::abs(r)));
    std::istringstream ver(slurp(dir / "verify.csv"));
    std::string line;
    std::getline(ver, line);
    int rows = 0;
    while (std::getline(ver, line)) {
        ++rows;
        CHECK(line.back() == '1');
    }
    CHECK(rows == 6);
}

TEST_CASE("efficiency command", "[cli]") {
    const auto dir = scratch("eff");
    {
        std::ofstream z(dir / "zero.csv"), s(dir / "s.csv"), o(dir / "other.csv");
        z << "omega,n\n";
        s << "omega,n\n";
        o << "omega,n\n";
        for (int i = 0; i <= 10; ++i) {
            z << i * 0.1 << ",0\n";
            s << i * 0.1 << "," << std::exp(-i * 0.1) << "\n";
            o << i * 0.2 << ",1\n";
        }
    }
    auto eff_cell = [&] {
        std::stringstream ss(slurp(dir / "efficiency.csv"));
        std::string line, cell;
        std::getline(ss, line);
        std::getline(ss, line);
        return std::stod(line.substr(line.rfind(',') + 1));
    };
    REQUIRE(run({"efficiency", "--mode", "two_sided", "--left", (dir / "zero.csv").string(), "--right", (dir / "s.csv").string(),
                 "--k", "0.6", "--out", dir.string()}) == 0);
    CHECK(eff_cell() == Catch::Approx(0.6).epsilon(1e-15));
    REQUIRE(run({"efficiency", "--mode", "two_sided", "--left", (dir / "s.csv").string(), "--right", (dir / "s.csv").string(),
                 "--k", "0.6", "--out", dir.string()}) == 0);
    CHECK(eff_cell() == 0.0);
    REQUIRE(run({"efficiency", "--mode", "massive", "--mass", "0", "--band-lo", "1", "--band-hi", "3", "--k", "0.4", "--out",
                 dir.string()}) == 0);
    CHECK(eff_cell() == 0.4);
    CHECK(run({"efficiency", "--mode", "two_sided", "--left", (dir / "other.csv").string(), "--right", (dir / "s.csv").string(),
               "--out", dir.string()}) == 2);
    CHECK(run({"efficiency", "--mode", "massive", "--mass", "5", "--band-lo", "1", "--band-hi", "3", "--out", dir.string()}) == 2);
}

TEST_CASE("configuration errors", "[cli]") {
    const auto dir = scratch("errors");
    CHECK(run({"spectrum", "--config", (dir / "missing.json").string()}) == 2);
    std::ofstream(dir / "bad.json") << "{not json";
    CHECK(run({"spectrum", "--config", (dir / "bad.json").string()}) == 2);
    const auto c1 = write_config(dir, R"({"length": 1, "lambda0": 0.01, "cutoff": 20,
        "modulation": {"type": "damped_cosine", "omega": 3, "T": 5}})");
    CHECK(run({"spectrum", "--config", c1.string(), "--out", dir.string()}) == 2);
    const auto c2 = write_config(dir, R"({"length": 1, "lambda0": 0.01, "modulation": {"type": "square"}})");
    CHECK(run({"spectrum", "--config", c2.string(), "--out", dir.string()}) == 2);
    const auto c3 = write_config(dir, R"({"length": 1, "lambda0": 0.01, "modulation": {"type": "damped_cosine", "omega": 3, "T": 5}})");
    CHECK(run({"spectrum", "--config", c3.string(), "--out", dir.string(), "--omega-max", "1000"}) == 2);
    CHECK(run({"spectrum", "--config", c3.string(), "--out", dir.string(), "--cutoff", "10"}) == 2);
    CHECK(run({"bogus"}) == 2);
    CHECK(run({"--help"}) == 0);
}

TEST_CASE("flag overrides reach the manifest", "[cli]") {
    const auto dir = scratch("override");
    const auto cfg = write_config(dir, kSpectrumConfig);
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", dir.string(), "--cutoff", "40", "--rel-tol", "1e-8",
                 "--omega-max", "3"}) == 0);
    const auto m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["config"]["cutoff"] == 40.0);
    CHECK(m["config"]["quadrature"]["rel_tol"] == 1e-8);
    CHECK(m["subcommand"] == "spectrum");
    CHECK(m["outputs"][0] == "spectrum.csv");
}

TEST_CASE("sampled modulation from file", "[cli]") {
    const auto dir = scratch("sampled");
    {
        std::ofstream s(dir / "f.csv");
        s << "t,f\n";
        for (int k = 0; k <= 400; ++k) {
            const double t = -20.0 + 0.1 * k;
            s << t << "," << std::exp(-std::abs(t) / 4.0) * std::cos(3.0 * t) << "\n";
        }
    }
    const auto cfg = write_config(dir, R"({"length": 1, "lambda0": 0.01,
        "modulation": {"type": "sampled", "samples_path": "f.csv"}, "grid": {"points_per_period": 8}})");
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", (dir / "o").string(), "--omega-max", "6.283185307179586",
                 "--rel-tol", "1e-7"}) == 0);
    const auto m = json::parse(slurp(dir / "o" / "manifest.json"));
    CHECK(fs::path(m["config"]["modulation"]["samples_path"].get<std::string>()).is_absolute());
}
