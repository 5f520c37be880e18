#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "commands.hpp"
#include "config_file.hpp"
#include "json.hpp"
#include "kljn/errors.hpp"
#include "kljn/noise.hpp"

namespace fs = std::filesystem;
using kljn::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("kljn_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("predict") {
    const auto r = invoke({"predict", "--beta", "0.5", "--gamma", "100,200"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(r.out.rfind("beta,gamma,eps_rice,eps_tail,pessimism_ratio,small_error_valid\n", 0) == 0);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(1.11454821520929e-3).epsilon(1e-12));
    CHECK(std::stod(rows[2][2]) == doctest::Approx(2.15158421207599e-6).epsilon(1e-12));
    CHECK(rows[1][5] == "1");
    CHECK(r.err.empty());

    SUBCASE("json") {
        const auto j = invoke({"predict", "--delta", "0.5", "--gamma", "100", "--json"});
        REQUIRE(j.code == 0);
        const auto doc = nlohmann::json::parse(j.out);
        REQUIRE(doc.size() == 1);
        CHECK(doc[0]["delta"] == 0.5);
        CHECK(doc[0]["eps_rice"].get<double>() == doctest::Approx(1.11454821520929e-3).epsilon(1e-12));
    }
    SUBCASE("ranges") {
        const auto g = invoke({"predict", "--beta-range", "0.1:0.5:0.1", "--gamma-range", "100:300:100"});
        REQUIRE(g.code == 0);
        CHECK(csv_rows(g.out).size() == 1 + 5 * 3);
    }
    SUBCASE("large error warns") {
        const auto w = invoke({"predict", "--beta", "0", "--gamma", "100"});
        CHECK(w.code == 0);
        CHECK(w.err.find("warning") != std::string::npos);
        CHECK(csv_rows(w.out)[1][5] == "0");
    }
    SUBCASE("usage errors") {
        CHECK(invoke({"predict", "--gamma", "100"}).code == 2);
        CHECK(invoke({"predict", "--beta", "1.5", "--gamma", "100"}).code == 2);
        CHECK(invoke({"predict", "--beta", "0.5", "--gamma", "-1"}).code == 2);
        CHECK(invoke({"predict", "--beta", "0.5", "--delta", "0.5", "--gamma", "1"}).code == 2);
        CHECK(invoke({"predict", "--beta-range", "0.5:0.1:0.1", "--gamma", "1"}).code == 2);
        CHECK(invoke({"nonsense"}).code == 2);
        CHECK(invoke({}).code == 2);
    }
}

TEST_CASE("levels") {
    const auto r = invoke({"levels", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["alpha"].get<double>() == doctest::Approx(4.5));
    CHECK(j["threshold_bound"].get<double>() == doctest::Approx(3.5 / 5.5).epsilon(1e-15));
    CHECK(j["voltage"]["level_00"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["voltage"]["level_mid"].get<double>() == doctest::Approx(1636.3636363636363 / 1000.0).epsilon(1e-12));
    CHECK(j["voltage"]["delta_1"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["current"]["level_00"].get<double>() > j["current"]["level_11"].get<double>());

    CHECK(invoke({"levels"}).out.find("0.636364") != std::string::npos);
    CHECK(invoke({"levels", "--beta", "0.7"}).code == 2);

    TempDir dir;
    CHECK(invoke({"levels", "--out", dir.str()}).code == 0);
    CHECK(fs::exists(dir.path() / "levels.json"));
    const auto manifest = nlohmann::json::parse(slurp(dir.path() / "manifest.json"));
    CHECK(manifest["subcommand"] == "levels");
    CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("simulate") {
    TempDir a, b;
    const std::vector<std::string> base{"simulate", "--trials", "2000", "--gamma", "16", "--beta", "0.4",
                                        "--delta", "0.4", "--seed", "11"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--out", a.str()});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--out", b.str(), "--threads", "3"});
    REQUIRE(invoke(args_a).code == 0);
    REQUIRE(invoke(args_b).code == 0);

    const std::string tally = slurp(a.path() / "tally.csv");
    CHECK(tally == slurp(b.path() / "tally.csv"));
    CHECK(tally.rfind("decision,actual_00,actual_01,actual_10,actual_11\n", 0) == 0);
    CHECK(csv_rows(tally).size() == 4);

    const auto summary = nlohmann::json::parse(slurp(a.path() / "summary.json"));
    CHECK(summary["trials"] == 2000);
    CHECK(summary["eps_00"].contains("p_hat"));
    const auto manifest = nlohmann::json::parse(slurp(a.path() / "manifest.json"));
    CHECK(manifest["seed"] == 11);
    CHECK(manifest["config"]["gamma"] == 16.0);
    CHECK(manifest["outputs"].size() == 3);
    for (const auto& entry : fs::directory_iterator(a.path()))
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);

    SUBCASE("fixed mixed situation has no starred rate") {
        TempDir c;
        const auto r = invoke({"simulate", "--trials", "100", "--situation", "01", "--gamma", "1000", "--beta", "0.3",
                               "--delta", "0.3", "--out", c.str()});
        REQUIRE(r.code == 0);
        const auto s = nlohmann::json::parse(r.out);
        CHECK(s["eps_00"]["status"] == "insufficient-data");
        CHECK(s["eps_11"]["status"] == "insufficient-data");
        CHECK(s["retained_fraction"]["p_hat"] == 1.0);
    }
    SUBCASE("errors") {
        TempDir c;
        CHECK(invoke({"simulate", "--trials", "0", "--out", c.str()}).code == 2);
        CHECK(invoke({"simulate", "--situation", "02", "--out", c.str()}).code == 2);
        CHECK(invoke({"simulate", "--observable", "power", "--out", c.str()}).code == 2);
        const fs::path blocker = c.path() / "file";
        std::ofstream(blocker) << "x";
        CHECK(invoke({"simulate", "--trials", "10", "--out", (blocker / "sub").string()}).code == 3);
    }
}

TEST_CASE("sweep") {
    const auto r = invoke({"sweep", "--gamma-list", "8,16,32", "--beta-list", "0.4", "--trials-per-cell", "3000",
                           "--seed", "5"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(r.out.rfind("beta,gamma,trials,errors,eps_hat,ci_low,ci_high,sigma_empirical,eps_two_stage,eps_rice,"
                      "eps_tail\n",
                      0) == 0);
    double previous = 1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double eps = std::stod(rows[i][4]);
        CHECK(eps < previous);
        previous = eps;
    }
    CHECK(std::stod(rows[1][10]) == doctest::Approx(0.211855398583397).epsilon(1e-12));
    CHECK(std::stod(rows[2][10]) == doctest::Approx(0.12894951764617).epsilon(1e-12));
    CHECK(std::stod(rows[3][10]) == doctest::Approx(0.054799291699558).epsilon(1e-12));
    CHECK(std::stod(rows[2][9]) == doctest::Approx(0.304432422962904).epsilon(1e-12));

    CHECK(invoke({"sweep", "--beta-list", "0.4"}).code == 2);
    CHECK(invoke({"sweep", "--gamma-list", "16", "--beta-list", "0.4", "--situation", "01"}).code == 2);
    CHECK(invoke({"sweep", "--gamma-list", "16", "--beta-list", "0.9"}).code == 2);

    TempDir dir;
    REQUIRE(invoke({"sweep", "--gamma-list", "16", "--beta-list", "0.4", "--trials-per-cell", "100", "--out",
                    dir.str()})
                .code == 0);
    CHECK(fs::exists(dir.path() / "sweep.csv"));
    CHECK(fs::exists(dir.path() / "manifest.json"));
}

TEST_CASE("trace") {
    TempDir a, b;
    REQUIRE(invoke({"trace", "--situation", "01", "--alice-seed", "1", "--bob-seed", "2", "--out", a.str()}).code ==
            0);
    REQUIRE(invoke({"trace", "--situation", "10", "--alice-seed", "2", "--bob-seed", "1", "--out", b.str()}).code ==
            0);
    const kljn::SystemConfig cfg;
    const auto rows = csv_rows(slurp(a.path() / "u_ch.csv"));
    CHECK(rows.size() == 1 + cfg.samples_per_bep());
    CHECK(rows[0][0] == "t_seconds");
    CHECK(slurp(a.path() / "u_ch.csv") == slurp(b.path() / "u_ch.csv"));
    CHECK(fs::exists(a.path() / "i_ch.csv"));
    CHECK(fs::exists(a.path() / "manifest.json"));

    SUBCASE("in-band spectrum is flat") {
        TempDir c;
        REQUIRE(invoke({"trace", "--gamma", "20000", "--seed", "3", "--out", c.str()}).code == 0);
        const auto data = csv_rows(slurp(c.path() / "u_ch.csv"));
        std::vector<double> v;
        for (std::size_t i = 1; i < data.size(); ++i) v.push_back(std::stod(data[i][1]));
        const kljn::NoiseTrace trace(v, 1.0 / cfg.sample_rate());
        const auto psd = kljn::estimate_psd(trace, 640);
        double sum = 0.0;
        int count = 0;
        for (const auto& p : psd)
            if (p.frequency > 0.05 * cfg.bandwidth && p.frequency < 0.95 * cfg.bandwidth) {
                sum += p.density;
                ++count;
            }
        const double mean = sum / count;
        for (const auto& p : psd)
            if (p.frequency > 0.05 * cfg.bandwidth && p.frequency < 0.95 * cfg.bandwidth)
                CHECK(std::abs(p.density / mean - 1.0) < 0.2);
    }
}

TEST_CASE("config files") {
    TempDir dir;
    const fs::path cfg = dir.path() / "run.cfg";
    std::ofstream(cfg) << "# short periods\ngamma = 16\nbeta = 0.4  # tighter\n\ndelta=0.4\n";
    const auto r = invoke({"levels", "--json", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["voltage"]["delta_1"].get<double>() == doctest::Approx(0.4));

    // command-line overrides win over the file
    const auto o = invoke({"levels", "--json", "--config", cfg.string(), "--beta", "0.2"});
    CHECK(nlohmann::json::parse(o.out)["voltage"]["delta_1"].get<double>() == doctest::Approx(0.2));

    const fs::path bad = dir.path() / "bad.cfg";
    std::ofstream(bad) << "gamma = 16\ncolour = blue\n";
    const auto b = invoke({"levels", "--config", bad.string()});
    CHECK(b.code == 2);
    CHECK(b.err.find("2") != std::string::npos);
    CHECK(invoke({"levels", "--config", (dir.path() / "missing.cfg").string()}).code == 3);

    std::istringstream text("r0 = 1000\nr1 = 5000\n");
    const auto parsed = kljn::cli::parse_config(text);
    CHECK(parsed.r0 == 1000.0);
    std::istringstream round(kljn::cli::format_config(parsed));
    const auto again = kljn::cli::parse_config(round);
    CHECK(again.r1 == parsed.r1);
    CHECK(again.t_eff == parsed.t_eff);
    std::istringstream malformed("gamma 16\n");
    CHECK_THROWS_AS(kljn::cli::parse_config(malformed), kljn::ConfigError);
}

TEST_CASE("write_atomically") {
    TempDir dir;
    const fs::path p = dir.path() / "x.txt";
    kljn::cli::write_atomically(p, "one");
    kljn::cli::write_atomically(p, "two");
    CHECK(slurp(p) == "two");
    CHECK(std::distance(fs::directory_iterator(dir.path()), fs::directory_iterator{}) == 1);
    CHECK_THROWS_AS(kljn::cli::write_atomically(dir.path() / "no" / "such" / "dir" / "x", "z"), kljn::IoError);
}
