#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "config_file.hpp"
#include "json.hpp"
#include "kljn/core.hpp"
#include "kljn/error_model.hpp"
#include "kljn/errors.hpp"
#include "kljn/monte_carlo.hpp"

#ifndef KLJN_VERSION
#define KLJN_VERSION "0.0.0"
#endif

namespace kljn::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

void write_atomically(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << contents;
        f.flush();
        if (!f) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

namespace {

/// Shortest representation that round-trips.
std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

struct GlobalOptions {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_dir;
    bool json = false;
    unsigned threads = 0;
};

struct ConfigOverrides {
    std::optional<double> r0, r1, t_eff, bandwidth, gamma, beta, delta, d_coeff, oversampling;

    void attach(CLI::App& cmd) {
        cmd.add_option("--r0", r0, "Bit-0 resistor, Ohm");
        cmd.add_option("--r1", r1, "Bit-1 resistor, Ohm");
        cmd.add_option("--t-eff", t_eff, "Effective noise temperature, K");
        cmd.add_option("--bandwidth", bandwidth, "Noise bandwidth, Hz");
        cmd.add_option("--gamma", gamma, "bandwidth / f_B");
        cmd.add_option("--beta", beta, "Threshold fraction, 00 side");
        cmd.add_option("--delta", delta, "Threshold fraction, 11 side");
        cmd.add_option("--d-coeff", d_coeff, "Squaring-device coefficient, 1/V");
        cmd.add_option("--oversampling", oversampling, "sample_rate / (2 bandwidth)");
    }

    void apply(SystemConfig& c) const {
        if (r0) c.r0 = *r0;
        if (r1) c.r1 = *r1;
        if (t_eff) c.t_eff = *t_eff;
        if (bandwidth) c.bandwidth = *bandwidth;
        if (gamma) c.gamma = *gamma;
        if (beta) c.beta = *beta;
        if (delta) c.delta = *delta;
        if (d_coeff) c.d_coeff = *d_coeff;
        if (oversampling) c.oversampling = *oversampling;
    }
};

SystemConfig resolve_config(const GlobalOptions& g, const ConfigOverrides& o) {
    SystemConfig c = g.config_path.empty() ? SystemConfig{} : load_config(g.config_path);
    o.apply(c);
    c.validate();
    return c;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory " + p.string());
    return p;
}

class Manifest {
public:
    Manifest(std::string subcommand, const std::vector<std::string>& args, const GlobalOptions& g) {
        j_["tool"] = "kljn";
        j_["version"] = KLJN_VERSION;
        j_["subcommand"] = std::move(subcommand);
        j_["argv"] = args;
        j_["seed"] = g.seed;
        j_["timestamp"] = utc_timestamp();
        j_["outputs"] = ordered_json::array();
    }

    void config(const SystemConfig& c) { j_["config"] = config_to_json(c); }
    ordered_json& parameters() { return j_["parameters"]; }
    void output(const fs::path& p) { j_["outputs"].push_back(p.string()); }

    void write(const fs::path& dir) {
        const fs::path path = dir / "manifest.json";
        output(path);
        write_atomically(path, j_.dump(2) + "\n");
    }

private:
    ordered_json j_;
};

class UsageError : public Error {
public:
    using Error::Error;
};

// "start:stop:step", inclusive of stop.
std::vector<double> parse_range(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || end != item.data() + item.size())
            throw UsageError("range '" + text + "': '" + item + "' is not a number");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw UsageError("range '" + text + "' must be start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start) throw UsageError("range '" + text + "' needs step > 0 and stop >= start");
    std::vector<double> values;
    for (std::size_t i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + 1e-9 * step) break;
        values.push_back(v);
        if (values.size() > 100000) throw UsageError("range '" + text + "' is too long");
    }
    return values;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
    std::vector<double> beta, delta, gamma;
    std::string beta_range, delta_range, gamma_range;
};

int cmd_predict(const PredictOptions& o, const GlobalOptions& g, const std::vector<std::string>& args,
                std::ostream& out, std::ostream& err) {
    std::vector<double> fractions = o.beta;
    std::string side = "beta";
    if (!o.beta_range.empty()) {
        const auto r = parse_range(o.beta_range);
        fractions.insert(fractions.end(), r.begin(), r.end());
    }
    std::vector<double> delta = o.delta;
    if (!o.delta_range.empty()) {
        const auto r = parse_range(o.delta_range);
        delta.insert(delta.end(), r.begin(), r.end());
    }
    if (!fractions.empty() && !delta.empty()) throw UsageError("predict: give --beta or --delta, not both");
    if (fractions.empty()) {
        fractions = delta;
        side = "delta";
    }
    std::vector<double> gammas = o.gamma;
    if (!o.gamma_range.empty()) {
        const auto r = parse_range(o.gamma_range);
        gammas.insert(gammas.end(), r.begin(), r.end());
    }
    if (fractions.empty()) throw UsageError("predict: --beta or --delta is required");
    if (gammas.empty()) throw UsageError("predict: --gamma is required");
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw UsageError("predict: " + side + " must lie in [0, 1], got " + num(f));
    for (double gm : gammas)
        if (!(gm > 0.0) || !std::isfinite(gm)) throw UsageError("predict: gamma must be > 0, got " + num(gm));

    std::ostringstream csv;
    csv << side << ",gamma,eps_rice,eps_tail,pessimism_ratio,small_error_valid\n";
    ordered_json rows = ordered_json::array();
    for (double f : fractions) {
        for (double gm : gammas) {
            const PredictorInput in{f, gm};
            const RiceEstimate rice = side == "beta" ? rice_error_probability_00(in) : rice_error_probability_11(in);
            const double tail = gaussian_tail_probability(in);
            const double ratio = rice.probability / tail;
            if (!rice.small_error_valid)
                err << "warning: eps_rice = " << num(rice.probability) << " at " << side << "=" << num(f)
                    << " gamma=" << num(gm) << " exceeds 0.1; the small-error approximation does not hold\n";
            csv << num(f) << ',' << num(gm) << ',' << num(rice.probability) << ',' << num(tail) << ','
                << num(ratio) << ',' << (rice.small_error_valid ? 1 : 0) << '\n';
            ordered_json row;
            row[side] = f;
            row["gamma"] = gm;
            row["eps_rice"] = rice.probability;
            row["eps_tail"] = tail;
            row["pessimism_ratio"] = ratio;
            row["small_error_valid"] = rice.small_error_valid;
            rows.push_back(std::move(row));
        }
    }
    out << (g.json ? rows.dump(2) + "\n" : csv.str());

    if (!g.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(g.out_dir);
        Manifest m("predict", args, g);
        m.parameters()["side"] = side;
        m.parameters()["fractions"] = fractions;
        m.parameters()["gammas"] = gammas;
        write_atomically(dir / "predict.csv", csv.str());
        m.output(dir / "predict.csv");
        m.write(dir);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::size_t trials = 10000;
    std::string situation = "random";
    std::string observable = "voltage";
    ConfigOverrides overrides;
};

SituationPolicy parse_policy(const std::string& text) {
    if (text == "random") return SituationPolicy::uniform();
    return SituationPolicy::only(parse_situation(text));
}

std::string tally_csv(const ErrorTally& t) {
    std::ostringstream csv;
    csv << "decision,actual_00,actual_01,actual_10,actual_11\n";
    for (Decision d : {Decision::Decide00, Decision::DecideSecure, Decision::Decide11}) {
        csv << to_string(d);
        for (BitSituation s : BitSituation::all()) csv << ',' << t.count(d, s);
        csv << '\n';
    }
    return csv.str();
}

ordered_json rate_json(const ErrorTally& t, RateKind kind) {
    try {
        const RateEstimate r = estimate_rate(t, kind);
        return {{"p_hat", r.p_hat}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"n", r.n}, {"count", r.successes}};
    } catch (const InsufficientData&) {
        return {{"status", "insufficient-data"}};
    }
}

int cmd_simulate(const SimulateOptions& o, const GlobalOptions& g, const std::vector<std::string>& args,
                 std::ostream& out) {
    const SystemConfig config = resolve_config(g, o.overrides);
    ExperimentPlan plan{config, o.trials, parse_policy(o.situation), parse_observable(o.observable), Seed{g.seed},
                        g.threads};
    if (plan.n_trials < 1) throw UsageError("simulate: --trials must be >= 1");
    const ErrorTally t = run_experiment(plan);

    ordered_json summary;
    summary["trials"] = t.n_total();
    summary["situation"] = o.situation;
    summary["observable"] = o.observable;
    summary["seed"] = g.seed;
    summary["error_counts"] = {
        {"correct", t.error_count(ErrorClass::Correct)},
        {"auto_removed", t.error_count(ErrorClass::AutoRemoved)},
        {"error_00_to_secure", t.error_count(ErrorClass::Error00ToSecure)},
        {"error_11_to_secure", t.error_count(ErrorClass::Error11ToSecure)},
    };
    summary["eps_00"] = rate_json(t, RateKind::Eps00);
    summary["eps_11"] = rate_json(t, RateKind::Eps11);
    summary["retained_fraction"] = rate_json(t, RateKind::RetainedFraction);
    summary["predictions"] = {
        {"eps_rice_00", rice_error_probability_00({config.beta, config.gamma}).probability},
        {"eps_tail_00", gaussian_tail_probability({config.beta, config.gamma})},
        {"eps_rice_11", rice_error_probability_11({config.delta, config.gamma}).probability},
        {"eps_tail_11", gaussian_tail_probability({config.delta, config.gamma})},
    };

    const fs::path dir = prepare_out_dir(g.out_dir);
    Manifest m("simulate", args, g);
    m.config(config);
    m.parameters() = {{"trials", o.trials}, {"situation", o.situation}, {"observable", o.observable}};
    write_atomically(dir / "tally.csv", tally_csv(t));
    m.output(dir / "tally.csv");
    write_atomically(dir / "summary.json", summary.dump(2) + "\n");
    m.output(dir / "summary.json");
    m.write(dir);

    out << summary.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::vector<double> gammas, betas;
    std::size_t trials_per_cell = 10000;
    std::string situation = "00";
    std::string observable = "voltage";
    ConfigOverrides overrides;
};

int cmd_sweep(const SweepOptions& o, const GlobalOptions& g, const std::vector<std::string>& args,
              std::ostream& out) {
    if (o.gammas.empty()) throw UsageError("sweep: --gamma-list must not be empty");
    if (o.betas.empty()) throw UsageError("sweep: --beta-list must not be empty");
    if (o.trials_per_cell < 2) throw UsageError("sweep: --trials-per-cell must be >= 2");
    const BitSituation situation = parse_situation(o.situation);
    if (situation.is_mixed()) throw UsageError("sweep: --situation must be 00 or 11");
    const bool low_side = situation == BitSituation::s00();
    const Observable observable = parse_observable(o.observable);
    SystemConfig base = g.config_path.empty() ? SystemConfig{} : load_config(g.config_path);
    o.overrides.apply(base);

    std::ostringstream csv;
    csv << "beta,gamma,trials,errors,eps_hat,ci_low,ci_high,sigma_empirical,eps_two_stage,eps_rice,eps_tail\n";
    std::size_t cell = 0;
    for (double b : o.betas) {
        for (double gm : o.gammas) {
            SystemConfig c = base;
            c.gamma = gm;
            (low_side ? c.beta : c.delta) = b;
            c.validate();
            const LevelSet levels = levels_for(c, observable);
            ExperimentPlan plan{c, o.trials_per_cell, SituationPolicy::only(situation), observable,
                                derive_seed(Seed{g.seed}, cell++, 3), g.threads};
            const auto outcomes = run_trials(plan);
            std::vector<double> ms;
            ms.reserve(outcomes.size());
            std::size_t errors = 0;
            for (const auto& oc : outcomes) {
                ms.push_back(oc.measured_ms);
                errors += oc.starred() ? 1 : 0;
            }
            const RateEstimate r = wilson_interval(errors, outcomes.size());
            const double sigma = sample_stddev(ms);
            const double threshold = low_side ? levels.delta_1 : levels.delta_2;
            const PredictorInput in{b, gm};
            csv << num(b) << ',' << num(gm) << ',' << outcomes.size() << ',' << errors << ',' << num(r.p_hat) << ','
                << num(r.ci_low) << ',' << num(r.ci_high) << ',' << num(sigma) << ','
                << num(normal_upper_tail(threshold / sigma)) << ','
                << num(rice_error_probability_00(in).probability) << ',' << num(gaussian_tail_probability(in))
                << '\n';
        }
    }
    out << csv.str();

    if (!g.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(g.out_dir);
        Manifest m("sweep", args, g);
        m.config(base);
        m.parameters() = {{"gammas", o.gammas},
                          {"betas", o.betas},
                          {"trials_per_cell", o.trials_per_cell},
                          {"situation", o.situation},
                          {"observable", o.observable}};
        write_atomically(dir / "sweep.csv", csv.str());
        m.output(dir / "sweep.csv");
        m.write(dir);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// trace

struct TraceOptions {
    std::string situation = "01";
    std::optional<std::uint64_t> alice_seed, bob_seed;
    ConfigOverrides overrides;
};

int cmd_trace(const TraceOptions& o, const GlobalOptions& g, const std::vector<std::string>& args,
              std::ostream& out) {
    const SystemConfig config = resolve_config(g, o.overrides);
    const BitSituation situation = parse_situation(o.situation);
    auto [alice, bob] = party_seeds(Seed{g.seed});
    if (o.alice_seed) alice = Seed{*o.alice_seed};
    if (o.bob_seed) bob = Seed{*o.bob_seed};
    const ChannelWaveforms ch = bep_waveforms(config, situation, alice, bob);

    const fs::path dir = prepare_out_dir(g.out_dir);
    Manifest m("trace", args, g);
    m.config(config);
    m.parameters() = {{"situation", o.situation}, {"alice_seed", alice.value}, {"bob_seed", bob.value}};
    for (const auto& [name, trace] : {std::pair{"u_ch.csv", &ch.voltage}, std::pair{"i_ch.csv", &ch.current}}) {
        std::ostringstream csv;
        write_trace_csv(csv, *trace);
        write_atomically(dir / name, csv.str());
        m.output(dir / name);
    }
    m.write(dir);
    out << "wrote " << ch.voltage.size() << " samples per trace to " << dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// levels

int cmd_levels(const ConfigOverrides& o, const GlobalOptions& g, const std::vector<std::string>& args,
               std::ostream& out) {
    const SystemConfig config = resolve_config(g, o);
    const LevelSet v = compute_thresholds(config);
    const LevelSet i = compute_current_thresholds(config);

    ordered_json j;
    j["alpha"] = config.alpha();
    j["threshold_bound"] = config.threshold_bound();
    const auto level_json = [](const LevelSet& l) {
        return ordered_json{{"level_00", l.level_00}, {"level_mid", l.level_mid}, {"level_11", l.level_11},
                            {"delta_1", l.delta_1},   {"delta_2", l.delta_2},     {"edge_00", l.edge_00()},
                            {"edge_11", l.edge_11()}};
    };
    j["voltage"] = level_json(v);
    j["current"] = level_json(i);

    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << std::setprecision(6);
        out << "alpha = r1/r0                 " << config.alpha() << "\n";
        out << "beta/delta bound (a-1)/(a+1)  " << config.threshold_bound() << "\n\n";
        out << std::left << std::setw(12) << "" << std::setw(16) << "voltage [V^2]" << "current [A^2]\n";
        const auto row = [&](const char* name, double a, double b) {
            out << std::setw(12) << name << std::setw(16) << a << b << "\n";
        };
        row("level 00", v.level_00, i.level_00);
        row("level 01/10", v.level_mid, i.level_mid);
        row("level 11", v.level_11, i.level_11);
        row("delta_1", v.delta_1, i.delta_1);
        row("delta_2", v.delta_2, i.delta_2);
        row("edge 00", v.edge_00(), i.edge_00());
        row("edge 11", v.edge_11(), i.edge_11());
    }

    if (!g.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(g.out_dir);
        Manifest m("levels", args, g);
        m.config(config);
        write_atomically(dir / "levels.json", j.dump(2) + "\n");
        m.output(dir / "levels.json");
        m.write(dir);
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kirchhoff-law-Johnson-noise key exchange simulator and error analytics", "kljn"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--seed", g.seed, "Master seed (u64)");
    app.add_option("--out", g.out_dir, "Output directory");
    app.add_flag("--json", g.json, "JSON instead of a table on stdout");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

    PredictOptions po;
    auto* predict = app.add_subcommand("predict", "Analytic error probabilities");
    predict->add_option("--beta", po.beta, "00-side threshold fraction(s)")->delimiter(',');
    predict->add_option("--delta", po.delta, "11-side threshold fraction(s)")->delimiter(',');
    predict->add_option("--gamma", po.gamma, "gamma value(s)")->delimiter(',');
    predict->add_option("--beta-range", po.beta_range, "start:stop:step");
    predict->add_option("--delta-range", po.delta_range, "start:stop:step");
    predict->add_option("--gamma-range", po.gamma_range, "start:stop:step");

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo bit-exchange periods");
    simulate->add_option("--trials", so.trials, "Number of bit-exchange periods");
    simulate->add_option("--situation", so.situation, "00 | 01 | 10 | 11 | random");
    simulate->add_option("--observable", so.observable, "voltage | current");
    so.overrides.attach(*simulate);

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo vs analytic over a (beta, gamma) grid");
    sweep->add_option("--gamma-list", sw.gammas, "Comma-separated gammas")->delimiter(',');
    sweep->add_option("--beta-list", sw.betas, "Comma-separated threshold fractions")->delimiter(',');
    sweep->add_option("--trials-per-cell", sw.trials_per_cell, "Trials per grid cell");
    sweep->add_option("--situation", sw.situation, "00 | 11");
    sweep->add_option("--observable", sw.observable, "voltage | current");
    sw.overrides.attach(*sweep);

    TraceOptions to;
    auto* trace = app.add_subcommand("trace", "Export one bit period's channel waveforms");
    trace->add_option("--situation", to.situation, "00 | 01 | 10 | 11");
    trace->add_option("--alice-seed", to.alice_seed, "Override Alice's generator seed");
    trace->add_option("--bob-seed", to.bob_seed, "Override Bob's generator seed");
    to.overrides.attach(*trace);

    ConfigOverrides lo;
    auto* levels = app.add_subcommand("levels", "Exact levels, thresholds and decision bands");
    lo.attach(*levels);

    std::vector<std::string> argv_storage{"kljn"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*predict) return cmd_predict(po, g, args, out, err);
        if (*simulate) return cmd_simulate(so, g, args, out);
        if (*sweep) return cmd_sweep(sw, g, args, out);
        if (*trace) return cmd_trace(to, g, args, out);
        if (*levels) return cmd_levels(lo, g, args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InsufficientData& e) {
        err << "insufficient data: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace kljn::cli
