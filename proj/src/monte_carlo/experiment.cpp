#include "kljn/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "kljn/error_model.hpp"
#include "kljn/errors.hpp"

namespace kljn {

void ExperimentPlan::validate() const {
    if (n_trials < 1) throw InvalidParameter("experiment: n_trials must be >= 1");
    config.validate();
}

BitSituation trial_situation(const ExperimentPlan& plan, std::size_t index) {
    if (plan.situation_policy.fixed) return *plan.situation_policy.fixed;
    const std::uint64_t bits = derive_seed(plan.master_seed, index, 2).value;
    return BitSituation::from_index(static_cast<int>(bits >> 62));
}

Seed trial_seed(const ExperimentPlan& plan, std::size_t index) { return derive_seed(plan.master_seed, index, 0); }

void ErrorTally::record(const BepOutcome& outcome) {
    ++counts_[static_cast<std::size_t>(outcome.decision)][static_cast<std::size_t>(outcome.actual.index())];
    ++n_total_;
}

void ErrorTally::merge(const ErrorTally& other) {
    for (std::size_t d = 0; d < 3; ++d)
        for (std::size_t s = 0; s < 4; ++s) counts_[d][s] += other.counts_[d][s];
    n_total_ += other.n_total_;
}

std::size_t ErrorTally::count(Decision decision, BitSituation actual) const {
    return counts_[static_cast<std::size_t>(decision)][static_cast<std::size_t>(actual.index())];
}

std::size_t ErrorTally::column_total(BitSituation actual) const {
    std::size_t total = 0;
    for (const auto& row : counts_) total += row[static_cast<std::size_t>(actual.index())];
    return total;
}

std::size_t ErrorTally::row_total(Decision decision) const {
    std::size_t total = 0;
    for (std::size_t c : counts_[static_cast<std::size_t>(decision)]) total += c;
    return total;
}

std::size_t ErrorTally::error_count(ErrorClass error_class) const {
    std::size_t total = 0;
    for (std::size_t d = 0; d < 3; ++d)
        for (int s = 0; s < 4; ++s)
            if (classify_error(BitSituation::from_index(s), static_cast<Decision>(d)) == error_class)
                total += counts_[d][static_cast<std::size_t>(s)];
    return total;
}

std::vector<BepOutcome> run_trials(const ExperimentPlan& plan, const NoiseGenerator& generator) {
    plan.validate();
    std::vector<BepOutcome> outcomes(plan.n_trials);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(plan.threads ? plan.threads : hw, plan.n_trials));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try {
            for (std::size_t i = worker; i < plan.n_trials; i += workers)
                outcomes[i] = run_bep(plan.config, trial_situation(plan, i), trial_seed(plan, i), plan.observable,
                                      generator);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

ErrorTally tally(std::span<const BepOutcome> outcomes) {
    ErrorTally t;
    for (const auto& o : outcomes) t.record(o);
    return t;
}

ErrorTally run_experiment(const ExperimentPlan& plan) { return tally(run_trials(plan)); }

RateEstimate estimate_rate(const ErrorTally& t, RateKind which) {
    switch (which) {
        case RateKind::Eps00:
            return wilson_interval(t.count(Decision::DecideSecure, BitSituation::s00()),
                                   t.column_total(BitSituation::s00()));
        case RateKind::Eps11:
            return wilson_interval(t.count(Decision::DecideSecure, BitSituation::s11()),
                                   t.column_total(BitSituation::s11()));
        case RateKind::RetainedFraction:
            return wilson_interval(t.row_total(Decision::DecideSecure), t.n_total());
    }
    throw InvalidParameter("estimate_rate: unknown rate kind");
}

namespace {

std::vector<double> measured_values(std::span<const BepOutcome> outcomes) {
    std::vector<double> v;
    v.reserve(outcomes.size());
    for (const auto& o : outcomes) v.push_back(o.measured_ms);
    return v;
}

}  // namespace

double measure_estimator_sigma(const SystemConfig& config, BitSituation situation, std::size_t n, Seed seed,
                               Observable observable, const NoiseGenerator& generator) {
    if (n < 100) throw InsufficientData("measure_estimator_sigma: need n >= 100 bit periods");
    ExperimentPlan plan{config, n, SituationPolicy::only(situation), observable, seed};
    const auto values = measured_values(run_trials(plan, generator));
    return sample_stddev(values);
}

ValidationReport two_stage_validation(const SystemConfig& config, BitSituation situation, std::size_t n, Seed seed,
                                      Observable observable) {
    if (situation != BitSituation::s00() && situation != BitSituation::s11())
        throw InvalidParameter("two_stage_validation: situation must be 00 or 11");
    if (n < 100) throw InsufficientData("two_stage_validation: need n >= 100 bit periods");

    const LevelSet levels = levels_for(config, observable);
    const bool low_side = situation == BitSituation::s00();
    const double fraction = low_side ? config.beta : config.delta;
    const double level = low_side ? levels.level_00 : levels.level_11;

    ExperimentPlan plan{config, n, SituationPolicy::only(situation), observable, seed};
    const auto outcomes = run_trials(plan);
    const auto values = measured_values(outcomes);

    ValidationReport r;
    r.situation = situation;
    r.n = n;
    r.threshold = low_side ? levels.delta_1 : levels.delta_2;
    r.sigma_empirical = sample_stddev(values);
    r.predicted_tail = normal_upper_tail(r.threshold / r.sigma_empirical);
    r.expected_errors = static_cast<double>(n) * r.predicted_tail;
    if (r.expected_errors < 20.0) {
        const auto suggested = static_cast<std::size_t>(std::ceil(20.0 / std::max(r.predicted_tail, 1e-300)));
        throw PlanSizeError("two_stage_validation: only " + std::to_string(r.expected_errors) +
                                " errors expected; increase n",
                            suggested);
    }

    const auto starred = static_cast<std::size_t>(std::count_if(
        outcomes.begin(), outcomes.end(), [](const BepOutcome& o) { return o.starred(); }));
    r.observed = wilson_interval(starred, n);

    const PredictorInput input{fraction, config.gamma};
    r.rice_prediction = rice_error_probability_00(input).probability;
    // Model RMS in the measured units: the squared-noise PSD of a flat channel
    // density level/B, with D = 1.
    r.sigma_model = averaged_square_rms(SquaredNoisePsd{level / config.bandwidth, config.bandwidth, 1.0},
                                        config.f_b());
    r.erfc_prediction = normal_upper_tail(r.threshold / r.sigma_model);
    r.within_factor_two =
        r.observed.p_hat >= 0.5 * r.predicted_tail && r.observed.p_hat <= 2.0 * r.predicted_tail;
    r.rice_more_pessimistic = r.rice_prediction > r.erfc_prediction;
    return r;
}

}  // namespace kljn
