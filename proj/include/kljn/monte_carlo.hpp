#pragma once
// Ensembles of simulated bit-exchange periods and the statistics built on them.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "kljn/core.hpp"
#include "kljn/stats.hpp"

namespace kljn {

struct SituationPolicy {
    /// Empty means uniform-random over the four situations.
    std::optional<BitSituation> fixed;

    static SituationPolicy uniform() { return {}; }
    static SituationPolicy only(BitSituation s) { return {s}; }
};

struct ExperimentPlan {
    SystemConfig config;
    std::size_t n_trials = 1;
    SituationPolicy situation_policy;
    Observable observable = Observable::Voltage;
    Seed master_seed{};
    /// 0 = hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const;
};

/// Situation and seed for trial `index` of a plan.
BitSituation trial_situation(const ExperimentPlan& plan, std::size_t index);
Seed trial_seed(const ExperimentPlan& plan, std::size_t index);

/// Confusion counts, rows = decision, columns = actual 00, 01, 10, 11.
class ErrorTally {
public:
    void record(const BepOutcome& outcome);
    void merge(const ErrorTally& other);

    std::size_t count(Decision decision, BitSituation actual) const;
    std::size_t column_total(BitSituation actual) const;
    std::size_t row_total(Decision decision) const;
    std::size_t error_count(ErrorClass error_class) const;
    std::size_t n_total() const { return n_total_; }

    const std::array<std::array<std::size_t, 4>, 3>& counts() const { return counts_; }

    friend bool operator==(const ErrorTally&, const ErrorTally&) = default;

private:
    std::array<std::array<std::size_t, 4>, 3> counts_{};
    std::size_t n_total_ = 0;
};

/// Runs every trial; outcomes are in trial order regardless of threading.
std::vector<BepOutcome> run_trials(const ExperimentPlan& plan, const NoiseGenerator& generator = {});

ErrorTally tally(std::span<const BepOutcome> outcomes);

ErrorTally run_experiment(const ExperimentPlan& plan);

enum class RateKind { Eps00, Eps11, RetainedFraction };

/// eps_00 = P(secure | 00), eps_11 = P(secure | 11), retained = P(secure).
/// Throws InsufficientData on an empty denominator.
RateEstimate estimate_rate(const ErrorTally& tally, RateKind which);

/// Sample standard deviation of the measured mean squares of n >= 100 bit
/// periods in `situation`.
double measure_estimator_sigma(const SystemConfig& config, BitSituation situation, std::size_t n, Seed seed,
                               Observable observable = Observable::Voltage,
                               const NoiseGenerator& generator = {});

struct ValidationReport {
    BitSituation situation;
    std::size_t n = 0;
    double threshold = 0.0;        ///< Delta_1 or Delta_2, V^2
    double sigma_empirical = 0.0;  ///< spread of the measured mean square
    double sigma_model = 0.0;      ///< u_tau of the analytic model
    double predicted_tail = 0.0;   ///< Q(threshold / sigma_empirical)
    RateEstimate observed;         ///< starred-error rate
    double rice_prediction = 0.0;
    double erfc_prediction = 0.0;  ///< Q(threshold / sigma_model)
    double expected_errors = 0.0;  ///< n * predicted_tail
    bool within_factor_two = false;
    bool rice_more_pessimistic = false;
};

/// Measures the estimator spread and the starred-error rate on the same n
/// periods and compares them with the Gaussian tail at the measured spread, the
/// Rice prediction and the erfc prediction at the model RMS. Situation must be
/// 00 or 11. Throws PlanSizeError when fewer than 20 errors are expected.
ValidationReport two_stage_validation(const SystemConfig& config, BitSituation situation, std::size_t n,
                                      Seed seed, Observable observable = Observable::Voltage);

}  // namespace kljn
