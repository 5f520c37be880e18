#pragma once
// The ideal Kirchhoff-loop key exchange: configuration, channel levels, decision
// thresholds, one simulated bit-exchange period, and key distillation.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kljn/noise.hpp"
#include "kljn/seed.hpp"

namespace kljn {

struct SystemConfig {
    double r0 = 2000.0;            ///< Ohm, resistor for bit 0
    double r1 = 9000.0;            ///< Ohm, resistor for bit 1
    double t_eff = 1e-6 / (4.0 * kBoltzmann);  ///< K; with the default bandwidth, 4 k T B = 1e-3 V^2/Ohm
    double bandwidth = 1000.0;     ///< Hz, noise bandwidth of the generators
    double gamma = 100.0;          ///< bandwidth / f_B, correlation times per bit period
    double beta = 0.5;             ///< threshold fraction on the 00 side
    double delta = 0.5;            ///< threshold fraction on the 11 side
    double d_coeff = 1.0;          ///< 1/V, squaring-device transfer coefficient
    double oversampling = 4.0;     ///< sample_rate = 2 * oversampling * bandwidth
    double boltzmann_k = kBoltzmann;

    /// Throws ConfigError naming the first violated bound.
    void validate() const;

    double alpha() const { return r1 / r0; }
    /// Largest beta or delta that keeps the decision bands off the 01/10 level.
    double threshold_bound() const { return (alpha() - 1.0) / (alpha() + 1.0); }
    /// Bit-exchange period. f_B = 1/tau exactly.
    double tau() const { return gamma / bandwidth; }
    double f_b() const { return bandwidth / gamma; }
    double sample_rate() const { return 2.0 * oversampling * bandwidth; }
    /// round(tau * sample_rate)
    std::size_t samples_per_bep() const;
};

struct BitSituation {
    int alice_bit = 0;
    int bob_bit = 0;

    static constexpr BitSituation s00() { return {0, 0}; }
    static constexpr BitSituation s01() { return {0, 1}; }
    static constexpr BitSituation s10() { return {1, 0}; }
    static constexpr BitSituation s11() { return {1, 1}; }
    static std::array<BitSituation, 4> all() { return {s00(), s01(), s10(), s11()}; }

    /// 0..3 for 00, 01, 10, 11.
    constexpr int index() const { return 2 * alice_bit + bob_bit; }
    static BitSituation from_index(int index);
    bool is_mixed() const { return alice_bit != bob_bit; }

    friend constexpr bool operator==(BitSituation, BitSituation) = default;
};

/// Parses "00", "01", "10" or "11". Throws InvalidParameter otherwise.
BitSituation parse_situation(std::string_view text);
std::string_view to_string(BitSituation s);

enum class Observable { Voltage, Current };
Observable parse_observable(std::string_view text);
std::string_view to_string(Observable o);

/// Mean-square levels of one observable plus the decision margins.
///
/// For voltage the levels ascend 00 < mid < 11; for current they descend.
/// delta_1 always widens the 00 decision band toward mid, delta_2 the 11 band.
struct LevelSet {
    double level_00 = 0.0;
    double level_mid = 0.0;
    double level_11 = 0.0;
    double delta_1 = 0.0;
    double delta_2 = 0.0;

    bool ascending() const { return level_00 < level_11; }
    /// Edge of the 00 decision band (level_00 + delta_1 for voltage).
    double edge_00() const { return ascending() ? level_00 + delta_1 : level_00 - delta_1; }
    /// Edge of the 11 decision band (level_11 - delta_2 for voltage).
    double edge_11() const { return ascending() ? level_11 - delta_2 : level_11 + delta_2; }
    /// Throws ConfigError when the secure band is swallowed by a decision band.
    void validate() const;
};

enum class Decision { Decide00, DecideSecure, Decide11 };
std::string_view to_string(Decision d);

enum class ErrorClass { Correct, AutoRemoved, Error00ToSecure, Error11ToSecure };
std::string_view to_string(ErrorClass e);

struct BepOutcome {
    BitSituation actual;
    double measured_ms = 0.0;
    Decision decision = Decision::DecideSecure;
    ErrorClass error_class = ErrorClass::Correct;

    bool starred() const {
        return error_class == ErrorClass::Error00ToSecure || error_class == ErrorClass::Error11ToSecure;
    }
};

/// 4 k T_eff R_parallel B for the situation's resistor pair, V^2.
double exact_level(BitSituation situation, const SystemConfig& config);
/// 4 k T_eff B / R_loop, A^2.
double exact_level_current(BitSituation situation, const SystemConfig& config);

struct ChannelWaveforms {
    NoiseTrace voltage;  ///< u_ch
    NoiseTrace current;  ///< i_ch, positive from Alice to Bob
};

/// Kirchhoff superposition of the two series generators:
///   u_ch = (u_a R_b + u_b R_a) / (R_a + R_b),  i_ch = (u_a - u_b) / (R_a + R_b)
ChannelWaveforms channel_waveforms(const NoiseTrace& u_a, const NoiseTrace& u_b, double r_a, double r_b);

/// Voltage thresholds: delta_1 = beta * level_00, delta_2 = delta * level_11.
LevelSet compute_thresholds(const SystemConfig& config);
/// Same fractions applied to the current levels.
LevelSet compute_current_thresholds(const SystemConfig& config);
LevelSet levels_for(const SystemConfig& config, Observable observable);

/// Three-way rule. Values exactly on a band edge are secure.
Decision classify(double measured_ms, const LevelSet& levels);

/// Confusion-matrix cell for (actual, decision).
ErrorClass classify_error(BitSituation actual, Decision decision);

/// Produces a generator trace for a given density. Default: synthesize().
using NoiseGenerator = std::function<NoiseTrace(const NoiseSpec&, Seed)>;

/// Spec of one party's generator over a bit-exchange period.
NoiseSpec generator_spec(const SystemConfig& config, double resistance);

/// Per-party generator seeds derived from a bit-period seed.
std::pair<Seed, Seed> party_seeds(Seed bep_seed);

/// One bit-exchange period with explicit per-party generator seeds.
BepOutcome run_bep_with_seeds(const SystemConfig& config, BitSituation situation, Seed alice_seed,
                              Seed bob_seed, Observable observable,
                              const NoiseGenerator& generator = {});

/// One bit-exchange period: independent Johnson generators, channel formation,
/// boxcar mean square over tau, classification and error class.
BepOutcome run_bep(const SystemConfig& config, BitSituation situation, Seed seed,
                   Observable observable = Observable::Voltage,
                   const NoiseGenerator& generator = {});

/// Waveforms of one bit-exchange period (what run_bep measures).
ChannelWaveforms bep_waveforms(const SystemConfig& config, BitSituation situation, Seed alice_seed,
                               Seed bob_seed, const NoiseGenerator& generator = {});

enum class Inverter { Alice, Bob };
Inverter parse_inverter(std::string_view text);

struct KeyPair {
    std::vector<int> alice;
    std::vector<int> bob;
};

/// Keeps the outcomes decided secure; each party emits its own resistor bit,
/// the designated inverter emits the complement.
KeyPair distill_key(std::span<const BepOutcome> outcomes, Inverter inverter);

}  // namespace kljn
