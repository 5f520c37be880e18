#include <utility>

#include "kljn/core.hpp"
#include "kljn/errors.hpp"
#include "kljn/simd/kernels.hpp"

namespace kljn {

ChannelWaveforms channel_waveforms(const NoiseTrace& u_a, const NoiseTrace& u_b, double r_a, double r_b) {
    if (u_a.size() != u_b.size()) throw InvalidParameter("channel_waveforms: trace lengths differ");
    if (u_a.dt() != u_b.dt()) throw InvalidParameter("channel_waveforms: sample intervals differ");
    if (!(r_a > 0.0) || !(r_b > 0.0)) throw InvalidParameter("channel_waveforms: resistances must be > 0");

    const double loop = r_a + r_b;
    std::vector<double> voltage(u_a.size());
    std::vector<double> current(u_a.size());
    simd::axpby(r_b / loop, u_a.samples(), r_a / loop, u_b.samples(), voltage);
    simd::axpby(1.0 / loop, u_a.samples(), -1.0 / loop, u_b.samples(), current);
    return {NoiseTrace(std::move(voltage), u_a.dt()), NoiseTrace(std::move(current), u_a.dt())};
}

NoiseSpec generator_spec(const SystemConfig& config, double resistance) {
    NoiseSpec spec;
    spec.spectral_density = johnson_spectral_density(resistance, config.t_eff, config.boltzmann_k);
    spec.bandwidth = config.bandwidth;
    spec.sample_rate = config.sample_rate();
    spec.n_samples = config.samples_per_bep();
    return spec;
}

std::pair<Seed, Seed> party_seeds(Seed bep_seed) {
    return {derive_seed(bep_seed, 0, 1), derive_seed(bep_seed, 1, 1)};
}

ChannelWaveforms bep_waveforms(const SystemConfig& config, BitSituation situation, Seed alice_seed, Seed bob_seed,
                               const NoiseGenerator& generator) {
    config.validate();
    const double r_a = situation.alice_bit == 0 ? config.r0 : config.r1;
    const double r_b = situation.bob_bit == 0 ? config.r0 : config.r1;
    const NoiseGenerator& gen = generator ? generator : NoiseGenerator(&synthesize);
    const NoiseTrace u_a = gen(generator_spec(config, r_a), alice_seed);
    const NoiseTrace u_b = gen(generator_spec(config, r_b), bob_seed);
    return channel_waveforms(u_a, u_b, r_a, r_b);
}

BepOutcome run_bep_with_seeds(const SystemConfig& config, BitSituation situation, Seed alice_seed, Seed bob_seed,
                              Observable observable, const NoiseGenerator& generator) {
    const LevelSet levels = levels_for(config, observable);
    const ChannelWaveforms ch = bep_waveforms(config, situation, alice_seed, bob_seed, generator);

    BepOutcome outcome;
    outcome.actual = situation;
    outcome.measured_ms = mean_square(observable == Observable::Voltage ? ch.voltage : ch.current);
    outcome.decision = classify(outcome.measured_ms, levels);
    outcome.error_class = classify_error(situation, outcome.decision);
    return outcome;
}

BepOutcome run_bep(const SystemConfig& config, BitSituation situation, Seed seed, Observable observable,
                   const NoiseGenerator& generator) {
    const auto [alice, bob] = party_seeds(seed);
    return run_bep_with_seeds(config, situation, alice, bob, observable, generator);
}

KeyPair distill_key(std::span<const BepOutcome> outcomes, Inverter inverter) {
    KeyPair key;
    for (const auto& o : outcomes) {
        if (o.decision != Decision::DecideSecure) continue;
        int a = o.actual.alice_bit;
        int b = o.actual.bob_bit;
        if (inverter == Inverter::Alice) a ^= 1;
        else b ^= 1;
        key.alice.push_back(a);
        key.bob.push_back(b);
    }
    return key;
}

}  // namespace kljn
