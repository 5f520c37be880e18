#include "kljn/core.hpp"
#include "kljn/errors.hpp"

namespace kljn {
namespace {

double resistance(int bit, const SystemConfig& config) { return bit == 0 ? config.r0 : config.r1; }

}  // namespace

double exact_level(BitSituation situation, const SystemConfig& config) {
    const double ra = resistance(situation.alice_bit, config);
    const double rb = resistance(situation.bob_bit, config);
    const double parallel = ra * rb / (ra + rb);
    return 4.0 * config.boltzmann_k * config.t_eff * parallel * config.bandwidth;
}

double exact_level_current(BitSituation situation, const SystemConfig& config) {
    const double loop = resistance(situation.alice_bit, config) + resistance(situation.bob_bit, config);
    return 4.0 * config.boltzmann_k * config.t_eff * config.bandwidth / loop;
}

LevelSet compute_thresholds(const SystemConfig& config) {
    config.validate();
    LevelSet levels;
    levels.level_00 = exact_level(BitSituation::s00(), config);
    levels.level_mid = exact_level(BitSituation::s01(), config);
    levels.level_11 = exact_level(BitSituation::s11(), config);
    levels.delta_1 = config.beta * levels.level_00;
    levels.delta_2 = config.delta * levels.level_11;
    levels.validate();
    return levels;
}

LevelSet compute_current_thresholds(const SystemConfig& config) {
    config.validate();
    LevelSet levels;
    levels.level_00 = exact_level_current(BitSituation::s00(), config);
    levels.level_mid = exact_level_current(BitSituation::s01(), config);
    levels.level_11 = exact_level_current(BitSituation::s11(), config);
    levels.delta_1 = config.beta * levels.level_00;
    levels.delta_2 = config.delta * levels.level_11;
    levels.validate();
    return levels;
}

LevelSet levels_for(const SystemConfig& config, Observable observable) {
    return observable == Observable::Voltage ? compute_thresholds(config) : compute_current_thresholds(config);
}

Decision classify(double measured_ms, const LevelSet& levels) {
    if (levels.ascending()) {
        if (measured_ms < levels.edge_00()) return Decision::Decide00;
        if (measured_ms > levels.edge_11()) return Decision::Decide11;
    } else {
        if (measured_ms > levels.edge_00()) return Decision::Decide00;
        if (measured_ms < levels.edge_11()) return Decision::Decide11;
    }
    return Decision::DecideSecure;
}

ErrorClass classify_error(BitSituation actual, Decision decision) {
    switch (decision) {
        case Decision::Decide00:
            return actual == BitSituation::s00() ? ErrorClass::Correct : ErrorClass::AutoRemoved;
        case Decision::Decide11:
            return actual == BitSituation::s11() ? ErrorClass::Correct : ErrorClass::AutoRemoved;
        case Decision::DecideSecure:
            if (actual == BitSituation::s00()) return ErrorClass::Error00ToSecure;
            if (actual == BitSituation::s11()) return ErrorClass::Error11ToSecure;
            return ErrorClass::Correct;
    }
    return ErrorClass::Correct;
}

}  // namespace kljn
