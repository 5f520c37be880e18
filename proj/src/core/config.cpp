#include <cmath>
#include <sstream>
#include <string>

#include "kljn/core.hpp"
#include "kljn/errors.hpp"

namespace kljn {
namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Thresholds exactly on the bound are legal; this absorbs rounding in alpha.
constexpr double kBoundSlack = 1e-12;

}  // namespace

void SystemConfig::validate() const {
    require(std::isfinite(r0) && r0 > 0.0, "r0 must be > 0 (got " + fmt(r0) + ")");
    require(std::isfinite(r1) && r1 > r0, "r1 must be > r0, i.e. alpha = r1/r0 > 1 (got r0=" + fmt(r0) +
                                              ", r1=" + fmt(r1) + ")");
    require(std::isfinite(t_eff) && t_eff > 0.0, "t_eff must be > 0");
    require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be > 0");
    require(std::isfinite(boltzmann_k) && boltzmann_k > 0.0, "boltzmann_k must be > 0");
    require(std::isfinite(d_coeff) && d_coeff > 0.0, "d_coeff must be > 0");
    require(std::isfinite(oversampling) && oversampling >= 1.0, "oversampling must be >= 1 (Nyquist)");
    require(std::isfinite(gamma) && gamma >= 4.0, "gamma must be >= 4 (got " + fmt(gamma) + ")");
    require(beta > 0.0 && beta < 1.0, "beta must satisfy 0 < beta < 1 (got " + fmt(beta) + ")");
    require(delta > 0.0 && delta < 1.0, "delta must satisfy 0 < delta < 1 (got " + fmt(delta) + ")");
    const double bound = threshold_bound();
    require(beta <= bound * (1.0 + kBoundSlack),
            "beta = " + fmt(beta) + " exceeds (alpha-1)/(alpha+1) = " + fmt(bound));
    require(delta <= bound * (1.0 + kBoundSlack),
            "delta = " + fmt(delta) + " exceeds (alpha-1)/(alpha+1) = " + fmt(bound));
    require(samples_per_bep() >= 2, "bit period shorter than two samples");
}

std::size_t SystemConfig::samples_per_bep() const {
    const double n = std::round(tau() * sample_rate());
    return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

void LevelSet::validate() const {
    const double slack = kBoundSlack * std::max({level_00, level_mid, level_11});
    if (!(delta_1 > 0.0) || !(delta_2 > 0.0)) throw ConfigError("thresholds delta_1 and delta_2 must be > 0");
    if (ascending()) {
        if (!(level_00 < level_mid && level_mid < level_11))
            throw ConfigError("levels must satisfy level_00 < level_mid < level_11");
        if (edge_00() > level_mid + slack)
            throw ConfigError("level_00 + delta_1 = " + fmt(edge_00()) + " crosses level_mid = " + fmt(level_mid));
        if (edge_11() < level_mid - slack)
            throw ConfigError("level_11 - delta_2 = " + fmt(edge_11()) + " crosses level_mid = " + fmt(level_mid));
    } else {
        if (!(level_00 > level_mid && level_mid > level_11))
            throw ConfigError("current levels must satisfy level_00 > level_mid > level_11");
        if (edge_00() < level_mid - slack)
            throw ConfigError("level_00 - delta_1 = " + fmt(edge_00()) + " crosses level_mid = " + fmt(level_mid));
        if (edge_11() > level_mid + slack)
            throw ConfigError("level_11 + delta_2 = " + fmt(edge_11()) + " crosses level_mid = " + fmt(level_mid));
    }
}

}  // namespace kljn
