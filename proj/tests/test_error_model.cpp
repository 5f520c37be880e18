#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "kljn/error_model.hpp"
#include "kljn/errors.hpp"

using namespace kljn;

TEST_CASE("squared_noise_psd: triangular shape") {
    const SquaredNoisePsd psd{3.0, 50.0, 0.5};
    CHECK(squared_noise_psd(0.0, psd) == doctest::Approx(2.0 * 0.25 * 50.0 * 9.0));
    CHECK(squared_noise_psd(100.0, psd) == 0.0);
    CHECK(squared_noise_psd(150.0, psd) == 0.0);
    CHECK(squared_noise_psd(50.0, psd) == doctest::Approx(0.5 * psd.peak()));
    CHECK_THROWS_AS(squared_noise_psd(-1.0, psd), InvalidParameter);
}

TEST_CASE("squared_noise_psd: integral equals twice the squared mean square") {
    for (double d : {0.1, 1.0, 10.0}) {
        const SquaredNoisePsd psd{2.0, 123.0, d};
        // Independent midpoint rule; exact for a piecewise-linear integrand.
        const int n = 200000;
        const double h = 2.0 * psd.bandwidth / n;
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += psd((i + 0.5) * h) * h;
        const double expected = 2.0 * std::pow(d * psd.s00 * psd.bandwidth, 2);
        CHECK(total == doctest::Approx(expected).epsilon(1e-10));
        CHECK(psd.total_power() == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("averaged_square_rms") {
    const SquaredNoisePsd psd{1.0, 100.0, 1.0};
    CHECK(averaged_square_rms(psd, 1.0) == doctest::Approx(std::sqrt(200.0)).epsilon(1e-15));
    // sqrt(f_B) scaling at fixed bandwidth
    CHECK(averaged_square_rms(psd, 2.0) / averaged_square_rms(psd, 1.0) ==
          doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
    // D S f_B sqrt(2 gamma)
    const SquaredNoisePsd p2{0.3, 80.0, 2.0};
    CHECK(averaged_square_rms(p2, 5.0) == doctest::Approx(2.0 * 0.3 * 5.0 * std::sqrt(2.0 * 16.0)).epsilon(1e-14));
    CHECK_NOTHROW(averaged_square_rms(psd, 25.0));
    CHECK_THROWS_AS(averaged_square_rms(psd, 25.1), ApproximationDomainError);
}

TEST_CASE("tabulated spectrum moments are exact for linear pieces") {
    const auto flat = TabulatedSpectrum::flat(2.0, 3.0);
    CHECK(flat.frequency.size() >= 1024);
    CHECK(flat.moment0() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(flat.moment2() == doctest::Approx(2.0 * 27.0 / 3.0).epsilon(1e-14));

    const SquaredNoisePsd psd{1.0, 10.0, 1.0};
    const auto tri = TabulatedSpectrum::sample(psd, 20.0);
    CHECK(tri.moment0() == doctest::Approx(psd.total_power()).epsilon(1e-13));
    // int_0^{2B} f^2 P (1 - f/2B) df = P (2B)^3 / 12
    CHECK(tri.moment2() == doctest::Approx(psd.peak() * 8000.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("rice_crossing_frequency") {
    const double f_b = 2.0;
    const double level = 5.0;
    const auto flat = TabulatedSpectrum::flat(level, f_b);
    const double rms = std::sqrt(level * f_b);

    SUBCASE("zero threshold gives the maximum rate") {
        CHECK(rice_crossing_frequency(0.0, rms, flat) ==
              doctest::Approx(2.0 / rms * std::sqrt(level * f_b * f_b * f_b / 3.0)).epsilon(1e-13));
    }
    SUBCASE("flat spectrum: 2 (f_B / sqrt3) exp(-D^2 / 2 u^2)") {
        for (double z : {0.5, 1.0, 3.0}) {
            const double expected = 2.0 * f_b / std::numbers::sqrt3 * std::exp(-0.5 * z * z);
            CHECK(rice_crossing_frequency(z * rms, rms, flat) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
    SUBCASE("large threshold") {
        CHECK(rice_crossing_frequency(100.0 * rms, rms, flat) < 1e-300);
    }
    SUBCASE("tabulated and adaptive quadrature agree") {
        auto flat_fn = [&](double f) { return f <= f_b ? level : 0.0; };
        for (double z : {0.0, 1.0, 2.5}) {
            const double a = rice_crossing_frequency(z * rms, rms, flat);
            const double b = rice_crossing_frequency(z * rms, rms, flat_fn, f_b);
            CHECK(std::abs(a - b) <= 1e-9 * a);
        }
        const SquaredNoisePsd psd{1.0, 10.0, 1.0};
        const auto tri = TabulatedSpectrum::sample(psd, 20.0);
        const double r = std::sqrt(psd.total_power());
        const double a = rice_crossing_frequency(r, r, tri);
        const double b = rice_crossing_frequency(r, r, psd, 20.0);
        CHECK(std::abs(a - b) <= 1e-9 * a);
    }
    SUBCASE("invalid input") {
        CHECK_THROWS_AS(rice_crossing_frequency(1.0, 0.0, flat), InvalidParameter);
        CHECK_THROWS_AS(rice_crossing_frequency(1.0, 1.0, TabulatedSpectrum{}), InvalidParameter);
        CHECK_THROWS_AS(rice_crossing_frequency(1.0, 1.0, TabulatedSpectrum::flat(0.0, 1.0)), InvalidParameter);
        TabulatedSpectrum bad{{0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}};
        CHECK_THROWS_AS(rice_crossing_frequency(1.0, 1.0, bad), InvalidParameter);
    }
}

TEST_CASE("rice_error_probability_00: closed form") {
    // Reference values computed at 40 digits.
    const auto a = rice_error_probability_00({0.5, 100.0});
    CHECK(a.probability == doctest::Approx(1.11454821520929e-3).epsilon(1e-12));
    CHECK(a.small_error_valid);
    CHECK(rice_error_probability_00({0.5, 200.0}).probability ==
          doctest::Approx(2.15158421207599e-6).epsilon(1e-12));
    const auto zero = rice_error_probability_00({0.0, 100.0});
    CHECK(zero.probability == doctest::Approx(1.0 / std::numbers::sqrt3).epsilon(1e-15));
    CHECK_FALSE(zero.small_error_valid);
    CHECK_THROWS_AS(rice_error_probability_00({1.5, 100.0}), InvalidParameter);
    CHECK_THROWS_AS(rice_error_probability_00({0.5, 0.0}), InvalidParameter);
}

TEST_CASE("rice_error_probability_11") {
    CHECK(rice_error_probability_11({0.5, 100.0}).probability ==
          doctest::Approx(1.11454821520929e-3).epsilon(1e-12));
    CHECK(rice_error_probability_11({1.0, 100.0}).probability ==
          doctest::Approx(8.01820812892739e-12).epsilon(1e-12));
    for (double f : {0.1, 0.37, 0.9})
        for (double g : {8.0, 64.0, 300.0})
            CHECK(rice_error_probability_11({f, g}).probability == rice_error_probability_00({f, g}).probability);
}

TEST_CASE("exponential law and squaring under doubled gamma") {
    for (double b : {0.2, 0.5, 0.8}) {
        for (double g : {10.0, 100.0, 250.0}) {
            const double eps = rice_error_probability_00({b, g}).probability;
            CHECK(std::log(std::numbers::sqrt3 * eps) == doctest::Approx(-b * b * g / 4.0).epsilon(1e-13));
            const double doubled = rice_error_probability_00({b, 2.0 * g}).probability;
            const double lhs = std::numbers::sqrt3 * doubled;
            const double rhs = std::pow(std::numbers::sqrt3 * eps, 2);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
        }
    }
}

TEST_CASE("composed pipeline does not depend on D") {
    for (double d : {0.1, 1.0, 10.0}) {
        for (double s00 : {1e-3, 2.0}) {
            const PredictorInput in{0.45, 120.0};
            const double composed = rice_pipeline_probability(in, s00, 5000.0, d);
            const double closed = rice_error_probability_00(in).probability;
            CHECK(std::abs(composed - closed) <= 1e-12 * closed);
        }
    }
}

TEST_CASE("gaussian_tail_probability") {
    CHECK(gaussian_tail_probability({0.5, 100.0}) == doctest::Approx(2.03476008722479e-4).epsilon(1e-12));
    CHECK(gaussian_tail_probability({0.5, 200.0}) == doctest::Approx(2.86651571879194e-7).epsilon(1e-12));
    CHECK(gaussian_tail_probability({1.0, 100.0}) == doctest::Approx(7.68729897214017e-13).epsilon(1e-12));
    CHECK(gaussian_tail_probability({0.0, 100.0}) == 0.5);
    CHECK(normal_upper_tail(0.0) == 0.5);
}

TEST_CASE("pessimism_ratio") {
    CHECK(pessimism_ratio({0.5, 100.0}) == doctest::Approx(5.47754117159544).epsilon(1e-12));
    CHECK(pessimism_ratio({0.3, 16.0}) == doctest::Approx(2.03362265761712).epsilon(1e-12));

    for (double b : {0.3, 0.5, 0.7}) {
        double previous = 0.0;
        for (double g = 8.0; g <= 400.0; g *= 1.25) {
            if (b * std::sqrt(g / 2.0) < 1.0) continue;
            const double r = pessimism_ratio({b, g});
            CHECK(r > previous);
            previous = r;
        }
    }
}

TEST_CASE("Rice bound is pessimistic across the small-error grid") {
    for (int i = 1; i <= 9; ++i) {
        const double b = 0.1 * i;
        for (double g : {8.0, 16.0, 32.0, 64.0, 100.0, 200.0, 400.0}) {
            if (b * std::sqrt(g / 2.0) < 1.0) continue;
            CAPTURE(b);
            CAPTURE(g);
            CHECK(rice_error_probability_00({b, g}).probability >= gaussian_tail_probability({b, g}));
        }
    }
}
