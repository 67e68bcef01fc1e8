#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_helpers.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/rng.hpp"
#include "ddlab/scale.hpp"
#include "ddlab/snlp_rates.hpp"

#include <cmath>

using namespace ddlab;

namespace {
const BrownianLevySpec kBm01{0.0, 1.0};
const BrownianLevySpec kBmDrift{0.5, 1.0};
const CramerLundbergSpec kCl{1.0, 1.0, 0.5};
} // namespace

TEST_CASE("driftless brownian scale function is linear at q = 0") {
    ScaleFunctionSet sf(kBm01);
    CHECK(sf.W(0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sf.W(0.0, 0.7) == doctest::Approx(1.4).epsilon(1e-14));
}

TEST_CASE("unbounded variation scale function vanishes at zero") {
    ScaleFunctionSet sf(kBm01);
    for (double q : {0.1, 1.0, 7.5}) CHECK(sf.W(q, 0.0) == 0.0);
}

TEST_CASE("cramer-lundberg scale function starts at 1/premium") {
    ScaleFunctionSet sf(kCl);
    CHECK(sf.W(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    ScaleFunctionSet sf2(CramerLundbergSpec{2.5, 1.0, 0.5});
    CHECK(sf2.W(0.0, 0.0) == doctest::Approx(1.0 / 2.5).epsilon(1e-14));
    // Right derivative at 0: (q + claim_rate) / premium^2.
    CHECK(sf.W_prime(0.3, 0.0) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("scale functions match brute-force laplace inversion") {
    // Independent route: Gaver-Stehfest inversion of 1/(psi(beta) - q),
    // shifted past the transform's rightmost singularity so the sampling
    // abscissas stay in the analytic half plane.
    struct Case {
        LevySpec spec;
        double q;
    };
    for (const auto& [spec, q] : {Case{kBmDrift, 0.3}, Case{kCl, 0.2},
                                  Case{BrownianLevySpec{-0.4, 0.8}, 0.6},
                                  Case{CramerLundbergSpec{1.4, 2.0, 0.3}, 0.05}}) {
        ScaleFunctionSet sf = make_scale_set(spec);
        // Locate the rightmost singularity (psi(beta) = q) by bisection.
        double hi = 1.0;
        while (sf.psi(hi) <= q) hi *= 2.0;
        double lo = 0.0;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            (sf.psi(mid) <= q ? lo : hi) = mid;
        }
        double shift = hi + 0.75;
        for (double x : {0.5, 1.0, 2.0, 3.5}) {
            double inv = std::exp(shift * x) *
                         oracle::gaver_stehfest(
                             [&](double beta) {
                                 return 1.0 / (sf.psi(beta + shift) - q);
                             },
                             x);
            // Stehfest in double precision resolves ~3 digits here; a wrong
            // root or prefactor misses by orders of magnitude.
            CHECK(sf.W(q, x) == doctest::Approx(inv).epsilon(2e-3));
        }
    }
}

TEST_CASE("second scale function trivial values") {
    ScaleFunctionSet sf(kCl);
    CHECK(sf.Z(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf.Z(2.3, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    ScaleFunctionSet sb(kBm01);
    CHECK(sb.Z(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sb.Z(1.0, 1.0) ==
          doctest::Approx(std::cosh(std::sqrt(2.0))).epsilon(1e-13));
}

TEST_CASE("Z is one plus the discounted integral of W") {
    for (double q : {0.2, 1.0}) {
        for (const LevySpec& spec :
             {LevySpec{kBmDrift}, LevySpec{kCl}}) {
            ScaleFunctionSet sf = make_scale_set(spec);
            for (double x : {0.3, 1.0, 2.5, 5.0}) {
                double quad = oracle::simpson(
                    [&](double y) { return sf.W(q, y); }, 0.0, x, 20000);
                CHECK(std::abs(sf.Z(q, x) - (1.0 + q * quad)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("W is increasing on random grids") {
    PathRng rng(7, 0, 0);
    for (const LevySpec& spec : {LevySpec{kBmDrift}, LevySpec{kCl},
                                 LevySpec{BrownianLevySpec{-0.3, 1.2}}}) {
        ScaleFunctionSet sf = make_scale_set(spec);
        for (int trial = 0; trial < 30; ++trial) {
            double q = 2.0 * rng.uniform();
            double x1 = 5.0 * rng.uniform();
            double x2 = x1 + 5.0 * rng.uniform();
            CHECK(sf.W(q, x1) <= sf.W(q, x2) + 1e-12);
        }
    }
}

TEST_CASE("zero tilt is the identity") {
    for (const LevySpec& spec : {LevySpec{kBmDrift}, LevySpec{kCl}}) {
        ScaleFunctionSet sf = make_scale_set(spec);
        ScaleFunctionSet t0 = sf.tilt(0.0);
        for (double q : {0.0, 0.4, 1.5})
            for (double x : {0.2, 1.0, 3.0}) {
                CHECK(t0.W(q, x) == doctest::Approx(sf.W(q, x)).epsilon(1e-12));
                CHECK(t0.Z(q, x) == doctest::Approx(sf.Z(q, x)).epsilon(1e-12));
            }
    }
}

TEST_CASE("tilted sets follow the tilted laplace exponent") {
    // psi_s(beta) = psi(beta + s) - psi(s) characterizes the tilted process.
    for (const LevySpec& spec : {LevySpec{kBmDrift}, LevySpec{kCl}}) {
        ScaleFunctionSet sf = make_scale_set(spec);
        for (double s : {0.3, 1.0}) {
            ScaleFunctionSet ts = sf.tilt(s);
            for (double beta : {0.1, 0.7, 2.0})
                CHECK(ts.psi(beta) ==
                      doctest::Approx(sf.psi(beta + s) - sf.psi(s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("negative q continuation stays consistent with Z' = qW") {
    // Finite differences of Z against qW for p < 0 exercises the sin branch.
    ScaleFunctionSet sf(kBm01);
    double p = -0.4, x = 1.3, h = 1e-6;
    double dz = (sf.Z(p, x + h) - sf.Z(p, x - h)) / (2.0 * h);
    CHECK(dz == doctest::Approx(p * sf.W(p, x)).epsilon(1e-6));
}

TEST_CASE("scale arguments below zero are rejected") {
    ScaleFunctionSet sf(kBm01);
    CHECK_THROWS_AS((void)sf.W(0.5, -0.1), domain_error);
    CHECK_THROWS_AS((void)sf.Z(0.5, -0.1), domain_error);
}

TEST_CASE("natural scale of the reference ou diffusion") {
    DiffusionSpec ou{DiffusionFamily::ou, 1.0, 1.0};
    NaturalScale ns(ou, 0.0);
    // S'(y) = exp(y^2) for mu(y) = -y, sigma = 1, anchored at 0.
    for (double y : {-1.0, 0.0, 0.5, 1.5})
        CHECK(ns.S_prime(y) == doctest::Approx(std::exp(y * y)).epsilon(1e-9));
    double quad = oracle::trapezoid(
        [](double y) { return std::exp(y * y); }, 0.0, 1.0, 20000);
    CHECK(ns.S(1.0) == doctest::Approx(quad).epsilon(1e-8));
    CHECK(ns.S(0.0) == doctest::Approx(0.0));
}

TEST_CASE("natural scale is strictly increasing with positive slope") {
    for (DiffusionSpec spec :
         {DiffusionSpec{DiffusionFamily::constant, 0.7, 1.2},
          DiffusionSpec{DiffusionFamily::ou, 0.8, 0.9},
          DiffusionSpec{DiffusionFamily::gbm, 0.05, 0.4}}) {
        NaturalScale ns(spec, spec.family == DiffusionFamily::gbm ? 1.0 : 0.0);
        double prev = -1e300;
        for (double y : {0.5, 1.0, 1.7, 2.5}) {
            CHECK(ns.S_prime(y) > 0.0);
            double v = ns.S(y);
            CHECK(v > prev);
            prev = v;
        }
    }
}
