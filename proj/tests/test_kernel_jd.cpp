#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_helpers.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/kernel_exit.hpp"
#include "ddlab/rng.hpp"

#include <cmath>

using namespace ddlab;

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd fd_D(double u, double v, double h) {
    return (jd_matrix(u, v + h).N - jd_matrix(u, v - h).N) / (2.0 * h);
}

// Euler two-sided exit for the jump diffusion, endpoint barrier checks.
// Coarse (biased O(sqrt(dt))) but entirely independent of the kernel path.
struct JdExit {
    int kind; // 0 creep up, 1 jump over, 2 below
};

JdExit jd_two_sided_exit(double x, double u, double v, double dt, PathRng& rng) {
    const double sdt = std::sqrt(dt);
    for (;;) {
        double T = rng.exponential(1.0);
        double done = 0.0;
        while (done < T) {
            double step = std::min(dt, T - done);
            x += x * step + std::sqrt(2.0) * std::sqrt(step) * rng.normal();
            done += step;
            if (x > v) return {0};
            if (x < u) return {2};
        }
        x += rng.exponential(1.0);
        if (x > v) return {1};
        if (x < u) return {2};
    }
}

} // namespace

TEST_CASE("first matrix column closed forms") {
    for (auto [u, v] : {std::pair{-1.0, 3.0}, {0.0, 1.5}, {-2.5, -0.5}}) {
        auto set = jd_matrix(u, v);
        CHECK(set.M(0, 0) == 1.0);
        CHECK(set.M(1, 0) ==
              doctest::Approx(v * std::exp(v + 0.5)).epsilon(1e-14));
        // Independent quadrature of the defining integral.
        double quad = 1.0 - oracle::simpson(
                                [&](double y) {
                                    return norm_cdf(v + y) * y * std::exp(-y);
                                },
                                0.0, 45.0, 60000);
        CHECK(std::abs(set.M(2, 0) - quad) <= 1e-10);
    }
}

TEST_CASE("third basis function: value, quadrature, and tail limits") {
    KernelBasis basis = jd_basis();
    REQUIRE(basis.size == 3);
    CHECK(basis.g(3, 0.0) ==
          doctest::Approx(0.5 - std::exp(0.5) * (1.0 - norm_cdf(1.0)))
              .epsilon(1e-12));
    CHECK(basis.g(3, 0.0) == doctest::Approx(0.23842170813487656).epsilon(1e-10));
    for (double x : {-2.0, 0.0, 1.5}) {
        double quad = 1.0 - oracle::simpson(
                                [&](double y) {
                                    return norm_cdf(x + y) * std::exp(-y);
                                },
                                0.0, 45.0, 60000);
        CHECK(std::abs(basis.g(3, x) - quad) <= 1e-10);
    }
    CHECK(std::abs(basis.g(3, 10.0)) <= 1e-6);
    // The approach to 1 is governed by e^{x+1/2}: about 7.5e-5 at x = -10.
    CHECK(std::abs(basis.g(3, -10.0) - 1.0) <= 1e-4);
    CHECK(std::abs(basis.g(3, -20.0) - 1.0) <= 1e-6);
}

TEST_CASE("inverse and derivative identities on random windows") {
    PathRng rng(13, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        // Windows where the difference quotient of N resolves 1e-6.
        double u = -3.0 + 4.5 * rng.uniform();
        double v = u + 0.3 + 2.2 * rng.uniform();
        auto set = jd_matrix(u, v);
        Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
        CHECK(max_abs(set.N * set.M - I) <= 1e-10);
        Eigen::MatrixXd fd = fd_D(u, v, 1e-5);
        CHECK(max_abs(set.D - fd) / max_abs(set.D) <= 1e-6);
    }
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    auto set = jd_matrix(-1.0, 3.0);
    CHECK(max_abs(set.N * set.M - I) <= 1e-10);
}

TEST_CASE("upper passage quantity is a probability reaching one at the top") {
    auto exits = jd_exit(-1.0, 3.0);
    PathRng rng(19, 0, 0);
    for (int i = 0; i < 50; ++i) {
        double x = -1.0 + 4.0 * rng.uniform();
        double b1 = exits.B1(x);
        CHECK(b1 >= 0.0);
        CHECK(b1 <= 1.0);
    }
    CHECK(exits.B1(3.0 - 1e-6) >= 1.0 - 1e-2);
}

TEST_CASE("exit decomposition sums to one without discounting") {
    auto exits = jd_exit(-1.0, 3.0);
    for (double x : {0.0, 1.0, 2.0}) {
        double total = exits.B1(x) + exits.B2_amp(x) + exits.C(x, 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("exit frequencies from euler episodes match the kernel quantities") {
    auto exits = jd_exit(-1.0, 3.0);
    double x = 1.0, dt = 1e-4;
    long n = 20000, creep = 0, over = 0, below = 0;
    for (long p = 0; p < n; ++p) {
        PathRng rng(505, 0, static_cast<uint32_t>(p));
        auto out = jd_two_sided_exit(x, -1.0, 3.0, dt, rng);
        if (out.kind == 0) ++creep;
        else if (out.kind == 1) ++over;
        else ++below;
    }
    auto freq_check = [&](long count, double expected) {
        double p_hat = static_cast<double>(count) / static_cast<double>(n);
        double se = std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) /
                              static_cast<double>(n));
        CHECK(std::abs(p_hat - expected) <= 4.0 * se + 0.02);
    };
    freq_check(creep, exits.B1(x));
    freq_check(over, exits.B2_amp(x));
    freq_check(below, exits.C(x, 0.0));
}

TEST_CASE("local rates: inequality boundary and quotient consistency") {
    RateField rates = jd_rates(1.0);
    double x = 1.0;
    double b1 = rates.b1(x), amp = rates.b2_amp(x), c = rates.c(x, 0.0);
    CHECK(c >= 0.0);
    CHECK(amp >= 0.0);
    CHECK(c + amp <= b1 + 1e-10);
    CHECK(c + amp >= b1 - 1e-10);

    auto quotient = [&](double eps) {
        auto exits = jd_exit(0.0, 1.0 + eps);
        return std::array<double, 3>{(1.0 - exits.B1(1.0)) / eps,
                                     exits.B2_amp(1.0) / eps,
                                     exits.C(1.0, 0.0) / eps};
    };
    auto q1 = quotient(1e-3);
    auto q2 = quotient(5e-4);
    CHECK(b1 == doctest::Approx(2.0 * q2[0] - q1[0]).epsilon(2e-5));
    CHECK(amp == doctest::Approx(2.0 * q2[1] - q1[1]).epsilon(2e-5));
    CHECK(c == doctest::Approx(2.0 * q2[2] - q1[2]).epsilon(2e-5));
}

TEST_CASE("rates exist on the whole line") {
    RateField rates = jd_rates(1.0);
    for (double x : {-3.0, -1.0, 0.0, 2.0, 5.5}) {
        CHECK(std::isfinite(rates.b1(x)));
        CHECK(rates.b1(x) > 0.0);
    }
}

TEST_CASE("nonzero undershoot argument is rejected") {
    auto exits = jd_exit(-1.0, 3.0);
    CHECK_THROWS_AS((void)exits.C(1.0, 0.5), unsupported_error);
    RateField rates = jd_rates(1.0);
    CHECK_THROWS_AS((void)rates.c(1.0, 0.5), unsupported_error);
    CHECK_THROWS_AS((void)jd_matrix(2.0, 1.0), domain_error);
}
