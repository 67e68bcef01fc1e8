#pragma once

#include "ddlab/model.hpp"
#include "ddlab/rate_field.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ddlab {

enum class SolveMethod { backward_rk4, picard, both };

SolveMethod parse_method(const std::string& name);
const char* method_name(SolveMethod m);

struct SolverConfig {
    double grid_step = 0.0; // <= 0 selects the default a/200
    double picard_tol = 1e-10;
    int picard_max_iter = 200;
    double picard_init = 0.0; // constant initial iterate
    SolveMethod method = SolveMethod::backward_rk4;
    // Lower end of the solve interval; NaN selects the model default
    // (the rate field's domain floor, else min(x0, K - 10a)).
    double x_min = std::numeric_limits<double>::quiet_NaN();
};

struct HCurve {
    std::vector<double> xs;
    std::vector<double> hs;
    struct Meta {
        double q = 0.0, s = 0.0, a = 0.0, K = 0.0;
        std::string model;
        std::string method;
        int iterations = 0;
        double contraction = 0.0;
    } meta;

    // Linear interpolation on the solve grid.
    double value_at(double x) const;
};

double resolve_x_min(const RateField& rates, const DrawdownQuery& query,
                     const SolverConfig& cfg);

// Backward RK4 march of the rate equation from h(K) = 0; exponential
// overshoot kernels are folded into auxiliary states so the nonlocal term
// stays exact.
HCurve solve_backward(const RateField& rates, const DrawdownQuery& query,
                      const SolverConfig& cfg);

// Fixed-point iteration of the integral form on the grid, trapezoid
// quadrature with an exponential running-sum recursion for the inner
// integral. Starts from h = 0.
HCurve solve_picard(const RateField& rates, const DrawdownQuery& query,
                    const SolverConfig& cfg);

// Direct nested-quadrature evaluation, valid when the overshoot rate
// vanishes identically.
HCurve solve_spectrally_negative(const RateField& rates, const DrawdownQuery& query,
                                 const SolverConfig& cfg);

// Joint transform of a Levy model from its constant local rates;
// b2_lt is the Laplace transform of the normalized overshoot density.
double levy_joint_lt(double b1, double b2_amp,
                     const std::function<double(double)>& b2_lt, double c,
                     double delta);

struct IneqViolation {
    double x;
    double margin; // amount by which the bound is exceeded
};

// Checks 0 <= c(x, s) + b2 total mass <= b1(x) pointwise; margin 0 is legal
// (the undiscounted models sit exactly on the boundary).
std::vector<IneqViolation> check_rate_inequality(const RateField& rates,
                                                 std::span<const double> grid,
                                                 double s = 0.0);

} // namespace ddlab
