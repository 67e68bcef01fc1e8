#pragma once

#include "ddlab/model.hpp"
#include "ddlab/rate_field.hpp"

#include <Eigen/Dense>

#include <functional>

namespace ddlab {

// The linearly independent kernel solutions g_i spanning the two-sided exit
// quantities: four for the PEMP, three for the jump diffusion.
struct KernelBasis {
    int size;
    std::function<double(int, double)> g; // 1-based index
};

KernelBasis pemp_basis();
KernelBasis jd_basis();

// Matrix data of the exit linear system on (u, v): M per the model's closed
// forms, N = M^{-1}, and D = dN/dv computed analytically as -N (dM/dv) N.
struct ExitMatrixSet {
    double u = 0.0;
    double v = 0.0;
    Eigen::MatrixXd M;
    Eigen::MatrixXd N;
    Eigen::MatrixXd D;
};

ExitMatrixSet pemp_matrix(double u, double v);
ExitMatrixSet jd_matrix(double u, double v);

// Two-sided exit quantities on [u, v] at q = 0: creeping passage above (B1),
// overshoot passage above (density e^{-z} B2_amp(x)), and passage below with
// undershoot transform (C).
struct ExitQuantities {
    std::function<double(double)> B1;
    std::function<double(double)> B2_amp;
    std::function<double(double, double)> B2_density; // (x, z)
    std::function<double(double, double)> C;           // (x, s)
    double u = 0.0;
    double v = 0.0;
};

ExitQuantities pemp_exit(double u, double v);
ExitQuantities jd_exit(double u, double v);

// Local drawdown rate fields assembled from the v-derivative matrices at
// (u, v) = (x - a, x).
RateField pemp_rates(double a);
RateField jd_rates(double a);

// Independent recomputation of the PEMP (b1, c) through the renewal
// identities: one Poisson-jump conditioning step with the exit quantities
// inside the jump integral. q = 0. The drift, intensity, and jump density
// come from `spec`; the exit quantities under the integral are the
// reference instance's (the kernel basis is specific to it).
LocalRates pemp_rates_renewal(const PempSpec& spec, double a, double x, double s);

} // namespace ddlab
