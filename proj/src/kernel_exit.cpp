#include "ddlab/kernel_exit.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/quadrature.hpp"

#include <cmath>

namespace ddlab {

namespace {

constexpr double kCondLimit = 1e12;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
}

double pemp_g(int i, double x) {
    switch (i) {
    case 1: return std::exp(-2.0 * x) / 6.0;
    case 2: return -std::exp(-x) / 2.0;
    case 3: return 0.5;
    case 4: return -std::exp(x) / 6.0;
    }
    throw domain_error("pemp basis index out of range");
}

double pemp_g_prime(int i, double x) {
    switch (i) {
    case 1: return -std::exp(-2.0 * x) / 3.0;
    case 2: return std::exp(-x) / 2.0;
    case 3: return 0.0;
    case 4: return -std::exp(x) / 6.0;
    }
    throw domain_error("pemp basis index out of range");
}

// jd_g3(x) = 1 - int_0^inf N(x+y) e^{-y} dy; integrating by parts and
// completing the square reduces the tail integral to normal cdf terms.
double jd_g3(double x) {
    return 1.0 - norm_cdf(x) - std::exp(x + 0.5) * (1.0 - norm_cdf(x + 1.0));
}

double jd_g3_prime(double x) {
    return -std::exp(x + 0.5) * (1.0 - norm_cdf(x + 1.0));
}

double jd_g(int i, double x) {
    switch (i) {
    case 1: return 1.0;
    case 2: return -std::exp(x + 0.5);
    case 3: return jd_g3(x);
    }
    throw domain_error("jd basis index out of range");
}

double jd_g_prime(int i, double x) {
    switch (i) {
    case 1: return 0.0;
    case 2: return -std::exp(x + 0.5);
    case 3: return jd_g3_prime(x);
    }
    throw domain_error("jd basis index out of range");
}

// 1 - int_0^inf N(v+y) y e^{-y} dy, with the same reduction as jd_g3.
double jd_m31(double v) {
    return 1.0 - norm_cdf(v) -
           std::exp(v + 0.5) * (norm_pdf(v + 1.0) - v * (1.0 - norm_cdf(v + 1.0)));
}

double jd_m31_dv(double v) {
    return -std::exp(v + 0.5) *
           (norm_pdf(v + 1.0) - (v + 1.0) * (1.0 - norm_cdf(v + 1.0)));
}

ExitMatrixSet finish_matrix(double u, double v, Eigen::MatrixXd M,
                            const Eigen::MatrixXd& dMdv) {
    // The rows mix e^{+-u}, e^{+-v} scales by construction, so measure
    // conditioning (and invert) after row equilibration.
    Eigen::VectorXd row_scale = M.cwiseAbs().rowwise().maxCoeff();
    if (!(row_scale.minCoeff() > 0.0))
        throw singular_error("exit matrix has a zero row");
    Eigen::MatrixXd Ms = row_scale.cwiseInverse().asDiagonal() * M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ms);
    Eigen::MatrixXd Ns = lu.inverse();
    double cond = Ms.cwiseAbs().rowwise().sum().maxCoeff() *
                  Ns.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > kCondLimit)
        throw singular_error("exit matrix numerically singular (cond > 1e12)");
    Eigen::MatrixXd N = Ns * row_scale.cwiseInverse().asDiagonal();
    ExitMatrixSet set;
    set.u = u;
    set.v = v;
    set.M = std::move(M);
    set.N = N;
    set.D = -N * dMdv * N;
    return set;
}

} // namespace

KernelBasis pemp_basis() { return {4, [](int i, double x) { return pemp_g(i, x); }}; }
KernelBasis jd_basis() { return {3, [](int i, double x) { return jd_g(i, x); }}; }

ExitMatrixSet pemp_matrix(double u, double v) {
    if (!(0.0 < u && u < v)) throw domain_error("pemp matrix requires 0 < u < v");
    Eigen::MatrixXd M(4, 4);
    M << -std::exp(-2.0 * u) / 3.0 * (u + 11.0 / 6.0), std::exp(-2.0 * u) / 6.0,
        std::exp(-2.0 * v) / 18.0, pemp_g(1, v),
        //
        std::exp(-u), std::exp(-u) / 2.0 * (u + 0.5), -std::exp(-v) / 4.0,
        pemp_g(2, v),
        //
        -0.5, -0.5, 0.5, pemp_g(3, v),
        //
        std::exp(u) / 9.0, std::exp(u) / 12.0,
        std::exp(v) / 6.0 * (v - 11.0 / 6.0), pemp_g(4, v);

    Eigen::MatrixXd dM = Eigen::MatrixXd::Zero(4, 4);
    dM(0, 2) = -std::exp(-2.0 * v) / 9.0;
    dM(1, 2) = std::exp(-v) / 4.0;
    dM(3, 2) = std::exp(v) / 6.0 * (v - 5.0 / 6.0);
    for (int i = 0; i < 4; ++i) dM(i, 3) = pemp_g_prime(i + 1, v);
    return finish_matrix(u, v, std::move(M), dM);
}

ExitMatrixSet jd_matrix(double u, double v) {
    if (!(u < v)) throw domain_error("jd matrix requires u < v");
    Eigen::MatrixXd M(3, 3);
    M << 1.0, jd_g(1, v), jd_g(1, u),
        //
        v * std::exp(v + 0.5), jd_g(2, v), jd_g(2, u),
        //
        jd_m31(v), jd_g(3, v), jd_g(3, u);

    Eigen::MatrixXd dM = Eigen::MatrixXd::Zero(3, 3);
    dM(1, 0) = std::exp(v + 0.5) * (v + 1.0);
    dM(2, 0) = jd_m31_dv(v);
    for (int i = 0; i < 3; ++i) dM(i, 1) = jd_g_prime(i + 1, v);
    return finish_matrix(u, v, std::move(M), dM);
}

ExitQuantities pemp_exit(double u, double v) {
    auto set = pemp_matrix(u, v);
    Eigen::MatrixXd N = set.N;
    auto row_sum = [N](int k, double x) {
        double r = 0.0;
        for (int i = 0; i < 4; ++i) r += N(k, i) * pemp_g(i + 1, x);
        return r;
    };
    ExitQuantities out;
    out.u = u;
    out.v = v;
    out.B1 = [row_sum](double x) { return row_sum(3, x); };
    out.B2_amp = [row_sum](double x) { return row_sum(2, x); };
    out.B2_density = [row_sum](double x, double z) {
        return std::exp(-z) * row_sum(2, x);
    };
    out.C = [N](double x, double s) {
        double r = 0.0;
        for (int i = 0; i < 4; ++i)
            r += (-2.0 / (s + 2.0) * N(0, i) - 1.0 / (s + 1.0) * N(1, i)) *
                 pemp_g(i + 1, x);
        return r;
    };
    return out;
}

ExitQuantities jd_exit(double u, double v) {
    auto set = jd_matrix(u, v);
    Eigen::MatrixXd N = set.N;
    auto row_sum = [N](int k, double x) {
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += N(k, i) * jd_g(i + 1, x);
        return r;
    };
    ExitQuantities out;
    out.u = u;
    out.v = v;
    out.B1 = [row_sum](double x) { return row_sum(1, x); };
    out.B2_amp = [row_sum](double x) { return row_sum(0, x); };
    out.B2_density = [row_sum](double x, double z) {
        return std::exp(-z) * row_sum(0, x);
    };
    out.C = [row_sum](double x, double s) {
        if (s != 0.0)
            throw unsupported_error("jd undershoot transform available at s = 0 only");
        return row_sum(2, x);
    };
    return out;
}

RateField pemp_rates(double a) {
    if (!(a > 0.0)) throw domain_error("a > 0 required");
    auto dmat = [a](double x) {
        if (!(x > a))
            throw domain_error("pemp rates defined for x > a (lower level must stay positive)");
        return pemp_matrix(x - a, x);
    };
    RateField f;
    f.b1 = [dmat](double x) {
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 4; ++i) r += set.D(3, i) * pemp_g(i + 1, x);
        return -r;
    };
    f.b2_amp = [dmat](double x) {
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 4; ++i) r += set.D(2, i) * pemp_g(i + 1, x);
        return r;
    };
    f.b2_density.components = {{1.0, 1.0}};
    f.c = [dmat](double x, double s) {
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 4; ++i)
            r += (-2.0 / (s + 2.0) * set.D(0, i) - 1.0 / (s + 1.0) * set.D(1, i)) *
                 pemp_g(i + 1, x);
        return r;
    };
    f.domain_lo = a * (1.0 + 1e-9);
    f.model = "pemp";
    return f;
}

RateField jd_rates(double a) {
    if (!(a > 0.0)) throw domain_error("a > 0 required");
    auto dmat = [a](double x) { return jd_matrix(x - a, x); };
    RateField f;
    f.b1 = [dmat](double x) {
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += set.D(1, i) * jd_g(i + 1, x);
        return -r;
    };
    f.b2_amp = [dmat](double x) {
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += set.D(0, i) * jd_g(i + 1, x);
        return r;
    };
    f.b2_density.components = {{1.0, 1.0}};
    f.c = [dmat](double x, double s) {
        if (s != 0.0)
            throw unsupported_error("jd rates are available at s = 0 only");
        auto set = dmat(x);
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += set.D(2, i) * jd_g(i + 1, x);
        return r;
    };
    f.model = "jd";
    return f;
}

LocalRates pemp_rates_renewal(const PempSpec& spec, double a, double x, double s) {
    if (!(a > 0.0 && x > a)) throw domain_error("renewal rates require x > a > 0");
    const double lam = spec.lambda;
    const double mu = spec.mu;
    auto exits = pemp_exit(x - a, x);

    double quad_err = 0.0;
    double b1_jump = integrate(
        [&](double w) { return exits.B1(x + w) * spec.jump_density(w); }, -a, 0.0,
        1e-9, &quad_err);
    double b1 = lam / (mu * x) - lam / (mu * x) * b1_jump;

    double c_near = integrate(
        [&](double w) { return exits.C(x + w, s) * spec.jump_density(w); }, -a,
        0.0, 1e-9, &quad_err);
    // Below x - a the passage is instantaneous: C extends as e^{s(x+w-u)}.
    double c_far = 0.0;
    for (const auto& comp : spec.jump_mix) {
        if (comp.up) continue;
        c_far += comp.weight * comp.rate * std::exp(-comp.rate * a) / (s + comp.rate);
    }
    double c = lam / (mu * x) * (c_near + c_far);
    if (!std::isfinite(b1) || !std::isfinite(c))
        throw convergence_error("renewal quadrature failed");
    return {b1, c};
}

} // namespace ddlab
