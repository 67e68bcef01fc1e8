#include "ddlab/solver.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ddlab {

SolveMethod parse_method(const std::string& name) {
    if (name == "backward_rk4" || name == "backward") return SolveMethod::backward_rk4;
    if (name == "picard") return SolveMethod::picard;
    if (name == "both") return SolveMethod::both;
    throw validation_error("unknown method '" + name +
                           "' (expected backward_rk4 | picard | both)");
}

const char* method_name(SolveMethod m) {
    switch (m) {
    case SolveMethod::backward_rk4: return "backward_rk4";
    case SolveMethod::picard: return "picard";
    case SolveMethod::both: return "both";
    }
    return "?";
}

double HCurve::value_at(double x) const {
    if (xs.empty()) throw domain_error("empty curve");
    if (x <= xs.front()) return hs.front();
    if (x >= xs.back()) return hs.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t i = static_cast<size_t>(it - xs.begin());
    double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - t) * hs[i - 1] + t * hs[i];
}

double resolve_x_min(const RateField& rates, const DrawdownQuery& query,
                     const SolverConfig& cfg) {
    double x_min;
    if (std::isfinite(cfg.x_min)) {
        x_min = cfg.x_min;
    } else if (std::isfinite(rates.domain_lo)) {
        x_min = rates.domain_lo;
    } else {
        x_min = std::min(query.x0, query.K - 10.0 * query.a);
    }
    x_min = std::max(x_min, rates.domain_lo);
    if (!(x_min < query.K)) throw validation_error("x_min must lie below K");
    return x_min;
}

namespace {

struct Grid {
    std::vector<double> xs;
    double dx;
};

Grid make_grid(double x_min, double K, double step_req, double a) {
    double step = step_req > 0.0 ? step_req : a / 200.0;
    long n = std::lround(std::ceil((K - x_min) / step - 1e-9));
    n = std::max<long>(n, 2);
    Grid g;
    g.dx = (K - x_min) / static_cast<double>(n);
    g.xs.resize(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i)
        g.xs[static_cast<size_t>(i)] = x_min + g.dx * static_cast<double>(i);
    g.xs.back() = K;
    return g;
}

HCurve::Meta make_meta(const RateField& rates, const DrawdownQuery& query,
                       const char* method) {
    HCurve::Meta m;
    m.q = query.q;
    m.s = query.s;
    m.a = query.a;
    m.K = query.K;
    m.model = rates.model;
    m.method = method;
    return m;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v))
        throw instability_error(std::string("nonfinite ") + what + " evaluation");
    return v;
}

} // namespace

HCurve solve_backward(const RateField& rates, const DrawdownQuery& query,
                      const SolverConfig& cfg) {
    double x_min = resolve_x_min(rates, query, cfg);
    Grid grid = make_grid(x_min, query.K, cfg.grid_step, query.a);
    const size_t n = grid.xs.size() - 1;
    const auto& comps = rates.b2_density.components;
    const size_t m = comps.size();

    // State: h plus one decaying memory integral per exponential component.
    using State = std::vector<double>;
    auto deriv = [&](double y, const State& st, State& out) {
        double b1 = checked(rates.b1(y), "b1");
        double c = checked(rates.c(y, query.s), "c");
        double amp = m ? checked(rates.b2_amp(y), "b2_amp") : 0.0;
        double tail = 0.0;
        for (size_t j = 0; j < m; ++j) tail += comps[j].weight * st[1 + j];
        out[0] = (b1 - rates.atom0) * st[0] - c - amp * tail;
        for (size_t j = 0; j < m; ++j)
            out[1 + j] = comps[j].rate * (st[1 + j] - st[0]);
    };

    State st(1 + m, 0.0), k1(1 + m), k2(1 + m), k3(1 + m), k4(1 + m), tmp(1 + m);
    std::vector<double> hs(n + 1, 0.0);
    const double dx = grid.dx;
    for (size_t i = n; i-- > 0;) {
        double y = grid.xs[i + 1];
        deriv(y, st, k1);
        for (size_t j = 0; j < st.size(); ++j) tmp[j] = st[j] - 0.5 * dx * k1[j];
        deriv(y - 0.5 * dx, tmp, k2);
        for (size_t j = 0; j < st.size(); ++j) tmp[j] = st[j] - 0.5 * dx * k2[j];
        deriv(y - 0.5 * dx, tmp, k3);
        for (size_t j = 0; j < st.size(); ++j) tmp[j] = st[j] - dx * k3[j];
        deriv(y - dx, tmp, k4);
        for (size_t j = 0; j < st.size(); ++j)
            st[j] -= dx / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (!(std::abs(st[0]) <= 1.0 + 1e-6))
            throw instability_error("|h| exceeded 1 + 1e-6 while marching");
        hs[i] = st[0];
    }

    HCurve curve;
    curve.xs = std::move(grid.xs);
    curve.hs = std::move(hs);
    curve.meta = make_meta(rates, query, "backward_rk4");
    return curve;
}

HCurve solve_picard(const RateField& rates, const DrawdownQuery& query,
                    const SolverConfig& cfg) {
    double x_min = resolve_x_min(rates, query, cfg);
    Grid grid = make_grid(x_min, query.K, cfg.grid_step, query.a);
    const size_t n = grid.xs.size() - 1;
    const double dx = grid.dx;
    const auto& comps = rates.b2_density.components;
    const size_t m = comps.size();

    std::vector<double> b1(n + 1), c(n + 1), amp(n + 1, 0.0);
    for (size_t i = 0; i <= n; ++i) {
        b1[i] = checked(rates.b1(grid.xs[i]), "b1");
        c[i] = checked(rates.c(grid.xs[i], query.s), "c");
        if (m) amp[i] = checked(rates.b2_amp(grid.xs[i]), "b2_amp");
    }

    // Discount factors across one cell from the cumulative trapezoid of b1.
    std::vector<double> qcell(n);
    for (size_t i = 0; i < n; ++i)
        qcell[i] = std::exp(-0.5 * dx * (b1[i] + b1[i + 1]));

    std::vector<double> h(n + 1, cfg.picard_init), hn(n + 1, 0.0), F(n + 1);
    h[n] = 0.0; // iterates live in the space of curves vanishing at K
    std::vector<std::vector<double>> J(m, std::vector<double>(n + 1, 0.0));

    double prev_inc = 0.0, contraction = 0.0;
    int iter = 0;
    for (; iter < cfg.picard_max_iter; ++iter) {
        // Inner exponential integrals by backward running sums.
        for (size_t j = 0; j < m; ++j) {
            double r = comps[j].rate;
            double decay = std::exp(-r * dx);
            auto& Jj = J[j];
            Jj[n] = 0.0;
            for (size_t i = n; i-- > 0;)
                Jj[i] = decay * Jj[i + 1] + 0.5 * dx * r * (h[i] + decay * h[i + 1]);
        }
        for (size_t i = 0; i <= n; ++i) {
            double tail = 0.0;
            for (size_t j = 0; j < m; ++j) tail += comps[j].weight * J[j][i];
            F[i] = c[i] + amp[i] * tail + rates.atom0 * h[i];
        }
        hn[n] = 0.0;
        for (size_t i = n; i-- > 0;)
            hn[i] = qcell[i] * hn[i + 1] + 0.5 * dx * (F[i] + qcell[i] * F[i + 1]);

        double inc = 0.0;
        for (size_t i = 0; i <= n; ++i) inc = std::max(inc, std::abs(hn[i] - h[i]));
        h.swap(hn);
        if (iter > 0 && prev_inc > 0.0)
            contraction = std::max(contraction, inc / prev_inc);
        prev_inc = inc;
        if (inc <= cfg.picard_tol) {
            ++iter;
            break;
        }
    }
    if (prev_inc > cfg.picard_tol)
        throw convergence_error("Picard iteration did not reach tolerance");

    HCurve curve;
    curve.xs = std::move(grid.xs);
    curve.hs = std::move(h);
    curve.meta = make_meta(rates, query, "picard");
    curve.meta.iterations = iter;
    curve.meta.contraction = contraction;
    return curve;
}

HCurve solve_spectrally_negative(const RateField& rates, const DrawdownQuery& query,
                                 const SolverConfig& cfg) {
    double x_min = resolve_x_min(rates, query, cfg);
    Grid grid = make_grid(x_min, query.K, cfg.grid_step, query.a);
    const size_t n = grid.xs.size() - 1;

    for (size_t i = 0; i <= n; ++i)
        if (rates.b2_total(grid.xs[i]) != 0.0)
            throw unsupported_error("overshoot rate must vanish for the "
                                    "spectrally negative quadrature");

    std::vector<double> hs(n + 1, 0.0);
    for (size_t i = n; i-- > 0;) {
        double lo = grid.xs[i], hi = grid.xs[i + 1];
        double seg = integrate([&](double y) { return rates.b1(y); }, lo, hi, 1e-9);
        double part = integrate(
            [&](double y) {
                double expo = integrate([&](double w) { return rates.b1(w); }, lo,
                                        y, 1e-9);
                return std::exp(-expo) * rates.c(y, query.s);
            },
            lo, hi, 1e-9);
        hs[i] = std::exp(-seg) * hs[i + 1] + part;
        checked(hs[i], "quadrature");
    }

    HCurve curve;
    curve.xs = std::move(grid.xs);
    curve.hs = std::move(hs);
    curve.meta = make_meta(rates, query, "spectrally_negative");
    return curve;
}

double levy_joint_lt(double b1, double b2_amp,
                     const std::function<double(double)>& b2_lt, double c,
                     double delta) {
    double denom = delta + b1 - b2_amp * (b2_amp != 0.0 ? b2_lt(delta) : 0.0);
    if (!(denom > 1e-300)) throw singular_error("transform denominator vanishes");
    return c / denom;
}

std::vector<IneqViolation> check_rate_inequality(const RateField& rates,
                                                 std::span<const double> grid,
                                                 double s) {
    std::vector<IneqViolation> out;
    for (double x : grid) {
        double b1 = rates.b1(x);
        double cv = rates.c(x, s);
        double total = cv + rates.b2_total(x);
        // Margin 0 is allowed; tolerate roundoff at the exact boundary.
        double slack = 1e-10 * std::max(1.0, std::abs(b1));
        double excess = std::max(-cv, total - b1);
        if (excess > slack) out.push_back({x, excess});
    }
    return out;
}

} // namespace ddlab
