#include "ddlab/scale.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/quadrature.hpp"

#include <cmath>

namespace ddlab {

namespace {

// sinh(sqrt(w) x)/sqrt(w) extended through w <= 0 (sin branch), and the
// matching cosh-like even part. Both are entire in w, which is what makes
// the scale functions analytic in q.
double shc(double w, double x) {
    if (w > 0.0) {
        double r = std::sqrt(w);
        return std::sinh(r * x) / r;
    }
    if (w < 0.0) {
        double r = std::sqrt(-w);
        return std::sin(r * x) / r;
    }
    return x;
}

double chc(double w, double x) {
    if (w > 0.0) return std::cosh(std::sqrt(w) * x);
    if (w < 0.0) return std::cos(std::sqrt(-w) * x);
    return 1.0;
}

struct BmForms {
    double alpha; // mu / sigma^2
    double w;     // (mu^2 + 2 q sigma^2) / sigma^4
    double s2;    // sigma^2

    BmForms(const BrownianLevySpec& m, double q)
        : alpha(m.drift / (m.volatility * m.volatility)),
          s2(m.volatility * m.volatility) {
        w = (m.drift * m.drift + 2.0 * q * s2) / (s2 * s2);
    }

    double W(double x) const { return 2.0 / s2 * std::exp(-alpha * x) * shc(w, x); }
    double Wp(double x) const {
        return 2.0 / s2 * std::exp(-alpha * x) * (chc(w, x) - alpha * shc(w, x));
    }
    double Z(double x) const {
        return std::exp(-alpha * x) * (chc(w, x) + alpha * shc(w, x));
    }
};

struct ClForms {
    double c, eta, m, d2;

    ClForms(const CramerLundbergSpec& spec, double q)
        : c(spec.premium), eta(spec.eta()) {
        m = (spec.claim_rate + q - c * eta) / (2.0 * c);
        d2 = m * m + q * eta / c;
    }

    double W(double x) const {
        return std::exp(m * x) / c * ((eta + m) * shc(d2, x) + chc(d2, x));
    }
    double Wp(double x) const {
        return std::exp(m * x) / c *
               ((m * (eta + m) + d2) * shc(d2, x) + (eta + 2.0 * m) * chc(d2, x));
    }
    double Z(double x) const {
        return std::exp(m * x) *
               (chc(d2, x) - (m * (eta + m) - d2) / eta * shc(d2, x));
    }
};

} // namespace

ScaleFunctionSet::ScaleFunctionSet(const BrownianLevySpec& spec) : spec_(spec) {
    if (!(spec.volatility > 0.0)) throw validation_error("volatility > 0");
}

ScaleFunctionSet::ScaleFunctionSet(const CramerLundbergSpec& spec) : spec_(spec) {
    if (!(spec.premium > 0.0 && spec.claim_rate > 0.0 && spec.claim_mean > 0.0))
        throw validation_error("Cramer-Lundberg parameters must be positive");
}

double ScaleFunctionSet::psi(double s) const {
    return std::visit([s](const auto& m) { return m.psi(s); }, spec_);
}

double ScaleFunctionSet::W(double q, double x) const {
    if (x < 0.0) throw domain_error("scale function argument x must be >= 0");
    return std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianLevySpec>)
                return BmForms(m, q).W(x);
            else
                return ClForms(m, q).W(x);
        },
        spec_);
}

double ScaleFunctionSet::W_prime(double q, double x) const {
    if (x < 0.0) throw domain_error("scale function argument x must be >= 0");
    return std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianLevySpec>)
                return BmForms(m, q).Wp(x);
            else
                return ClForms(m, q).Wp(x);
        },
        spec_);
}

double ScaleFunctionSet::Z(double q, double x) const {
    if (x < 0.0) throw domain_error("scale function argument x must be >= 0");
    return std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianLevySpec>)
                return BmForms(m, q).Z(x);
            else
                return ClForms(m, q).Z(x);
        },
        spec_);
}

ScaleFunctionSet ScaleFunctionSet::tilt(double s) const {
    if (!(s >= 0.0)) throw domain_error("tilt parameter s must be >= 0");
    return std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianLevySpec>) {
                BrownianLevySpec t = m;
                t.drift = m.drift + s * m.volatility * m.volatility;
                return ScaleFunctionSet(t);
            } else {
                CramerLundbergSpec t = m;
                double eta = m.eta();
                t.claim_rate = m.claim_rate * eta / (eta + s);
                t.claim_mean = 1.0 / (eta + s);
                return ScaleFunctionSet(t);
            }
        },
        spec_);
}

NaturalScale::NaturalScale(const DiffusionSpec& spec, double x_ref)
    : spec_(spec), x_ref_(x_ref) {
    if (!(spec.vol_coef > 0.0)) throw validation_error("vol_coef > 0");
    if (spec.family == DiffusionFamily::gbm && !(x_ref > 0.0)) x_ref_ = 1.0;
}

double NaturalScale::S_prime(double x) const {
    if (x <= spec_.domain_lo())
        throw domain_error("natural scale evaluated outside the state space");
    auto integrand = [this](double y) {
        double sig = spec_.sigma(y);
        return 2.0 * spec_.mu(y) / (sig * sig);
    };
    double e = integrate(integrand, x_ref_, x, 1e-12);
    return std::exp(-e);
}

double NaturalScale::S(double x) const {
    if (x <= spec_.domain_lo())
        throw domain_error("natural scale evaluated outside the state space");
    return integrate([this](double y) { return S_prime(y); }, x_ref_, x, 1e-11);
}

} // namespace ddlab
