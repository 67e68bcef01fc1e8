#include "ddlab/snlp_rates.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/quadrature.hpp"

#include <cmath>
#include <memory>

namespace ddlab {

namespace {

LevySpec reduced_by(const LevySpec& base, double lambda) {
    return std::visit(
        [&](const auto& m) -> LevySpec {
            using T = std::decay_t<decltype(m)>;
            T r = m;
            if constexpr (std::is_same_v<T, BrownianLevySpec>) {
                r.drift -= lambda;
            } else {
                r.premium -= lambda;
                if (!(r.premium > 0.0))
                    throw validation_error("premium - refraction > 0");
            }
            return r;
        },
        base);
}

// Plain rates (s = 0) expressed through a given scale set.
LocalRates plain_rates_q(const ScaleFunctionSet& sf, double q, double a) {
    double Wa = sf.W(q, a);
    if (!(Wa > 0.0)) throw singular_error("scale function vanishes at a");
    double Wpa = sf.W_prime(q, a);
    double Za = sf.Z(q, a);
    return {Wpa / Wa, (Za * Wpa - q * Wa * Wa) / Wa};
}

} // namespace

ScaleFunctionSet make_scale_set(const LevySpec& spec) {
    return std::visit([](const auto& m) { return ScaleFunctionSet(m); }, spec);
}

double scale_W(const LevySpec& spec, double q, double x) {
    return make_scale_set(spec).W(q, x);
}

double scale_Z(const LevySpec& spec, double q, double x) {
    return make_scale_set(spec).Z(q, x);
}

LocalRates snlp_local_rates(const LevySpec& spec, double q, double s, double a) {
    if (!(a > 0.0)) throw domain_error("a > 0 required");
    ScaleFunctionSet sf = make_scale_set(spec);
    double Wa = sf.W(q, a);
    if (!(Wa > 0.0)) throw singular_error("W(q, a) vanishes");
    double b1 = sf.W_prime(q, a) / Wa;

    double p = q - sf.psi(s);
    ScaleFunctionSet ts = sf.tilt(s);
    double Ws = ts.W(p, a);
    if (!(Ws > 0.0)) throw singular_error("tilted scale function vanishes at a");
    double c = std::exp(s * a) * (ts.Z(p, a) * ts.W_prime(p, a) - p * Ws * Ws) / Ws;
    return {b1, c};
}

double snlp_joint_lt(const LevySpec& spec, const DrawdownQuery& query) {
    if (!(query.a > 0.0)) throw domain_error("a > 0 required");
    double q = query.q, s = query.s, delta = query.delta, a = query.a;

    ScaleFunctionSet sf = make_scale_set(spec);
    double Wa = sf.W(q, a);
    double Wpa = sf.W_prime(q, a);
    double denom = delta * Wa + Wpa;
    if (!(std::abs(denom) > 1e-300)) throw singular_error("denominator vanishes");

    double p = q - sf.psi(s);
    ScaleFunctionSet ts = sf.tilt(s);
    double Ws = ts.W(p, a);
    if (!(Ws > 0.0)) throw singular_error("tilted scale function vanishes at a");
    return std::exp(s * a) * Wa / denom *
           (ts.Z(p, a) * ts.W_prime(p, a) - p * Ws * Ws) / Ws;
}

LocalRates refracted_local_rates(const RefractedSpec& spec, double q, double x,
                                 double a) {
    if (!(a > 0.0)) throw domain_error("a > 0 required");
    const double b = spec.threshold;
    const double lam = spec.refraction;

    ScaleFunctionSet base = make_scale_set(spec.base);
    if (b > x || lam == 0.0) return plain_rates_q(base, q, a);
    if (b <= x - a) return plain_rates_q(make_scale_set(reduced_by(spec.base, lam)), q, a);

    // Threshold inside [x - a, x]: scale functions of base and reduced
    // processes mix through convolutions over [b - x + a, a].
    ScaleFunctionSet red = make_scale_set(reduced_by(spec.base, lam));
    const double lo = b - x + a;

    double W0r = red.W(q, 0.0);
    double Wa = base.W(q, a);
    double Wpa = base.W_prime(q, a);
    double Za = base.Z(q, a);

    auto conv = [&](auto&& f) { return integrate(f, lo, a, 1e-9); };
    double I_w_wp = conv([&](double y) { return red.W(q, a - y) * base.W_prime(q, y); });
    double I_wp_wp = conv([&](double y) { return red.W_prime(q, a - y) * base.W_prime(q, y); });
    double I_w_w = conv([&](double y) { return red.W(q, a - y) * base.W(q, y); });
    double I_wp_w = conv([&](double y) { return red.W_prime(q, a - y) * base.W(q, y); });

    double denom = Wa + lam * I_w_wp;
    if (!(denom > 0.0)) throw singular_error("refracted denominator vanishes");

    double pre = 1.0 + lam * W0r;
    double b1 = (pre * Wpa + lam * I_wp_wp) / denom;

    double k = pre * (Za * Wpa - q * Wa * Wa);
    k += lam * q * pre * (Wpa * I_w_w - Wa * I_w_wp);
    k -= lam * q * denom * I_wp_w;
    k += lam * (Za + lam * q * I_w_w) * I_wp_wp;
    return {b1, k / denom};
}

LocalRates diffusion_rates_q0(const DiffusionSpec& spec, double x, double a) {
    if (!(a > 0.0)) throw domain_error("a > 0 required");
    if (!(x - a > spec.domain_lo()))
        throw domain_error("[x - a, x] leaves the diffusion's state space");
    // Anchoring at x - a makes the denominator a single short integral.
    NaturalScale ns(spec, x - a);
    double den = ns.S(x);
    if (!(den > 0.0)) throw singular_error("natural scale increment vanishes");
    double rate = ns.S_prime(x) / den;
    return {rate, rate};
}

RateField levy_rate_field(const LevySpec& spec, double q, double a) {
    LocalRates r0 = snlp_local_rates(spec, q, 0.0, a);
    RateField f;
    f.b1 = [r0](double) { return r0.b1; };
    f.b2_amp = [](double) { return 0.0; };
    f.c = [spec, q, a](double, double s) {
        return snlp_local_rates(spec, q, s, a).c;
    };
    f.model = std::holds_alternative<BrownianLevySpec>(spec) ? "bm" : "cl";
    return f;
}

RateField refracted_rate_field(const RefractedSpec& spec, double q, double a) {
    RateField f;
    f.b1 = [spec, q, a](double x) { return refracted_local_rates(spec, q, x, a).b1; };
    f.b2_amp = [](double) { return 0.0; };
    f.c = [spec, q, a](double x, double s) {
        if (s != 0.0)
            throw unsupported_error("refracted rates are available at s = 0 only");
        return refracted_local_rates(spec, q, x, a).c;
    };
    f.model = "refracted";
    return f;
}

RateField diffusion_rate_field(const DiffusionSpec& spec, double a) {
    RateField f;
    f.b1 = [spec, a](double x) { return diffusion_rates_q0(spec, x, a).b1; };
    f.b2_amp = [](double) { return 0.0; };
    f.c = [spec, a](double x, double s) {
        if (s != 0.0)
            throw unsupported_error("diffusion rates are available at s = 0 only");
        return diffusion_rates_q0(spec, x, a).c;
    };
    f.domain_lo = spec.domain_lo() + a;
    f.model = "diffusion";
    return f;
}

} // namespace ddlab
