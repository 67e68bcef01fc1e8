#pragma once

#include <string>
#include <variant>
#include <vector>

namespace ddlab {

// Spectrally negative Levy process X_t = drift*t + volatility*W_t.
struct BrownianLevySpec {
    double drift = 0.0;
    double volatility = 1.0;

    // Laplace exponent psi(s) = (1/t) log E[e^{s X_t}].
    double psi(double s) const { return drift * s + 0.5 * volatility * volatility * s * s; }
};

// Cramer-Lundberg risk process: premium*t minus compound Poisson
// exponential claims with the given rate and mean.
struct CramerLundbergSpec {
    double premium = 1.0;
    double claim_rate = 1.0;
    double claim_mean = 1.0;

    double eta() const { return 1.0 / claim_mean; }
    double psi(double s) const {
        return premium * s - claim_rate * (1.0 - eta() / (eta() + s));
    }
    bool net_profit() const { return premium > claim_rate * claim_mean; }
};

// One exponential component of a jump-size mixture.
struct JumpComponent {
    double weight = 0.0;
    double rate = 1.0;
    bool up = true; // direction of the jump
};

// Piecewise exponential Markov process: dX = mu*X dt + dZ with Z compound
// Poisson, jump sizes a finite mixture of (signed) exponentials.
struct PempSpec {
    double mu = 1.0;     // exponential drift coefficient, > 0
    double lambda = 3.0; // jump intensity
    std::vector<JumpComponent> jump_mix;

    // mu=1, lambda=3, mix {1/3 Exp(1) up, 1/3 Exp(1) down, 1/3 Exp(2) down}
    static PempSpec example_4_1();

    // Jump-size density p(w), w != 0.
    double jump_density(double w) const;
};

// Generalized PEMP with diffusion: dX = X dt + sqrt(2) dW + dZ,
// Z compound Poisson with unit intensity and unit-mean upward jumps.
// The kernel machinery is hard-wired to these coefficients.
struct GenPempSpec {
    double drift_slope = 1.0;
    double volatility = 1.4142135623730951; // sqrt(2)
    double jump_rate = 1.0;
    double up_jump_rate = 1.0;

    static GenPempSpec example_4_2() { return GenPempSpec{}; }
    bool is_reference_instance() const;
};

enum class DiffusionFamily { constant, ou, gbm };

// Linear diffusion dX = mu(X)dt + sigma(X)dW with coefficients drawn from a
// named family (keeps specs constructible from config files).
//   constant: mu(x) = drift_coef,   sigma(x) = vol_coef
//   ou:       mu(x) = -drift_coef*x, sigma(x) = vol_coef
//   gbm:      mu(x) = drift_coef*x, sigma(x) = vol_coef*x, state space (0,inf)
struct DiffusionSpec {
    DiffusionFamily family = DiffusionFamily::constant;
    double drift_coef = 0.0;
    double vol_coef = 1.0;

    double mu(double x) const;
    double sigma(double x) const;
    // Lower edge of the state space (-inf except for gbm).
    double domain_lo() const;
};

// Refracted spectrally negative Levy process: drift reduced by
// `refraction` whenever X is above `threshold`.
struct RefractedSpec {
    std::variant<BrownianLevySpec, CramerLundbergSpec> base;
    double refraction = 0.0;
    double threshold = 0.0;
};

using ModelSpec = std::variant<BrownianLevySpec, CramerLundbergSpec, PempSpec,
                               GenPempSpec, DiffusionSpec, RefractedSpec>;

const char* model_tag(const ModelSpec& spec);

// Arguments of a drawdown first-passage query: transform parameters
// (q, s, delta), drawdown threshold a, running-maximum cap K, start x0.
struct DrawdownQuery {
    double q = 0.0;
    double s = 0.0;
    double delta = 0.0;
    double a = 1.0;
    double K = 0.0;
    double x0 = 0.0;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks every structural constraint of the spec and the query; never throws.
ValidationReport validate(const ModelSpec& spec, const DrawdownQuery& query);

// Throwing wrapper around validate().
void require_valid(const ModelSpec& spec, const DrawdownQuery& query);

} // namespace ddlab
