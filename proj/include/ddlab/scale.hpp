#pragma once

#include "ddlab/model.hpp"

namespace ddlab {

// q-scale functions W^{(q)}, Z^{(q)} of a spectrally negative Levy process,
// in closed form for the Brownian-with-drift and Cramer-Lundberg families.
// The argument q may be negative (analytic continuation), which the
// Esscher-tilted evaluations require.
class ScaleFunctionSet {
  public:
    explicit ScaleFunctionSet(const BrownianLevySpec& spec);
    explicit ScaleFunctionSet(const CramerLundbergSpec& spec);

    double psi(double s) const;

    double W(double q, double x) const;
    // Right derivative of W in x (the Cramer-Lundberg W has a kink at 0).
    double W_prime(double q, double x) const;
    double Z(double q, double x) const;
    double Z_prime(double q, double x) const { return q * W(q, x); }

    // Scale set of the process under the exponential change of measure with
    // parameter s >= 0; stays within the same two families.
    ScaleFunctionSet tilt(double s) const;

  private:
    std::variant<BrownianLevySpec, CramerLundbergSpec> spec_;
};

// Natural scale of a linear diffusion, anchored at S(x_ref) = 0.
// S'(x) = exp(-int_{x_ref}^x 2 mu / sigma^2), evaluated by adaptive
// quadrature; rates depend only on S differences and S', so the anchor
// is immaterial.
class NaturalScale {
  public:
    explicit NaturalScale(const DiffusionSpec& spec, double x_ref = 0.0);

    double S(double x) const;
    double S_prime(double x) const;

  private:
    DiffusionSpec spec_;
    double x_ref_;
};

} // namespace ddlab
