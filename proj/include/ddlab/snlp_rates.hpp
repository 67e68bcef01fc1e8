#pragma once

#include "ddlab/model.hpp"
#include "ddlab/rate_field.hpp"
#include "ddlab/scale.hpp"

namespace ddlab {

using LevySpec = std::variant<BrownianLevySpec, CramerLundbergSpec>;

ScaleFunctionSet make_scale_set(const LevySpec& spec);

double scale_W(const LevySpec& spec, double q, double x);
double scale_Z(const LevySpec& spec, double q, double x);

// Local drawdown rates at threshold a for a spectrally negative Levy process;
// the upward-overshoot rate vanishes for this family.
LocalRates snlp_local_rates(const LevySpec& spec, double q, double s, double a);

// Joint transform E[e^{-q tau - s(Y-a) - delta M}] in closed form, for the
// process started at the origin (spatial homogeneity shifts the maximum by
// e^{-delta x0} otherwise).
double snlp_joint_lt(const LevySpec& spec, const DrawdownQuery& query);

// Local rates of the refracted process at level x (s = 0 only). Piecewise in
// the position of the refraction threshold relative to [x - a, x].
LocalRates refracted_local_rates(const RefractedSpec& spec, double q, double x,
                                 double a);

// q = 0 rates of a linear diffusion through the natural scale;
// both rates coincide: b1 = c = S'(x) / (S(x) - S(x-a)).
LocalRates diffusion_rates_q0(const DiffusionSpec& spec, double x, double a);

// Rate fields consumable by the solver (all spectrally negative).
RateField levy_rate_field(const LevySpec& spec, double q, double a);
RateField refracted_rate_field(const RefractedSpec& spec, double q, double a);
RateField diffusion_rate_field(const DiffusionSpec& spec, double a);

} // namespace ddlab
