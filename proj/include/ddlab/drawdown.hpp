#pragma once

#include "ddlab/model.hpp"
#include "ddlab/rate_field.hpp"
#include "ddlab/solver.hpp"

namespace ddlab {

// Local drawdown rates of any supported model at threshold query.a.
// The kernel-based families (pemp, jd) and the diffusion rates exist at
// q = 0 only; jd and diffusion additionally require s = 0.
RateField make_rate_field(const ModelSpec& model, const DrawdownQuery& query);

// Validates, builds rates, and solves with the configured method
// (method `both` solves backward here; callers wanting both curves call the
// two solvers directly).
HCurve solve(const ModelSpec& model, const DrawdownQuery& query,
             const SolverConfig& cfg);

} // namespace ddlab
