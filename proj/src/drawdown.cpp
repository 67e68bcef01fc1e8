#include "ddlab/drawdown.hpp"

#include "ddlab/errors.hpp"
#include "ddlab/kernel_exit.hpp"
#include "ddlab/snlp_rates.hpp"

namespace ddlab {

RateField make_rate_field(const ModelSpec& model, const DrawdownQuery& query) {
    return std::visit(
        [&](const auto& m) -> RateField {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PempSpec>) {
                if (query.q != 0.0)
                    throw unsupported_error("pemp rates are available at q = 0 only");
                return pemp_rates(query.a);
            } else if constexpr (std::is_same_v<T, GenPempSpec>) {
                if (query.q != 0.0)
                    throw unsupported_error("jd rates are available at q = 0 only");
                return jd_rates(query.a);
            } else if constexpr (std::is_same_v<T, BrownianLevySpec>) {
                return levy_rate_field(LevySpec{m}, query.q, query.a);
            } else if constexpr (std::is_same_v<T, CramerLundbergSpec>) {
                return levy_rate_field(LevySpec{m}, query.q, query.a);
            } else if constexpr (std::is_same_v<T, DiffusionSpec>) {
                if (query.q != 0.0)
                    throw unsupported_error("diffusion rates are available at q = 0 only");
                return diffusion_rate_field(m, query.a);
            } else {
                return refracted_rate_field(m, query.q, query.a);
            }
        },
        model);
}

HCurve solve(const ModelSpec& model, const DrawdownQuery& query,
             const SolverConfig& cfg) {
    require_valid(model, query);
    RateField rates = make_rate_field(model, query);
    if (cfg.method == SolveMethod::picard) return solve_picard(rates, query, cfg);
    return solve_backward(rates, query, cfg);
}

} // namespace ddlab
