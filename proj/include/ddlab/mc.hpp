#pragma once

#include "ddlab/model.hpp"
#include "ddlab/rng.hpp"

#include <cstdint>

namespace ddlab {

struct MCConfig {
    long n_paths = 100000;
    uint64_t seed = 0;
    double dt = 1e-3;      // Euler step where discretization is needed
    int chunk_size = 4096; // work unit; part of the stream addressing
};

enum class StopReason { drawdown_crossed, max_exceeded_K };

struct EpisodeOutcome {
    StopReason stop_reason;
    double tau = 0.0;       // stopping time
    double M_at_stop = 0.0; // running maximum at the stop
    double Y_at_stop = 0.0; // drawdown at the stop (>= a when crossed)
};

// Exact event-driven episode: deterministic exponential flow between jumps,
// so the drawdown can cross only at jump instants and the maximum cap only
// along the flow. No time discretization.
EpisodeOutcome simulate_pemp_episode(const PempSpec& spec, double x0, double a,
                                     double K, PathRng& rng);

// Exact event-driven episode for the Cramer-Lundberg process (linear flow).
EpisodeOutcome simulate_cl_episode(const CramerLundbergSpec& spec, double x0,
                                   double a, double K, PathRng& rng);

// Euler-Maruyama between exactly sampled jump times. Barriers are monitored
// with sampled Brownian-bridge extremes per step, leaving an O(dt) residual
// bias instead of the O(sqrt(dt)) of endpoint checks.
EpisodeOutcome simulate_jd_episode(const GenPempSpec& spec, double x0, double a,
                                   double K, double dt, PathRng& rng);

EpisodeOutcome simulate_bm_episode(const BrownianLevySpec& spec, double x0,
                                   double a, double K, double dt, PathRng& rng);

EpisodeOutcome simulate_diffusion_episode(const DiffusionSpec& spec, double x0,
                                          double a, double K, double dt,
                                          PathRng& rng);

EpisodeOutcome simulate_refracted_episode(const RefractedSpec& spec, double x0,
                                          double a, double K, double dt,
                                          PathRng& rng);

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    long n = 0;
    uint64_t seed = 0;
};

// indicator_M_le_K: e^{-q tau - s(Y-a)} on {M <= K} (the plain indicator at
// q = s = 0). laplace: e^{-q tau - s(Y-a) - delta M} with no cap; episodes are
// truncated at a maximum where the integrand is negligible.
struct Functional {
    enum class Kind { indicator_M_le_K, laplace } kind = Kind::indicator_M_le_K;
    static Functional indicator() { return {}; }
    static Functional laplace() { return {Kind::laplace}; }
};

// Chunked, reproducible estimate of the drawdown functional. The worker count
// (DDLAB_THREADS, else hardware) never changes the result.
MCEstimate estimate(const ModelSpec& model, const DrawdownQuery& query,
                    const MCConfig& mc, const Functional& functional);

struct PathIneqReport {
    long paths = 0;
    long up_violations = 0;
    long down1_violations = 0;
    long down2_violations = 0;
    bool ok() const {
        return up_violations == 0 && down1_violations == 0 && down2_violations == 0;
    }
};

// Evaluates the pathwise first-passage orderings on exact episodes:
// the indicator sandwich for reaching x + eps before a drawdown, and the
// two overshoot-discount bounds. Violations must be zero for exact paths.
// flip_directions reverses every assertion; it exists so the test harness can
// confirm the checker reports violations on false orderings.
PathIneqReport check_path_inequalities(const PempSpec& spec, double x, double eps,
                                       double a, long n, uint64_t seed,
                                       double q = 0.1, double s = 0.1,
                                       bool flip_directions = false);

} // namespace ddlab
