#include "ddlab/mc.hpp"

#include "ddlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ddlab {

namespace {

// Samples one jump of the PEMP mixture.
double sample_jump(const PempSpec& spec, PathRng& rng) {
    double u = rng.uniform();
    double acc = 0.0;
    for (size_t i = 0; i < spec.jump_mix.size(); ++i) {
        acc += spec.jump_mix[i].weight;
        if (u < acc || i + 1 == spec.jump_mix.size()) {
            double j = rng.exponential(spec.jump_mix[i].rate);
            return spec.jump_mix[i].up ? j : -j;
        }
    }
    return 0.0;
}

int worker_count(long n_chunks) {
    long cap = 0;
    if (const char* env = std::getenv("DDLAB_THREADS")) cap = std::atol(env);
    if (cap <= 0) cap = static_cast<long>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    return static_cast<int>(std::min<long>(cap, std::max<long>(n_chunks, 1)));
}

} // namespace

EpisodeOutcome simulate_pemp_episode(const PempSpec& spec, double x0, double a,
                                     double K, PathRng& rng) {
    double x = x0, M = x0, tau = 0.0;
    for (;;) {
        double T = rng.exponential(spec.lambda);
        double t_K = std::log(K / x) / spec.mu; // flow reaches the cap at t_K
        if (T >= t_K) {
            return {StopReason::max_exceeded_K, tau + t_K, K, 0.0};
        }
        tau += T;
        x *= std::exp(spec.mu * T);
        M = std::max(M, x);
        double j = sample_jump(spec, rng);
        x += j;
        if (j > 0.0) {
            if (x > K) return {StopReason::max_exceeded_K, tau, x, 0.0};
            M = std::max(M, x);
        } else {
            double Y = M - x;
            if (Y > a) return {StopReason::drawdown_crossed, tau, M, Y};
        }
    }
}

EpisodeOutcome simulate_cl_episode(const CramerLundbergSpec& spec, double x0,
                                   double a, double K, PathRng& rng) {
    double x = x0, M = x0, tau = 0.0;
    for (;;) {
        double T = rng.exponential(spec.claim_rate);
        double t_K = (K - x) / spec.premium;
        if (T >= t_K) return {StopReason::max_exceeded_K, tau + t_K, K, 0.0};
        tau += T;
        x += spec.premium * T;
        M = std::max(M, x);
        x -= rng.exponential(spec.eta());
        double Y = M - x;
        if (Y > a) return {StopReason::drawdown_crossed, tau, M, Y};
    }
}

namespace {

// One Euler step plus sampled Brownian-bridge extremes. Checking the barriers
// against the bridge maximum/minimum instead of the endpoints removes the
// O(sqrt(dt)) detection bias (the residual is O(dt)).
struct StepOutcome {
    bool crossed_down = false;
    bool crossed_cap = false;
    double x_end = 0.0;
    double bridge_max = 0.0;
};

template <typename Drift, typename Vol>
StepOutcome bridge_step(double x, double M, double a, double K, double dt,
                        PathRng& rng, Drift&& drift, Vol&& vol) {
    double sig = vol(x);
    double x1 = x + drift(x) * dt + sig * std::sqrt(dt) * rng.normal();
    double d = x1 - x;
    double mx = 0.5 * (x + x1 +
                       std::sqrt(d * d - 2.0 * sig * sig * dt *
                                             std::log1p(-rng.uniform())));
    double mn = 0.5 * (x + x1 -
                       std::sqrt(d * d - 2.0 * sig * sig * dt *
                                             std::log1p(-rng.uniform())));
    StepOutcome out;
    out.x_end = x1;
    out.bridge_max = mx;
    double down_excess = (M - a) - mn; // how far the bridge dipped below M - a
    double cap_excess = mx - K;
    if (down_excess > 0.0 && cap_excess > 0.0) {
        // Both barriers inside one step: rare; order by excess.
        if (down_excess >= cap_excess) out.crossed_down = true;
        else out.crossed_cap = true;
    } else if (down_excess > 0.0) {
        out.crossed_down = true;
    } else if (cap_excess > 0.0) {
        out.crossed_cap = true;
    }
    return out;
}

// Continuous crossings carry no overshoot: the drawdown at the stop is a.
template <typename Drift, typename Vol>
EpisodeOutcome euler_episode(double x0, double a, double K, double dt,
                             PathRng& rng, Drift&& drift, Vol&& vol) {
    double x = x0, M = x0, tau = 0.0;
    for (;;) {
        StepOutcome st = bridge_step(x, M, a, K, dt, rng, drift, vol);
        tau += dt;
        if (st.crossed_down) return {StopReason::drawdown_crossed, tau, M, a};
        if (st.crossed_cap) return {StopReason::max_exceeded_K, tau, st.bridge_max, 0.0};
        M = std::max(M, st.bridge_max);
        x = st.x_end;
    }
}

} // namespace

EpisodeOutcome simulate_bm_episode(const BrownianLevySpec& spec, double x0,
                                   double a, double K, double dt, PathRng& rng) {
    return euler_episode(
        x0, a, K, dt, rng, [&](double) { return spec.drift; },
        [&](double) { return spec.volatility; });
}

EpisodeOutcome simulate_diffusion_episode(const DiffusionSpec& spec, double x0,
                                          double a, double K, double dt,
                                          PathRng& rng) {
    return euler_episode(
        x0, a, K, dt, rng, [&](double x) { return spec.mu(x); },
        [&](double x) { return spec.sigma(x); });
}

EpisodeOutcome simulate_refracted_episode(const RefractedSpec& spec, double x0,
                                          double a, double K, double dt,
                                          PathRng& rng) {
    const auto* bm = std::get_if<BrownianLevySpec>(&spec.base);
    if (!bm)
        throw unsupported_error("refracted simulation supports a Brownian base only");
    return euler_episode(
        x0, a, K, dt, rng,
        [&](double x) { return bm->drift - (x > spec.threshold ? spec.refraction : 0.0); },
        [&](double) { return bm->volatility; });
}

EpisodeOutcome simulate_jd_episode(const GenPempSpec& spec, double x0, double a,
                                   double K, double dt, PathRng& rng) {
    double x = x0, M = x0, tau = 0.0;
    auto drift = [&](double y) { return spec.drift_slope * y; };
    auto vol = [&](double) { return spec.volatility; };
    for (;;) {
        double T = rng.exponential(spec.jump_rate);
        double done = 0.0;
        while (done < T) {
            double step = std::min(dt, T - done); // partial steps keep jump times exact
            StepOutcome st = bridge_step(x, M, a, K, step, rng, drift, vol);
            done += step;
            tau += step;
            if (st.crossed_down) return {StopReason::drawdown_crossed, tau, M, a};
            if (st.crossed_cap)
                return {StopReason::max_exceeded_K, tau, st.bridge_max, 0.0};
            M = std::max(M, st.bridge_max);
            x = st.x_end;
        }
        x += rng.exponential(spec.up_jump_rate);
        if (x > M) {
            M = x;
            if (M > K) return {StopReason::max_exceeded_K, tau, M, 0.0};
        }
    }
}

namespace {

struct ChunkSums {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;
};

double truncation_cap(const DrawdownQuery& query) {
    // The transform weight e^{-delta M} makes paths beyond this maximum
    // negligible; for delta = 0 the maximum tail is exponential in a.
    double span = 60.0 * query.a;
    if (query.delta > 0.0) span = std::max(span, 45.0 / query.delta);
    return query.x0 + span;
}

} // namespace

MCEstimate estimate(const ModelSpec& model, const DrawdownQuery& query,
                    const MCConfig& mc, const Functional& functional) {
    require_valid(model, query);
    if (mc.n_paths < 100) throw validation_error("n_paths >= 100 required");
    if (mc.chunk_size < 1) throw validation_error("chunk_size >= 1 required");
    if (!(mc.dt > 0.0) || mc.dt > query.a / 50.0)
        throw validation_error("dt must satisfy 0 < dt <= a/50");

    const bool laplace = functional.kind == Functional::Kind::laplace;
    const double cap = laplace ? truncation_cap(query) : query.K;

    auto run_episode = [&](PathRng& rng) {
        return std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, PempSpec>)
                    return simulate_pemp_episode(m, query.x0, query.a, cap, rng);
                else if constexpr (std::is_same_v<T, CramerLundbergSpec>)
                    return simulate_cl_episode(m, query.x0, query.a, cap, rng);
                else if constexpr (std::is_same_v<T, GenPempSpec>)
                    return simulate_jd_episode(m, query.x0, query.a, cap, mc.dt, rng);
                else if constexpr (std::is_same_v<T, BrownianLevySpec>)
                    return simulate_bm_episode(m, query.x0, query.a, cap, mc.dt, rng);
                else if constexpr (std::is_same_v<T, DiffusionSpec>)
                    return simulate_diffusion_episode(m, query.x0, query.a, cap,
                                                      mc.dt, rng);
                else
                    return simulate_refracted_episode(m, query.x0, query.a, cap,
                                                      mc.dt, rng);
            },
            model);
    };

    auto payoff = [&](const EpisodeOutcome& ep) {
        if (ep.stop_reason != StopReason::drawdown_crossed) return 0.0;
        double w = std::exp(-query.q * ep.tau - query.s * (ep.Y_at_stop - query.a));
        if (laplace) w *= std::exp(-query.delta * ep.M_at_stop);
        return w;
    };

    const long n_chunks = (mc.n_paths + mc.chunk_size - 1) / mc.chunk_size;
    std::vector<ChunkSums> partial(static_cast<size_t>(n_chunks));
    std::atomic<long> next_chunk{0};

    auto work = [&]() {
        for (;;) {
            long ci = next_chunk.fetch_add(1);
            if (ci >= n_chunks) return;
            long lo = ci * mc.chunk_size;
            long hi = std::min<long>(lo + mc.chunk_size, mc.n_paths);
            ChunkSums sums;
            for (long p = lo; p < hi; ++p) {
                PathRng rng(mc.seed, static_cast<uint32_t>(ci),
                            static_cast<uint32_t>(p - lo));
                double v = payoff(run_episode(rng));
                sums.sum += v;
                sums.sumsq += v * v;
                ++sums.n;
            }
            partial[static_cast<size_t>(ci)] = sums;
        }
    };

    int n_workers = worker_count(n_chunks);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // Combine in chunk order: identical totals for any worker count.
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    for (const auto& c : partial) {
        sum += c.sum;
        sumsq += c.sumsq;
        n += c.n;
    }
    double mean = sum / static_cast<double>(n);
    double var = (sumsq - static_cast<double>(n) * mean * mean) /
                 static_cast<double>(n - 1);
    var = std::max(var, 0.0);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, mc.seed};
}

namespace {

struct LevelHit {
    bool resolved = false;
    double time = 0.0;
    double value = 0.0; // X at the hit (or drawdown size for the crossing)
};

} // namespace

PathIneqReport check_path_inequalities(const PempSpec& spec, double x, double eps,
                                       double a, long n, uint64_t seed, double q,
                                       double s, bool flip_directions) {
    if (!(eps > 0.0 && eps < a))
        throw domain_error("eps must lie in (0, a)");
    if (!(x >= a)) throw domain_error("pemp paths require x >= a");

    PathIneqReport report;
    report.paths = n;
    const double tol = 1e-12;
    const double up_level = x + eps;
    const double lowA = x - a;        // lower level of the wide interval
    const double lowB = x + eps - a;  // lower level of the shifted interval

    for (long p = 0; p < n; ++p) {
        PathRng rng(seed, 0, static_cast<uint32_t>(p));
        double xc = x, M = x, t = 0.0;
        LevelHit t_plus, t_lowA, t_lowB, t_dd;

        long guard = 0;
        while (!t_plus.resolved &&
               !(t_dd.resolved && t_lowA.resolved && t_lowB.resolved)) {
            if (++guard > 2000000)
                throw convergence_error("path inequality episode did not resolve");
            double T = rng.exponential(spec.lambda);
            if (xc > 0.0 && up_level > xc) {
                double t_up = std::log(up_level / xc) / spec.mu;
                if (T >= t_up) {
                    t_plus = {true, t + t_up, up_level};
                    break;
                }
            } else if (xc >= up_level) {
                // Already at/above the level: immediate by upward flow.
                t_plus = {true, t, xc};
                break;
            }
            t += T;
            xc *= std::exp(spec.mu * T);
            M = std::max(M, xc);
            double j = sample_jump(spec, rng);
            xc += j;
            if (j > 0.0 && xc > up_level && !t_plus.resolved) {
                t_plus = {true, t, xc};
                break;
            }
            M = std::max(M, xc);
            if (!t_lowA.resolved && xc < lowA) t_lowA = {true, t, xc};
            if (!t_lowB.resolved && xc < lowB) t_lowB = {true, t, xc};
            if (!t_dd.resolved && M - xc > a) t_dd = {true, t, M - xc};
        }

        auto before_plus = [&](const LevelHit& h) {
            return h.resolved && (!t_plus.resolved || h.time < t_plus.time);
        };

        // Indicator sandwich for reaching the level first.
        int i_narrow = (t_plus.resolved && !before_plus(t_lowB)) ? 1 : 0;
        int i_mid = (t_plus.resolved && !before_plus(t_dd)) ? 1 : 0;
        int i_wide = (t_plus.resolved && !before_plus(t_lowA)) ? 1 : 0;
        if (flip_directions) {
            std::swap(i_narrow, i_wide);
        }
        if (i_narrow > i_mid || i_mid > i_wide) ++report.up_violations;

        double lhs = 0.0;
        if (before_plus(t_dd))
            lhs = std::exp(-q * t_dd.time - s * (t_dd.value - a));
        double rhs1 = 0.0;
        if (before_plus(t_lowA))
            rhs1 = std::exp(-q * t_lowA.time - s * (lowA - t_lowA.value) - s * eps);
        double rhs2 = 0.0;
        if (before_plus(t_lowB))
            rhs2 = std::exp(-q * t_lowB.time - s * (lowA - t_lowB.value));
        if (flip_directions) std::swap(rhs1, rhs2);
        if (lhs < rhs1 - tol) ++report.down1_violations;
        if (lhs > rhs2 + tol) ++report.down2_violations;
    }
    return report;
}

} // namespace ddlab
