// ddlab: drawdown first-passage laws for Markov models.
// Subcommands: rates, solve, mc, compare, levy.

#include "ddlab/config.hpp"
#include "ddlab/drawdown.hpp"
#include "ddlab/errors.hpp"
#include "ddlab/mc.hpp"
#include "ddlab/snlp_rates.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace ddlab;

// Binds CLI flags to [section] key entries so flags override config files.
class FlagBinder {
  public:
    FlagBinder(CLI::App* cmd, RunConfig& cfg) : cmd_(cmd), cfg_(cfg) {}

    void add(const std::string& flag, const char* section, const char* key,
             const std::string& help) {
        auto store = std::make_shared<std::string>();
        CLI::Option* opt = cmd_->add_option(flag, *store, help);
        bound_.push_back({opt, section, key, store});
    }

    void add_flag(const std::string& flag, const char* section, const char* key,
                  const std::string& help) {
        auto store = std::make_shared<bool>(false);
        CLI::Option* opt = cmd_->add_flag(flag, *store, help);
        flags_.push_back({opt, section, key, store});
    }

    void apply() const {
        for (const auto& b : bound_)
            if (b.opt->count()) apply_config_entry(cfg_, b.section, b.key, *b.store);
        for (const auto& f : flags_)
            if (f.opt->count())
                apply_config_entry(cfg_, f.section, f.key, *f.store ? "true" : "false");
    }

  private:
    struct Bound {
        CLI::Option* opt;
        const char* section;
        const char* key;
        std::shared_ptr<std::string> store;
    };
    struct Flag {
        CLI::Option* opt;
        const char* section;
        const char* key;
        std::shared_ptr<bool> store;
    };
    CLI::App* cmd_;
    RunConfig& cfg_;
    std::vector<Bound> bound_;
    std::vector<Flag> flags_;
};

struct CommandContext {
    RunConfig cfg;
    std::shared_ptr<FlagBinder> binder;
    std::shared_ptr<std::string> config_path = std::make_shared<std::string>();
};

std::shared_ptr<CommandContext> attach_common(CLI::App* cmd) {
    auto ctx = std::make_shared<CommandContext>();
    cmd->add_option("--config", *ctx->config_path, "config file (key = value sections)");
    ctx->binder = std::make_shared<FlagBinder>(cmd, ctx->cfg);
    auto& b = *ctx->binder;
    b.add("--model", "model", "family", "model family: bm|cl|pemp|jd|diffusion|refracted");
    b.add("--drift", "model", "drift", "bm drift");
    b.add("--vol", "model", "vol", "bm volatility");
    b.add("--premium", "model", "premium", "cl premium rate");
    b.add("--claim-rate", "model", "claim_rate", "cl claim arrival rate");
    b.add("--claim-mean", "model", "claim_mean", "cl mean claim size");
    b.add("--mu", "model", "mu", "pemp drift coefficient");
    b.add("--lambda", "model", "lambda", "pemp jump intensity");
    b.add("--jump-mix", "model", "jump_mix", "pemp mixture weight:rate:up|down,...");
    b.add("--diffusion-family", "model", "diffusion_family", "constant|ou|gbm");
    b.add("--drift-coef", "model", "drift_coef", "diffusion drift coefficient");
    b.add("--vol-coef", "model", "vol_coef", "diffusion volatility coefficient");
    b.add("--base", "model", "base", "refracted base family: bm|cl");
    b.add("--refraction", "model", "refraction", "refraction drift reduction");
    b.add("--threshold", "model", "threshold", "refraction threshold");
    b.add("--q", "query", "q", "discount rate");
    b.add("--s", "query", "s", "overshoot transform argument");
    b.add("--delta", "query", "delta", "maximum transform argument");
    b.add("--a", "query", "a", "drawdown threshold");
    b.add("--K", "query", "K", "running-maximum cap");
    b.add("--x0", "query", "x0", "start point");
    b.add("--x-from", "query", "x_from", "sweep start");
    b.add("--x-to", "query", "x_to", "sweep end");
    b.add("--x-step", "query", "x_step", "sweep step");
    b.add("--method", "solver", "method", "backward_rk4|picard|both");
    b.add("--tol", "solver", "picard_tol", "Picard sup-norm tolerance");
    b.add("--max-iter", "solver", "picard_max_iter", "Picard iteration cap");
    b.add("--grid-step", "solver", "grid_step", "solver grid step (default a/200)");
    b.add("--x-min", "solver", "x_min", "lower end of the solve interval");
    b.add("--paths", "mc", "paths", "Monte Carlo path count");
    b.add("--seed", "mc", "seed", "RNG seed");
    b.add("--dt", "mc", "dt", "Euler step");
    b.add("--chunk-size", "mc", "chunk_size", "paths per work chunk");
    b.add("--out", "output", "path", "output CSV path");
    b.add("--z-max", "output", "z_max", "compare gate on |z|");
    b.add("--abs-slack", "output", "abs_slack",
          "extra absolute tolerance for Euler comparisons");
    b.add_flag("--gnuplot", "output", "gnuplot", "emit a companion gnuplot script");
    return ctx;
}

RunConfig finalize(CommandContext& ctx) {
    if (!ctx.config_path->empty()) load_config_file(ctx.cfg, *ctx.config_path);
    ctx.binder->apply();
    return ctx.cfg;
}

std::ofstream open_out(const RunConfig& cfg) {
    if (cfg.out_path.empty()) throw validation_error("--out is required");
    std::ofstream out(cfg.out_path);
    if (!out) throw validation_error("cannot open output file: " + cfg.out_path);
    out << std::setprecision(12);
    return out;
}

void write_gnuplot(const RunConfig& cfg, const std::string& ylabel, int ycol) {
    if (!cfg.gnuplot) return;
    std::ofstream gp(cfg.out_path + ".gp");
    gp << "set datafile separator ','\n"
       << "set xlabel 'x'\n"
       << "set ylabel '" << ylabel << "'\n"
       << "set key off\n"
       << "plot '" << cfg.out_path << "' using 1:" << ycol << " with lines\n";
}

bool euler_model(const std::string& family) {
    return family == "bm" || family == "jd" || family == "diffusion" ||
           family == "refracted";
}

// Query used for validation and rate construction when the command sweeps x.
DrawdownQuery sweep_query(const RunConfig& cfg, const std::vector<double>& xs) {
    DrawdownQuery q = cfg.query;
    q.x0 = xs.front();
    q.K = std::max(q.K, xs.back());
    return q;
}

int cmd_rates(const RunConfig& cfg) {
    ModelSpec model = build_model(cfg);
    std::vector<double> xs = sweep_points(cfg);
    DrawdownQuery query = sweep_query(cfg, xs);
    require_valid(model, query);
    RateField rates = make_rate_field(model, query);

    auto violations = check_rate_inequality(rates, xs, query.s);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "rate inequality violated at x = " << violations.front().x
           << " (margin " << violations.front().margin << ", "
           << violations.size() << " points)";
        throw instability_error(os.str());
    }

    std::ofstream out = open_out(cfg);
    out << "x,b1,b2_amp,c\n";
    for (double x : xs) {
        double amp = rates.b2_density.empty() ? 0.0 : rates.b2_amp(x);
        out << x << ',' << rates.b1(x) << ',' << amp << ',' << rates.c(x, query.s)
            << '\n';
    }
    write_gnuplot(cfg, "b1", 2);
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    ModelSpec model = build_model(cfg);
    DrawdownQuery query = cfg.query;
    if (query.x0 == 0.0 && query.K > 0.0 &&
        std::holds_alternative<PempSpec>(model))
        query.x0 = query.K; // curve solves need no start point
    require_valid(model, query);
    RateField rates = make_rate_field(model, query);

    std::ofstream out = open_out(cfg);
    if (cfg.solver.method == SolveMethod::both) {
        HCurve hb = solve_backward(rates, query, cfg.solver);
        HCurve hp = solve_picard(rates, query, cfg.solver);
        double dmax = 0.0;
        for (size_t i = 0; i < hb.hs.size(); ++i)
            dmax = std::max(dmax, std::abs(hb.hs[i] - hp.hs[i]));
        out << "# model=" << rates.model << " method=both iterations="
            << hp.meta.iterations << " contraction=" << hp.meta.contraction
            << " q=" << query.q << " s=" << query.s << " a=" << query.a
            << " K=" << query.K << " max_method_diff=" << dmax << "\n";
        out << "x,h_backward,h_picard\n";
        for (size_t i = 0; i < hb.xs.size(); ++i)
            out << hb.xs[i] << ',' << hb.hs[i] << ',' << hp.hs[i] << '\n';
        std::cout << "max|h_backward - h_picard| = " << dmax << "\n";
    } else {
        HCurve h = cfg.solver.method == SolveMethod::picard
                       ? solve_picard(rates, query, cfg.solver)
                       : solve_backward(rates, query, cfg.solver);
        out << "# model=" << rates.model << " method=" << h.meta.method
            << " iterations=" << h.meta.iterations
            << " contraction=" << h.meta.contraction << " q=" << query.q
            << " s=" << query.s << " a=" << query.a << " K=" << query.K << "\n";
        out << "x,h\n";
        for (size_t i = 0; i < h.xs.size(); ++i)
            out << h.xs[i] << ',' << h.hs[i] << '\n';
    }
    write_gnuplot(cfg, "h", 2);
    return 0;
}

int cmd_mc(const RunConfig& cfg) {
    ModelSpec model = build_model(cfg);
    std::vector<double> xs = sweep_points(cfg);

    std::ofstream out = open_out(cfg);
    out << "# model=" << model_tag(model) << " seed=" << cfg.mc.seed
        << " paths=" << cfg.mc.n_paths << " dt=" << cfg.mc.dt
        << " q=" << cfg.query.q << " s=" << cfg.query.s << " a=" << cfg.query.a
        << " K=" << cfg.query.K << "\n";
    out << "x,mean,std_err,n\n";
    for (double x : xs) {
        DrawdownQuery query = cfg.query;
        query.x0 = x;
        MCEstimate est = estimate(model, query, cfg.mc, Functional::indicator());
        out << x << ',' << est.mean << ',' << est.std_err << ',' << est.n << '\n';
    }
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    ModelSpec model = build_model(cfg);
    std::vector<double> xs = sweep_points(cfg);
    DrawdownQuery query = sweep_query(cfg, xs);
    require_valid(model, query);
    RateField rates = make_rate_field(model, query);

    SolverConfig scfg = cfg.solver;
    if (!std::isfinite(scfg.x_min)) scfg.x_min = resolve_x_min(rates, query, scfg);
    scfg.x_min = std::min(scfg.x_min, xs.front());
    HCurve h = scfg.method == SolveMethod::picard ? solve_picard(rates, query, scfg)
                                                  : solve_backward(rates, query, scfg);

    double slack = cfg.abs_slack >= 0.0 ? cfg.abs_slack
                                        : (euler_model(cfg.family) ? 0.02 : 0.0);

    std::ofstream out = open_out(cfg);
    out << "# model=" << rates.model << " seed=" << cfg.mc.seed
        << " paths=" << cfg.mc.n_paths << " dt=" << cfg.mc.dt
        << " method=" << h.meta.method << " z_max=" << cfg.z_max
        << " abs_slack=" << slack << "\n";
    out << "x,h_solver,h_mc,std_err,z\n";

    double max_abs_z = 0.0;
    bool pass = true;
    for (double x : xs) {
        DrawdownQuery mq = cfg.query;
        mq.x0 = x;
        mq.K = query.K;
        MCEstimate est = estimate(model, mq, cfg.mc, Functional::indicator());
        double hs = h.value_at(x);
        double z = est.std_err > 0.0 ? (hs - est.mean) / est.std_err : 0.0;
        max_abs_z = std::max(max_abs_z, std::abs(z));
        if (std::abs(hs - est.mean) > cfg.z_max * est.std_err + slack) pass = false;
        out << x << ',' << hs << ',' << est.mean << ',' << est.std_err << ',' << z
            << '\n';
    }
    std::cout << "max|z| = " << max_abs_z << (pass ? " (pass)" : " (FAIL)") << "\n";
    return pass ? 0 : 1;
}

int cmd_levy(CLI::App* cmd, CommandContext& ctx, std::vector<double>& deltas) {
    RunConfig cfg = finalize(ctx);
    (void)cmd;
    if (cfg.family != "bm" && cfg.family != "cl")
        throw validation_error("levy requires --model bm or cl");
    ModelSpec model = build_model(cfg);
    LevySpec levy = cfg.family == "bm"
                        ? LevySpec{std::get<BrownianLevySpec>(model)}
                        : LevySpec{std::get<CramerLundbergSpec>(model)};
    if (deltas.empty()) deltas = {0.0, 0.25, 0.5, 1.0, 2.0};

    std::cout << "q,s,delta,value\n" << std::fixed << std::setprecision(6);
    for (double d : deltas) {
        std::cout << cfg.query.q << ',' << cfg.query.s << ',' << d << ',';
        try {
            LocalRates r = snlp_local_rates(levy, cfg.query.q, cfg.query.s,
                                            cfg.query.a);
            double v = levy_joint_lt(r.b1, 0.0, [](double) { return 1.0; }, r.c, d);
            std::cout << v << "\n";
        } catch (const singular_error& e) {
            std::cout << "singular (" << e.what() << ")\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drawdown first-passage laws: rates, solves, and Monte Carlo"};
    app.require_subcommand(1);

    auto* rates = app.add_subcommand("rates", "dump local drawdown rates to CSV");
    auto* solve = app.add_subcommand("solve", "solve for h(x) on [x_min, K]");
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates of h");
    auto* compare = app.add_subcommand("compare", "solver vs Monte Carlo gate");
    auto* levy = app.add_subcommand("levy", "joint transform table for Levy models");

    auto rates_ctx = attach_common(rates);
    auto solve_ctx = attach_common(solve);
    auto mc_ctx = attach_common(mc);
    auto compare_ctx = attach_common(compare);

    auto levy_ctx = std::make_shared<CommandContext>();
    levy->add_option("--config", *levy_ctx->config_path, "config file");
    levy_ctx->binder = std::make_shared<FlagBinder>(levy, levy_ctx->cfg);
    levy_ctx->binder->add("--model", "model", "family", "bm|cl");
    levy_ctx->binder->add("--drift", "model", "drift", "bm drift");
    levy_ctx->binder->add("--vol", "model", "vol", "bm volatility");
    levy_ctx->binder->add("--premium", "model", "premium", "cl premium rate");
    levy_ctx->binder->add("--claim-rate", "model", "claim_rate", "cl claim rate");
    levy_ctx->binder->add("--claim-mean", "model", "claim_mean", "cl claim mean");
    levy_ctx->binder->add("--q", "query", "q", "discount rate");
    levy_ctx->binder->add("--s", "query", "s", "overshoot transform argument");
    levy_ctx->binder->add("--a", "query", "a", "drawdown threshold");
    auto deltas = std::make_shared<std::vector<double>>();
    levy->add_option("--delta", *deltas, "maximum transform arguments");

    try {
        app.parse(argc, argv);
        if (rates->parsed()) return cmd_rates(finalize(*rates_ctx));
        if (solve->parsed()) return cmd_solve(finalize(*solve_ctx));
        if (mc->parsed()) return cmd_mc(finalize(*mc_ctx));
        if (compare->parsed()) return cmd_compare(finalize(*compare_ctx));
        if (levy->parsed()) return cmd_levy(levy, *levy_ctx, *deltas);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ddlab::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ddlab::unsupported_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
