#pragma once

#include "ddlab/mc.hpp"
#include "ddlab/model.hpp"
#include "ddlab/solver.hpp"

#include <optional>
#include <string>

namespace ddlab {

// One run of any CLI command: model + query + numerics + output, filled from
// a flat `[section] key = value` file and/or command-line flags.
struct RunConfig {
    // [model]
    std::string family; // bm | cl | pemp | jd | diffusion | refracted
    double drift = 0.0;
    double vol = 1.0;
    double premium = 1.0;
    double claim_rate = 1.0;
    double claim_mean = 1.0;
    double mu = 1.0;
    double lambda = 3.0;
    std::string jump_mix; // "weight:rate:up,...", empty selects the built-in mix
    std::string diffusion_family = "ou"; // constant | ou | gbm
    double drift_coef = 1.0;
    double vol_coef = 1.0;
    std::string base = "bm"; // refracted base family
    double refraction = 0.0;
    double threshold = 0.0;

    // [query]
    DrawdownQuery query{0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    std::optional<double> x_from, x_to, x_step;

    // [solver]
    SolverConfig solver;

    // [mc]
    MCConfig mc;

    // [output]
    std::string out_path;
    bool gnuplot = false;
    double z_max = 3.0;
    // Extra absolute tolerance for Euler comparisons; negative selects the
    // default (0.02 for discretized models, 0 for exact simulation).
    double abs_slack = -1.0;
};

// Parses the config file into `cfg`; unknown sections or keys are rejected.
void load_config_file(RunConfig& cfg, const std::string& path);

// Applies one "section.key" assignment (also the CLI override path).
void apply_config_entry(RunConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value);

ModelSpec build_model(const RunConfig& cfg);

// Sweep of x values: from/to/step when given, else the single query.x0.
std::vector<double> sweep_points(const RunConfig& cfg);

} // namespace ddlab
