#include "ddlab/config.hpp"

#include "ddlab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ddlab {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw validation_error("invalid numeric value for '" + key + "': " + value);
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw validation_error("invalid integer value for '" + key + "': " + value);
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw validation_error("invalid boolean value for '" + key + "': " + value);
}

std::vector<JumpComponent> parse_jump_mix(const std::string& text) {
    std::vector<JumpComponent> mix;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::stringstream fs(item);
        std::string w, r, dir;
        if (!std::getline(fs, w, ':') || !std::getline(fs, r, ':') ||
            !std::getline(fs, dir))
            throw validation_error("jump_mix entries must be weight:rate:up|down");
        JumpComponent c;
        c.weight = to_double("jump_mix weight", trim(w));
        c.rate = to_double("jump_mix rate", trim(r));
        dir = trim(dir);
        if (dir == "up")
            c.up = true;
        else if (dir == "down")
            c.up = false;
        else
            throw validation_error("jump_mix direction must be up or down");
        mix.push_back(c);
    }
    if (mix.empty()) throw validation_error("jump_mix is empty");
    return mix;
}

} // namespace

void apply_config_entry(RunConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value) {
    auto unknown = [&]() -> void {
        throw validation_error("unknown config key [" + section + "] " + key);
    };
    if (section == "model") {
        if (key == "family") cfg.family = value;
        else if (key == "drift") cfg.drift = to_double(key, value);
        else if (key == "vol") cfg.vol = to_double(key, value);
        else if (key == "premium") cfg.premium = to_double(key, value);
        else if (key == "claim_rate") cfg.claim_rate = to_double(key, value);
        else if (key == "claim_mean") cfg.claim_mean = to_double(key, value);
        else if (key == "mu") cfg.mu = to_double(key, value);
        else if (key == "lambda") cfg.lambda = to_double(key, value);
        else if (key == "jump_mix") cfg.jump_mix = value;
        else if (key == "diffusion_family") cfg.diffusion_family = value;
        else if (key == "drift_coef") cfg.drift_coef = to_double(key, value);
        else if (key == "vol_coef") cfg.vol_coef = to_double(key, value);
        else if (key == "base") cfg.base = value;
        else if (key == "refraction") cfg.refraction = to_double(key, value);
        else if (key == "threshold") cfg.threshold = to_double(key, value);
        else unknown();
    } else if (section == "query") {
        if (key == "q") cfg.query.q = to_double(key, value);
        else if (key == "s") cfg.query.s = to_double(key, value);
        else if (key == "delta") cfg.query.delta = to_double(key, value);
        else if (key == "a") cfg.query.a = to_double(key, value);
        else if (key == "K") cfg.query.K = to_double(key, value);
        else if (key == "x0") cfg.query.x0 = to_double(key, value);
        else if (key == "x_from") cfg.x_from = to_double(key, value);
        else if (key == "x_to") cfg.x_to = to_double(key, value);
        else if (key == "x_step") cfg.x_step = to_double(key, value);
        else unknown();
    } else if (section == "solver") {
        if (key == "grid_step") cfg.solver.grid_step = to_double(key, value);
        else if (key == "picard_tol") cfg.solver.picard_tol = to_double(key, value);
        else if (key == "picard_max_iter")
            cfg.solver.picard_max_iter = static_cast<int>(to_long(key, value));
        else if (key == "method") cfg.solver.method = parse_method(value);
        else if (key == "x_min") cfg.solver.x_min = to_double(key, value);
        else unknown();
    } else if (section == "mc") {
        if (key == "paths") cfg.mc.n_paths = to_long(key, value);
        else if (key == "seed") cfg.mc.seed = static_cast<uint64_t>(to_long(key, value));
        else if (key == "dt") cfg.mc.dt = to_double(key, value);
        else if (key == "chunk_size")
            cfg.mc.chunk_size = static_cast<int>(to_long(key, value));
        else unknown();
    } else if (section == "output") {
        if (key == "path") cfg.out_path = value;
        else if (key == "gnuplot") cfg.gnuplot = to_bool(key, value);
        else if (key == "z_max") cfg.z_max = to_double(key, value);
        else if (key == "abs_slack") cfg.abs_slack = to_double(key, value);
        else unknown();
    } else {
        throw validation_error("unknown config section [" + section + "]");
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw validation_error("malformed section header at line " +
                                       std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("expected key = value at line " +
                                   std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw validation_error("key outside any [section] at line " +
                                   std::to_string(lineno));
        apply_config_entry(cfg, section, key, value);
    }
}

ModelSpec build_model(const RunConfig& cfg) {
    if (cfg.family == "bm") return BrownianLevySpec{cfg.drift, cfg.vol};
    if (cfg.family == "cl")
        return CramerLundbergSpec{cfg.premium, cfg.claim_rate, cfg.claim_mean};
    if (cfg.family == "pemp") {
        PempSpec s = PempSpec::example_4_1();
        s.mu = cfg.mu;
        s.lambda = cfg.lambda;
        if (!cfg.jump_mix.empty()) s.jump_mix = parse_jump_mix(cfg.jump_mix);
        return s;
    }
    if (cfg.family == "jd") return GenPempSpec::example_4_2();
    if (cfg.family == "diffusion") {
        DiffusionSpec s;
        if (cfg.diffusion_family == "constant") s.family = DiffusionFamily::constant;
        else if (cfg.diffusion_family == "ou") s.family = DiffusionFamily::ou;
        else if (cfg.diffusion_family == "gbm") s.family = DiffusionFamily::gbm;
        else
            throw validation_error("diffusion_family must be constant | ou | gbm");
        s.drift_coef = cfg.drift_coef;
        s.vol_coef = cfg.vol_coef;
        return s;
    }
    if (cfg.family == "refracted") {
        RefractedSpec s;
        if (cfg.base == "bm")
            s.base = BrownianLevySpec{cfg.drift, cfg.vol};
        else if (cfg.base == "cl")
            s.base = CramerLundbergSpec{cfg.premium, cfg.claim_rate, cfg.claim_mean};
        else
            throw validation_error("refracted base must be bm or cl");
        s.refraction = cfg.refraction;
        s.threshold = cfg.threshold;
        return s;
    }
    throw validation_error("unknown model family '" + cfg.family +
                           "' (expected bm | cl | pemp | jd | diffusion | refracted)");
}

std::vector<double> sweep_points(const RunConfig& cfg) {
    if (!cfg.x_from && !cfg.x_to && !cfg.x_step) return {cfg.query.x0};
    if (!(cfg.x_from && cfg.x_to && cfg.x_step))
        throw validation_error("x_from, x_to, x_step must be given together");
    double from = *cfg.x_from, to = *cfg.x_to, step = *cfg.x_step;
    if (!(step > 0.0) || !(to >= from))
        throw validation_error("sweep requires x_to >= x_from and x_step > 0");
    long n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    std::vector<double> xs(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i)
        xs[static_cast<size_t>(i)] = from + step * static_cast<double>(i);
    return xs;
}

} // namespace ddlab
