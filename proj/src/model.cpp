#include "ddlab/model.hpp"

#include "ddlab/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ddlab {

PempSpec PempSpec::example_4_1() {
    PempSpec s;
    s.mu = 1.0;
    s.lambda = 3.0;
    s.jump_mix = {{1.0 / 3.0, 1.0, true},
                  {1.0 / 3.0, 1.0, false},
                  {1.0 / 3.0, 2.0, false}};
    return s;
}

double PempSpec::jump_density(double w) const {
    double p = 0.0;
    for (const auto& c : jump_mix) {
        if (c.up && w > 0.0)
            p += c.weight * c.rate * std::exp(-c.rate * w);
        else if (!c.up && w < 0.0)
            p += c.weight * c.rate * std::exp(c.rate * w);
    }
    return p;
}

bool GenPempSpec::is_reference_instance() const {
    auto near = [](double x, double y) { return std::abs(x - y) < 1e-12; };
    return near(drift_slope, 1.0) && near(volatility, std::sqrt(2.0)) &&
           near(jump_rate, 1.0) && near(up_jump_rate, 1.0);
}

double DiffusionSpec::mu(double x) const {
    switch (family) {
    case DiffusionFamily::constant: return drift_coef;
    case DiffusionFamily::ou: return -drift_coef * x;
    case DiffusionFamily::gbm: return drift_coef * x;
    }
    return 0.0;
}

double DiffusionSpec::sigma(double x) const {
    switch (family) {
    case DiffusionFamily::constant: return vol_coef;
    case DiffusionFamily::ou: return vol_coef;
    case DiffusionFamily::gbm: return vol_coef * x;
    }
    return 0.0;
}

double DiffusionSpec::domain_lo() const {
    return family == DiffusionFamily::gbm ? 0.0
                                          : -std::numeric_limits<double>::infinity();
}

const char* model_tag(const ModelSpec& spec) {
    struct Tagger {
        const char* operator()(const BrownianLevySpec&) const { return "bm"; }
        const char* operator()(const CramerLundbergSpec&) const { return "cl"; }
        const char* operator()(const PempSpec&) const { return "pemp"; }
        const char* operator()(const GenPempSpec&) const { return "jd"; }
        const char* operator()(const DiffusionSpec&) const { return "diffusion"; }
        const char* operator()(const RefractedSpec&) const { return "refracted"; }
    };
    return std::visit(Tagger{}, spec);
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

namespace {

void check_spec(const BrownianLevySpec& s, std::vector<std::string>& out) {
    if (!(s.volatility > 0.0)) out.push_back("volatility > 0");
}

void check_spec(const CramerLundbergSpec& s, std::vector<std::string>& out) {
    if (!(s.premium > 0.0)) out.push_back("premium > 0");
    if (!(s.claim_rate > 0.0)) out.push_back("claim_rate > 0");
    if (!(s.claim_mean > 0.0)) out.push_back("claim_mean > 0");
}

void check_spec(const PempSpec& s, std::vector<std::string>& out) {
    if (!(s.mu > 0.0)) out.push_back("mu > 0");
    if (!(s.lambda > 0.0)) out.push_back("lambda > 0");
    if (s.jump_mix.empty()) out.push_back("jump_mix nonempty");
    double wsum = 0.0;
    for (const auto& c : s.jump_mix) {
        wsum += c.weight;
        if (!(c.weight >= 0.0)) out.push_back("mixture weights >= 0");
        if (!(c.rate > 0.0)) out.push_back("mixture rates > 0");
    }
    if (!s.jump_mix.empty() && std::abs(wsum - 1.0) > 1e-12)
        out.push_back("mixture weights sum to 1");
}

void check_spec(const GenPempSpec& s, std::vector<std::string>& out) {
    if (!(s.volatility > 0.0)) out.push_back("volatility > 0");
    if (!(s.jump_rate > 0.0)) out.push_back("jump_rate > 0");
    if (!(s.up_jump_rate > 0.0)) out.push_back("up_jump_rate > 0");
    if (!s.is_reference_instance())
        out.push_back("jd coefficients fixed to drift_slope=1, volatility=sqrt(2), "
                      "jump_rate=1, up_jump_rate=1");
}

void check_spec(const DiffusionSpec& s, std::vector<std::string>& out) {
    if (!(s.vol_coef > 0.0)) out.push_back("vol_coef > 0");
}

void check_spec(const RefractedSpec& s, std::vector<std::string>& out) {
    if (!(s.refraction >= 0.0)) out.push_back("refraction >= 0");
    std::visit([&](const auto& base) { check_spec(base, out); }, s.base);
    if (const auto* cl = std::get_if<CramerLundbergSpec>(&s.base))
        if (!(cl->premium - s.refraction > 0.0))
            out.push_back("premium - refraction > 0");
}

} // namespace

ValidationReport validate(const ModelSpec& spec, const DrawdownQuery& query) {
    ValidationReport rep;
    std::visit([&](const auto& s) { check_spec(s, rep.violations); }, spec);

    if (!(query.a > 0.0)) rep.violations.push_back("a > 0");
    if (!(query.q >= 0.0)) rep.violations.push_back("q >= 0");
    if (!(query.s >= 0.0)) rep.violations.push_back("s >= 0");
    if (!(query.delta >= 0.0)) rep.violations.push_back("delta >= 0");
    if (!(query.x0 <= query.K)) rep.violations.push_back("x0 <= K");

    if (std::holds_alternative<PempSpec>(spec)) {
        if (!(query.x0 >= query.a)) rep.violations.push_back("x0 >= a");
    }
    if (const auto* d = std::get_if<DiffusionSpec>(&spec)) {
        if (query.x0 - query.a <= d->domain_lo())
            rep.violations.push_back("x0 - a inside state space");
    }
    return rep;
}

void require_valid(const ModelSpec& spec, const DrawdownQuery& query) {
    ValidationReport rep = validate(spec, query);
    if (!rep.ok()) throw validation_error(rep.to_string());
}

} // namespace ddlab
