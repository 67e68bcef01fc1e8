#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ddlab {

// Normalized finite mixture of exponential densities on (0, inf).
struct ExpMixture {
    struct Component {
        double weight;
        double rate;
    };
    std::vector<Component> components;

    bool empty() const { return components.empty(); }

    // Laplace transform at delta >= 0 (1 at delta = 0 for a normalized mixture).
    double laplace(double delta) const {
        double v = 0.0;
        for (const auto& c : components) v += c.weight * c.rate / (c.rate + delta);
        return v;
    }
};

// A creeping/undershoot rate pair at a single point.
struct LocalRates {
    double b1;
    double c;
};

// Local drawdown rates (b1, b2, c): the coefficient field of the first-passage
// equation. The upward-overshoot measure is amplitude(x) times a normalized
// exponential mixture, plus an optional atom at zero.
struct RateField {
    std::function<double(double)> b1;
    std::function<double(double)> b2_amp;
    ExpMixture b2_density;
    double atom0 = 0.0;
    std::function<double(double, double)> c; // (x, s)

    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
    std::string model = "custom";

    bool spectrally_negative() const { return b2_density.empty() && atom0 == 0.0; }

    // Total mass of the overshoot measure at x.
    double b2_total(double x) const {
        return b2_density.empty() ? atom0 : b2_amp(x) + atom0;
    }
};

} // namespace ddlab
