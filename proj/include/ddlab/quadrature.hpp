#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <utility>

namespace ddlab {

// Adaptive Gauss-Kronrod on a finite interval; reversed limits flip the sign.
template <typename F>
double integrate(F&& f, double lo, double hi, double rel_tol = 1e-9,
                 double* err_out = nullptr) {
    if (lo == hi) {
        if (err_out) *err_out = 0.0;
        return 0.0;
    }
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, 12, rel_tol, &err);
    if (err_out) *err_out = err;
    return sign * val;
}

} // namespace ddlab
