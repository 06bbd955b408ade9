#pragma once
// Reference computations that do not go through the library's own formulas.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fracstep/mesh.hpp"

namespace oracle {

/// E_{1/2}(-x) = exp(x^2) erfc(x).
inline double ml_half(double x) { return std::exp(x * x) * std::erfc(x); }

/// Caputo derivative of the piecewise-linear interpolant of `u` at t_{n+1}, by
/// numerical quadrature of each interval's kernel integral.
inline double caputo_piecewise_linear(const fracstep::TimeMesh& mesh, std::span<const double> u,
                                      std::size_t n, double alpha) {
    boost::math::quadrature::tanh_sinh<double> quad;
    const auto t = mesh.nodes();
    const double target = t[n + 1];
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double slope = (u[k + 1] - u[k]) / (t[k + 1] - t[k]);
        // Integrate in s = target - xi so the singularity sits at the left end.
        auto kernel = [alpha](double s) { return std::pow(s, -alpha); };
        sum += slope * quad.integrate(kernel, target - t[k + 1], target - t[k]);
    }
    return sum / std::tgamma(1.0 - alpha);
}

/// D^alpha t^p = Gamma(p + 1) / Gamma(p + 1 - alpha) t^(p - alpha).
inline double caputo_power(double p, double alpha, double t) {
    return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) * std::pow(t, p - alpha);
}

/// Backward Euler for u' = -B u + f(t).
template <class F>
std::vector<double> backward_euler(std::span<const double> t, double A, double B, F f) {
    std::vector<double> u(t.size());
    u[0] = A;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double h = t[k] - t[k - 1];
        u[k] = (u[k - 1] + h * f(t[k])) / (1.0 + h * B);
    }
    return u;
}

/// Least-squares slope of log2(err) against log2(N), negated.
inline double fitted_order(std::span<const double> nodes, std::span<const double> errors) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = std::log2(nodes[i]);
        const double y = std::log2(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace oracle
