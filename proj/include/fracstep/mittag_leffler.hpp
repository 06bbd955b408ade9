#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracstep {

/// Thrown when no representation reaches the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

/// A value together with an estimate of its absolute error.
struct Estimate {
    double value;
    double error;
};

inline constexpr double kDefaultMlTol = 1e-12;

/// One-parameter Mittag-Leffler function E_alpha(z) for 0 < alpha <= 1 and real z.
///
/// Picks the Taylor series near the origin and the asymptotic expansion far out on
/// the negative axis. Where neither reaches `tol` (absolute; relative for large
/// positive z) the Laplace-type integral
///   E_alpha(-x) = sin(pi alpha)/(pi alpha) * int_0^inf exp(-(v x)^(1/alpha)) / (v^2 + 2 v cos(pi alpha) + 1) dv
/// is evaluated by adaptive Gauss-Kronrod quadrature. Throws AccuracyError if all
/// three fall short.
double ml(double alpha, double z, double tol = kDefaultMlTol);

/// Individual representations, exposed for cross-checking.
Estimate ml_taylor(double alpha, double z);
Estimate ml_asymptotic(double alpha, double z);  // z < 0 only
Estimate ml_integral(double alpha, double z);    // z <= 0, alpha < 1

/// |z| on the negative axis where the Taylor and asymptotic error estimates cross.
double ml_switch_point(double alpha);

/// A * E_gamma(-B t^gamma): solution of D^gamma u + B u = 0, u(0) = A.
double exact_relaxation(double A, double B, double gamma, double t);

/// sin(pi x / L) * E_alpha(-t^alpha): sine-mode solution of the fractional heat
/// equation with diffusion coefficient L^2 / pi^2 and zero Dirichlet ends.
double exact_diffusion(double x, double t, double L, double alpha);

/// exact_diffusion over a whole space grid, evaluating the time factor once.
std::vector<double> exact_diffusion_profile(std::span<const double> x, double t, double L,
                                            double alpha);

}  // namespace fracstep
