#include "fracstep/mittag_leffler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracstep {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Beyond this |z|^(1/alpha) the Taylor sum on the negative axis cancels away
// every significant digit of a long double.
constexpr long double kTaylorGiveUp = 60.0L;
// Predicted crossover of the Taylor and asymptotic error estimates, in units of
// |z|^(1/alpha): eps_ld * e^y ~ e^-y.
constexpr double kSwitchExponent = 22.0;

void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "Mittag-Leffler order must lie in (0, 1], got " << alpha;
        throw std::domain_error(os.str());
    }
}

bool near_integer(long double s) {
    return std::fabs(s - std::nearbyint(s)) < 1e-12L;
}

// Bisecting 61-point Gauss-Kronrod with an absolute error target. Boost reports a
// panel's error on the reference interval, so each panel's share is rescaled here.
template <class F>
double adaptive_gk(const F& f, double a, double b, double abs_tol, int depth, double& err) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    double local = 0.0;
    const double value = Quad::integrate(f, a, b, 0, 0.0, &local);
    local *= 0.5 * (b - a);
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    if (local <= std::max(abs_tol, floor) || depth == 0) {
        err += local;
        return value;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, 0.5 * abs_tol, depth - 1, err) +
           adaptive_gk(f, mid, b, 0.5 * abs_tol, depth - 1, err);
}

}  // namespace

Estimate ml_taylor(double alpha, double z) {
    check_order(alpha);
    if (z == 0.0) return {1.0, 0.0};
    const long double a = alpha;
    const long double az = std::fabs(static_cast<long double>(z));
    const long double log_az = std::log(az);
    const long double y = std::pow(az, 1.0L / a);
    if (z < 0.0 && y > kTaylorGiveUp) {
        return {std::numeric_limits<double>::quiet_NaN(), kInf};
    }

    long double sum = 0.0L;
    long double abs_sum = 0.0L;
    long double last = 0.0L;
    for (int k = 0; k < 100000; ++k) {
        const long double s = a * k + 1.0L;
        const long double mag = std::exp(k * log_az - std::lgamma(s));
        sum += (z < 0.0 && (k & 1)) ? -mag : mag;
        abs_sum += mag;
        last = mag;
        const bool past_peak = a * k > y + 1.0L;
        if (past_peak && mag <= 1e-22L * std::max(1.0L, std::fabs(sum))) break;
    }
    const double err = static_cast<double>(8.0L * LDBL_EPSILON * abs_sum + last) +
                       std::numeric_limits<double>::epsilon() * std::fabs(static_cast<double>(sum));
    return {static_cast<double>(sum), err};
}

Estimate ml_asymptotic(double alpha, double z) {
    check_order(alpha);
    if (!(z < 0.0)) throw std::domain_error("asymptotic expansion needs z < 0");
    if (alpha == 1.0) return {std::exp(z), 0.0};

    // E_a(-x) ~ -sum_k (-x)^-k / Gamma(1 - a k),  1/Gamma(1 - s) = Gamma(s) sin(pi s) / pi
    const long double a = alpha;
    const long double x = -static_cast<long double>(z);
    const long double log_x = std::log(x);
    long double sum = 0.0L;
    long double abs_sum = 0.0L;
    long double prev_env = std::numeric_limits<long double>::infinity();
    long double omitted = std::numeric_limits<long double>::infinity();
    for (int k = 1; k < 5000; ++k) {
        const long double s = a * k;
        const long double env = std::exp(std::lgamma(s) - k * log_x) / kPi;
        if (env > prev_env) {
            omitted = env;
            break;
        }
        prev_env = env;
        if (!near_integer(s)) {
            const long double sign = (k & 1) ? 1.0L : -1.0L;
            const long double term = sign * env * std::sin(kPi * s);
            sum += term;
            abs_sum += std::fabs(term);
        }
        if (env <= 1e-22L * std::max(1.0L, std::fabs(sum))) {
            omitted = env;
            break;
        }
    }
    const double err = static_cast<double>(omitted + 8.0L * LDBL_EPSILON * abs_sum) +
                       std::numeric_limits<double>::epsilon() * std::fabs(static_cast<double>(sum));
    return {static_cast<double>(sum), err};
}

Estimate ml_integral(double alpha, double z) {
    check_order(alpha);
    if (z > 0.0) throw std::domain_error("integral representation needs z <= 0");
    if (z == 0.0) return {1.0, 0.0};
    if (alpha == 1.0) return {std::exp(z), 0.0};

    const double x = -z;
    const double inv_a = 1.0 / alpha;
    const double theta = std::numbers::pi * alpha;
    const double c = std::cos(theta);
    auto integrand = [=](double v) {
        return std::exp(-std::pow(v * x, inv_a)) / (v * v + 2.0 * v * c + 1.0);
    };
    // exp(-745) underflows, so the integrand vanishes beyond v_max.
    const double v_max = std::pow(745.0, alpha) / x;
    double err = 0.0;
    double total = 0.0;
    if (v_max <= 1.0) {
        total = adaptive_gk(integrand, 0.0, v_max, 1e-15, 30, err);
    } else {
        double err_hi = 0.0;
        total = adaptive_gk(integrand, 0.0, 1.0, 1e-15, 30, err) +
                adaptive_gk(integrand, 1.0, v_max, 1e-15, 30, err_hi);
        err += err_hi;
    }
    const double pref = std::sin(theta) / theta;
    const double value = pref * total;
    err = pref * err + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    return {value, err};
}

double ml_switch_point(double alpha) {
    check_order(alpha);
    return std::pow(kSwitchExponent, alpha);
}

double ml(double alpha, double z, double tol) {
    check_order(alpha);
    if (!std::isfinite(z)) throw std::domain_error("Mittag-Leffler argument must be finite");
    if (alpha == 1.0) return std::exp(z);
    if (z == 0.0) return 1.0;

    if (z > 0.0) {
        const Estimate e = ml_taylor(alpha, z);
        if (!std::isfinite(e.value)) {
            std::ostringstream os;
            os << "E_" << alpha << "(" << z << ") overflows double precision";
            throw AccuracyError(os.str());
        }
        if (e.error <= tol * std::max(1.0, std::abs(e.value))) return e.value;
        std::ostringstream os;
        os << "E_" << alpha << "(" << z << "): series error estimate " << e.error
           << " exceeds tolerance " << tol;
        throw AccuracyError(os.str());
    }

    double best = kInf;
    const bool near = -z < ml_switch_point(alpha);
    for (int route = 0; route < 3; ++route) {
        Estimate e{};
        if (route == 2) {
            e = ml_integral(alpha, z);
        } else if ((route == 0) == near) {
            e = ml_taylor(alpha, z);
        } else {
            e = ml_asymptotic(alpha, z);
        }
        if (e.error <= tol) return e.value;
        best = std::min(best, e.error);
    }
    std::ostringstream os;
    os << "E_" << alpha << "(" << z << "): best error estimate " << best
       << " exceeds tolerance " << tol;
    throw AccuracyError(os.str());
}

double exact_relaxation(double A, double B, double gamma, double t) {
    if (!(t >= 0.0)) throw std::domain_error("exact_relaxation needs t >= 0");
    if (!(B >= 0.0)) throw std::domain_error("exact_relaxation needs B >= 0");
    check_order(gamma);
    return A * ml(gamma, -B * std::pow(t, gamma));
}

double exact_diffusion(double x, double t, double L, double alpha) {
    if (!(L > 0.0)) throw std::domain_error("domain length must be positive");
    if (!(t >= 0.0)) throw std::domain_error("exact_diffusion needs t >= 0");
    if (x < 0.0 || x > L) throw std::domain_error("exact_diffusion needs 0 <= x <= L");
    return std::sin(std::numbers::pi * x / L) * ml(alpha, -std::pow(t, alpha));
}

std::vector<double> exact_diffusion_profile(std::span<const double> x, double t, double L,
                                            double alpha) {
    if (!(L > 0.0)) throw std::domain_error("domain length must be positive");
    if (!(t >= 0.0)) throw std::domain_error("exact_diffusion needs t >= 0");
    const double decay = ml(alpha, -std::pow(t, alpha));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || x[i] > L) throw std::domain_error("grid point outside [0, L]");
        out[i] = std::sin(std::numbers::pi * x[i] / L) * decay;
    }
    return out;
}

}  // namespace fracstep
