#include "fracstep/caputo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracstep {

namespace {

void check_fractional(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("L1 weights need 0 < alpha < 1, got " + std::to_string(alpha) +
                                " (alpha = 1 is the classical first difference)");
    }
}

}  // namespace

double pow_increment(double b, double d, double beta) {
    if (b == 0.0) return std::pow(d, beta);
    return std::pow(b, beta) * std::expm1(beta * std::log1p(d / b));
}

L1Kernel::L1Kernel(const TimeMesh& mesh, double alpha, WeightForm form)
    : mesh_(&mesh), alpha_(alpha), form_(form) {
    check_fractional(alpha);
    if (form_ == WeightForm::Auto) {
        form_ = mesh.kind() == MeshKind::PowerLaw ? WeightForm::ScaleDependent : WeightForm::Direct;
    }
    if (form_ == WeightForm::ScaleDependent) {
        if (mesh.kind() != MeshKind::PowerLaw) {
            throw std::invalid_argument("scale-dependent weights need a power-law mesh");
        }
        const std::size_t n_total = mesh.intervals();
        const double inv_a = 1.0 / mesh.alpha();
        index_pow_.resize(n_total + 1);
        index_gap_.resize(n_total);
        for (std::size_t k = 0; k <= n_total; ++k) {
            index_pow_[k] = std::pow(static_cast<double>(k), inv_a);
        }
        // b_{k+1,k} = k^(1/a) ((1 + 1/k)^(1/a) - 1), free of cancellation
        for (std::size_t k = 0; k < n_total; ++k) {
            index_gap_[k] = pow_increment(static_cast<double>(k), 1.0, inv_a);
        }
        // t_j - t_k = dt_a^(1/a) b_{j,k}
        gap_scale_ = std::pow(mesh.power_law_step(), inv_a);
    }
}

void L1Kernel::weights(std::size_t n, std::span<double> out) const {
    if (n >= mesh_->intervals()) throw std::out_of_range("weight step must satisfy n < N");
    if (out.size() < n + 1) throw std::invalid_argument("weight buffer too small");
    if (form_ == WeightForm::ScaleDependent) {
        weights_scaled(n, out);
    } else {
        weights_direct(n, out);
    }
}

void L1Kernel::weights_direct(std::size_t n, std::span<double> out) const {
    const auto t = mesh_->nodes();
    const double beta = 1.0 - alpha_;
    const double target = t[n + 1];
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = t[k + 1] - t[k];
        const double near = target - t[k + 1];
        out[k] = pow_increment(near, tau, beta) / (beta * tau);
    }
}

void L1Kernel::weights_scaled(std::size_t n, std::span<double> out) const {
    const double beta = 1.0 - alpha_;
    const double top = index_pow_[n + 1];
    // chi_k^n = h^(beta/a) [b_{n+1,k}^beta - b_{n+1,k+1}^beta] / (beta h^(1/a) b_{k+1,k})
    const double scale = std::pow(gap_scale_, beta) / (beta * gap_scale_);
    for (std::size_t k = 0; k <= n; ++k) {
        const double near = top - index_pow_[k + 1];
        const double gap = index_gap_[k];
        out[k] = scale * pow_increment(near, gap, beta) / gap;
    }
}

CaputoWeights l1_weights(const TimeMesh& mesh, double alpha, std::size_t n, WeightForm form) {
    const L1Kernel kernel(mesh, alpha, form);
    std::vector<double> chi(n + 1);
    kernel.weights(n, chi);
    return CaputoWeights(mesh, alpha, n, std::move(chi));
}

double caputo_apply(std::span<const double> u_hist, const CaputoWeights& w) {
    const std::size_t n = w.step();
    if (u_hist.size() != n + 2) {
        throw std::invalid_argument("history length " + std::to_string(u_hist.size()) +
                                    " does not match step " + std::to_string(n) + " (need n + 2)");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) sum += (u_hist[k + 1] - u_hist[k]) * w[k];
    return sum / std::tgamma(1.0 - w.alpha());
}

double truncation_bound(const TimeMesh& mesh, double alpha, std::size_t n, double f2max) {
    check_fractional(alpha);
    if (!(f2max >= 0.0)) throw std::domain_error("f2max must be nonnegative");
    const double tau = mesh.step(n);
    return (1.0 / (2.0 * (1.0 - alpha)) + 0.125) * std::pow(tau, 2.0 - alpha) * f2max;
}

}  // namespace fracstep
