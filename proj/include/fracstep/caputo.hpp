#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracstep/mesh.hpp"

namespace fracstep {

/// How the weight integrals are evaluated.
enum class WeightForm {
    Auto,            ///< ScaleDependent on power-law meshes, Direct otherwise
    Direct,          ///< from node differences t_{n+1} - t_k
    ScaleDependent,  ///< from index powers b_{k,j}; power-law meshes only
};

/// L1 weights chi_k^n, k = 0..n, for the Caputo derivative at t_{n+1}:
///
///   chi_k^n = 1/tau_{k+1} * int_{t_k}^{t_{k+1}} (t_{n+1} - xi)^(-alpha) dxi
///
/// The referenced mesh must outlive the weights.
class CaputoWeights {
public:
    CaputoWeights(const TimeMesh& mesh, double alpha, std::size_t step, std::vector<double> chi)
        : mesh_(&mesh), alpha_(alpha), step_(step), chi_(std::move(chi)) {}

    std::size_t step() const noexcept { return step_; }
    double alpha() const noexcept { return alpha_; }
    const TimeMesh& mesh() const noexcept { return *mesh_; }
    std::span<const double> values() const noexcept { return chi_; }
    double operator[](std::size_t k) const { return chi_[k]; }
    std::size_t size() const noexcept { return chi_.size(); }

private:
    const TimeMesh* mesh_;
    double alpha_;
    std::size_t step_;
    std::vector<double> chi_;
};

/// Reusable weight generator for one (mesh, alpha) pair. Fills chi_k^n for any
/// step without allocating. The mesh must outlive the kernel.
class L1Kernel {
public:
    L1Kernel(const TimeMesh& mesh, double alpha, WeightForm form = WeightForm::Auto);

    /// Writes chi_0^n .. chi_n^n into out[0..n].
    void weights(std::size_t n, std::span<double> out) const;

    double alpha() const noexcept { return alpha_; }
    const TimeMesh& mesh() const noexcept { return *mesh_; }
    WeightForm form() const noexcept { return form_; }

private:
    void weights_direct(std::size_t n, std::span<double> out) const;
    void weights_scaled(std::size_t n, std::span<double> out) const;

    const TimeMesh* mesh_;
    double alpha_;
    WeightForm form_;
    // ScaleDependent form: k^(1/alpha_mesh), consecutive gaps b_{k+1,k}, and scale factors.
    std::vector<double> index_pow_;
    std::vector<double> index_gap_;
    double gap_scale_ = 1.0;
};

CaputoWeights l1_weights(const TimeMesh& mesh, double alpha, std::size_t n,
                         WeightForm form = WeightForm::Auto);

/// (1/Gamma(1-alpha)) * sum_{k=0}^{n} (u_{k+1} - u_k) chi_k^n; u_hist holds u(t_0..t_{n+1}).
double caputo_apply(std::span<const double> u_hist, const CaputoWeights& w);

/// Upper bound (1/(2(1-alpha)) + 1/8) tau_n^(2-alpha) max|f''| on the L1 truncation
/// error of the Caputo integral at t_n, 1 <= n <= N.
double truncation_bound(const TimeMesh& mesh, double alpha, std::size_t n, double f2max);

/// (b + d)^beta - b^beta without cancellation, for b >= 0, d > 0.
double pow_increment(double b, double d, double beta);

}  // namespace fracstep
