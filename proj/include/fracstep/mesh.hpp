#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracstep {

/// Family that generated a time mesh.
enum class MeshKind {
    PowerLaw,          ///< uniform in t^alpha, dense near t = 0
    Uniform,           ///< uniform in clock time
    LegacyNonUniform,  ///< linearly decreasing steps (N + 1 - n) * mu
};

std::string_view to_string(MeshKind kind);
MeshKind parse_mesh_kind(std::string_view name);

/// Immutable ordered time nodes 0 = t_0 < t_1 < ... < t_N = T.
///
/// Nodes come from closed forms rather than accumulated steps, so the final
/// node equals the horizon and a mesh with N intervals is an even-index
/// subset of the one with 2N intervals.
class TimeMesh {
public:
    /// t_k = T (k/N)^(1/alpha): equal steps T^alpha / N on the power-law axis.
    static TimeMesh power_law(double horizon, std::size_t intervals, double alpha);
    /// t_k = k T / N.
    static TimeMesh uniform(double horizon, std::size_t intervals);
    /// tau_n = (N + 1 - n) mu with mu = 2T / (N (N + 1)).
    static TimeMesh legacy_nonuniform(double horizon, std::size_t intervals);

    /// Builds the mesh of the given family; alpha is ignored unless kind is PowerLaw.
    static TimeMesh make(MeshKind kind, double horizon, std::size_t intervals, double alpha = 1.0);

    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t k) const { return nodes_.at(k); }
    /// tau_k = t_k - t_{k-1} for 1 <= k <= N.
    double step(std::size_t k) const;
    std::vector<double> steps() const;

    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    double horizon() const noexcept { return horizon_; }
    MeshKind kind() const noexcept { return kind_; }
    /// Order the mesh was graded for; 1 for the clock-time families.
    double alpha() const noexcept { return alpha_; }
    /// Step on the power-law axis, T^alpha / N (T / N for clock-time families).
    double power_law_step() const noexcept;

private:
    TimeMesh(MeshKind kind, double horizon, double alpha, std::vector<double> nodes)
        : kind_(kind), horizon_(horizon), alpha_(alpha), nodes_(std::move(nodes)) {}

    MeshKind kind_;
    double horizon_;
    double alpha_;
    std::vector<double> nodes_;
};

/// b_{k,j} = k^(1/alpha) - j^(1/alpha).
double b_coeff(std::size_t k, std::size_t j, double alpha);

}  // namespace fracstep
