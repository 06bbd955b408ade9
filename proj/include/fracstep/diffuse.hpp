#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fracstep/mesh.hpp"

namespace fracstep {

enum class InitialKind {
    Sine,         ///< sin(pi x / L)
    PointSource,  ///< 2 at x = L/2, 0 elsewhere (nodal, not a normalized delta)
    Custom,       ///< caller-supplied nodal values
};

enum class Boundary {
    Dirichlet0,       ///< u = 0 at both ends
    NeumannZeroFlux,  ///< du/dx = 0 via mirrored ghost nodes
};

std::string_view to_string(InitialKind kind);
std::string_view to_string(Boundary bc);
InitialKind parse_initial_kind(std::string_view name);
Boundary parse_boundary(std::string_view name);

inline constexpr double kPointSourceHeight = 2.0;

using SpaceTimeSource = std::function<double(double x, double t)>;

/// d^alpha u / dt^alpha = D u_xx + f(x, t) on [0, L] x [0, T].
struct DiffuseProblem {
    double alpha = 0.6;
    double D = 1.0;
    double L = 10.0;
    std::size_t M = 100;  ///< space intervals
    double T = 1.0;
    InitialKind ic = InitialKind::Sine;
    std::vector<double> custom_ic;  ///< M + 1 values when ic == Custom
    Boundary bc = Boundary::Dirichlet0;
    SpaceTimeSource source;  ///< empty means f = 0

    void validate() const;
    double dx() const { return L / static_cast<double>(M); }
    std::vector<double> grid() const;
    std::vector<double> initial_profile() const;
};

/// D = L^2 / pi^2, the coefficient for which the sine mode decays as E_alpha(-t^alpha).
double exact_diffusion_coefficient(double L);

/// Row-major (N + 1) x (M + 1) field.
struct DiffuseSolution {
    TimeMesh mesh;
    std::vector<double> x;
    std::vector<double> field;

    std::size_t time_nodes() const noexcept { return mesh.intervals() + 1; }
    std::size_t space_nodes() const noexcept { return x.size(); }
    std::span<const double> row(std::size_t n) const {
        return std::span<const double>(field).subspan(n * x.size(), x.size());
    }
    std::span<const double> final_row() const { return row(mesh.intervals()); }
};

/// Implicit L1 time stepping with central second differences in space. Each step
/// solves a tridiagonal system
///   (chi_n^n / G) u_i^{n+1} - D (u_{i+1} - 2 u_i + u_{i-1})^{n+1} / dx^2
///     = f_i^{n+1} + (1/G) [sum_{k=1}^{n} (chi_k^n - chi_{k-1}^n) u_i^k + chi_0^n u_i^0],
/// G = Gamma(1 - alpha), with boundary rows per p.bc.
DiffuseSolution solve_diffuse_implicit(const DiffuseProblem& p, const TimeMesh& mesh);

/// Builds the mesh of the given family (graded with p.alpha) and solves.
DiffuseSolution solve_diffuse(const DiffuseProblem& p, MeshKind kind, std::size_t intervals);

/// Trapezoidal integral of a profile over [0, L].
double mass(std::span<const double> row, double dx, Boundary bc);

/// sum_i (u_{i+1} - u_i)^2 / dx, the discrete squared gradient seminorm.
double gradient_seminorm_sq(std::span<const double> row, double dx);

/// Solves a tridiagonal system in place (Thomas algorithm, no pivoting).
/// lower[0] and upper[n-1] are ignored; rhs is overwritten with the solution.
/// Throws std::runtime_error on a vanishing pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch);

}  // namespace fracstep
