#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fracstep/mesh.hpp"

namespace fracstep {

using TimeSource = std::function<double(double)>;

/// D^gamma u + B u = f(t), u(0) = A on [0, T].
struct RelaxProblem {
    double gamma = 0.5;
    double A = 1.0;
    double B = 1.0;
    double T = 1.0;
    TimeSource source;  ///< empty means f = 0

    void validate() const;
    double f(double t) const { return source ? source(t) : 0.0; }
};

enum class RelaxScheme {
    SfdmImplicit,           ///< L1 implicit on the power-law mesh
    UniformImplicit,        ///< L1 implicit on the uniform mesh
    LegacyImplicit,         ///< L1 implicit on the decreasing-step mesh
    SfdmExplicitVolterra,   ///< left-rectangle Volterra on the power-law mesh
    ClockExplicitVolterra,  ///< left-rectangle Volterra on the uniform mesh
};

std::string_view to_string(RelaxScheme scheme);
RelaxScheme parse_relax_scheme(std::string_view name);
/// Mesh family a scheme runs on.
MeshKind mesh_kind_for(RelaxScheme scheme);

struct RelaxSolution {
    TimeMesh mesh;
    std::vector<double> u;  ///< aligned with mesh.nodes()
    RelaxScheme scheme;
};

/// Implicit L1 scheme on any mesh. Each step solves
///   (chi_n^n / G + B) u_{n+1} = f(t_{n+1}) + (1/G) [sum_{k=1}^{n} (chi_k^n - chi_{k-1}^n) u_k + chi_0^n u_0]
/// with G = Gamma(1 - gamma). gamma = 1 falls back to backward Euler.
RelaxSolution solve_relax_implicit(const RelaxProblem& p, const TimeMesh& mesh);

struct VolterraOptions {
    /// Precompute the lower-triangular quadrature weight table once instead of
    /// regenerating each row. Costs N(N+1)/2 doubles.
    bool precompute_matrix = false;
};

/// Explicit product-rectangle scheme for the equivalent Volterra equation
///   u(t) = A + 1/Gamma(gamma) int_0^t (t - s)^(gamma - 1) (f(s) - B u(s)) ds,
/// with the integrand frozen at the left end of each interval. Power-law or uniform
/// meshes only.
RelaxSolution solve_relax_explicit_volterra(const RelaxProblem& p, const TimeMesh& mesh,
                                            VolterraOptions options = {});

/// Builds the scheme's mesh (graded with p.gamma) and dispatches.
RelaxSolution solve_relax(const RelaxProblem& p, RelaxScheme scheme, std::size_t intervals,
                          VolterraOptions options = {});

/// Row k of the quadrature table: w_{j,k+1} = ((t_{k+1}-t_j)^g - (t_{k+1}-t_{j+1})^g) / g
/// for j = 0..k.
void volterra_weights(const TimeMesh& mesh, double gamma, std::size_t k, std::span<double> out);

/// Packed lower-triangular table of volterra_weights rows 0..N-1.
class VolterraMatrix {
public:
    VolterraMatrix(const TimeMesh& mesh, double gamma);
    std::span<const double> row(std::size_t k) const;
    std::size_t rows() const noexcept { return rows_; }

private:
    std::size_t rows_;
    std::vector<double> packed_;
};

}  // namespace fracstep
