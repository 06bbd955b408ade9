#include "fracstep/diffuse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fracstep/caputo.hpp"

namespace fracstep {

std::string_view to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::Sine: return "sine";
        case InitialKind::PointSource: return "point";
        case InitialKind::Custom: return "custom";
    }
    return "unknown";
}

std::string_view to_string(Boundary bc) {
    switch (bc) {
        case Boundary::Dirichlet0: return "dirichlet";
        case Boundary::NeumannZeroFlux: return "neumann";
    }
    return "unknown";
}

InitialKind parse_initial_kind(std::string_view name) {
    if (name == "sine") return InitialKind::Sine;
    if (name == "point" || name == "point-source") return InitialKind::PointSource;
    if (name == "custom") return InitialKind::Custom;
    throw std::invalid_argument("unknown initial condition '" + std::string(name) + "'");
}

Boundary parse_boundary(std::string_view name) {
    if (name == "dirichlet") return Boundary::Dirichlet0;
    if (name == "neumann" || name == "zero-flux") return Boundary::NeumannZeroFlux;
    throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

void DiffuseProblem::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!(D >= 0.0) || !std::isfinite(D)) throw std::domain_error("D must be finite and >= 0");
    if (!(L > 0.0) || !std::isfinite(L)) throw std::domain_error("L must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error("T must be positive");
    if (M < 2) throw std::domain_error("need at least 2 space intervals");
    if (ic == InitialKind::PointSource && M % 2 != 0) {
        throw std::domain_error("point source needs an even number of space intervals");
    }
    if (ic == InitialKind::Custom && custom_ic.size() != M + 1) {
        throw std::invalid_argument("custom initial profile needs M + 1 = " +
                                    std::to_string(M + 1) + " values");
    }
}

std::vector<double> DiffuseProblem::grid() const {
    std::vector<double> x(M + 1);
    for (std::size_t i = 0; i <= M; ++i) x[i] = L * (static_cast<double>(i) / static_cast<double>(M));
    x.back() = L;
    return x;
}

std::vector<double> DiffuseProblem::initial_profile() const {
    switch (ic) {
        case InitialKind::Sine: {
            std::vector<double> u(M + 1);
            for (std::size_t i = 1; i < M; ++i) {
                u[i] = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(M));
            }
            return u;
        }
        case InitialKind::PointSource: {
            std::vector<double> u(M + 1, 0.0);
            u[M / 2] = kPointSourceHeight;
            return u;
        }
        case InitialKind::Custom: return custom_ic;
    }
    throw std::invalid_argument("unknown initial condition");
}

double exact_diffusion_coefficient(double L) {
    return L * L / (std::numbers::pi * std::numbers::pi);
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || scratch.size() < n) {
        throw std::invalid_argument("tridiagonal operand sizes disagree");
    }
    double pivot = diag[0];
    if (pivot == 0.0) throw std::runtime_error("singular tridiagonal system");
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) throw std::runtime_error("singular tridiagonal system");
        scratch[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

DiffuseSolution solve_diffuse_implicit(const DiffuseProblem& p, const TimeMesh& mesh) {
    p.validate();
    if (std::abs(mesh.horizon() - p.T) > 1e-12 * p.T) {
        throw std::invalid_argument("mesh horizon " + std::to_string(mesh.horizon()) +
                                    " does not match problem horizon " + std::to_string(p.T));
    }
    const auto t = mesh.nodes();
    const std::size_t n_total = mesh.intervals();
    const std::size_t width = p.M + 1;
    const double dx = p.dx();
    const double r = p.D / (dx * dx);
    const double inv_g = 1.0 / std::tgamma(1.0 - p.alpha);
    const bool dirichlet = p.bc == Boundary::Dirichlet0;

    DiffuseSolution sol{mesh, p.grid(), std::vector<double>((n_total + 1) * width)};
    const std::vector<double> u0 = p.initial_profile();
    std::copy(u0.begin(), u0.end(), sol.field.begin());

    const L1Kernel kernel(mesh, p.alpha);
    std::vector<double> chi(n_total);
    std::vector<double> lower(width, -r), diag(width), upper(width, -r), rhs(width), scratch(width);
    if (dirichlet) {
        upper[0] = 0.0;
        lower[width - 1] = 0.0;
    } else {
        upper[0] = -2.0 * r;
        lower[width - 1] = -2.0 * r;
    }

    for (std::size_t n = 0; n < n_total; ++n) {
        kernel.weights(n, chi);
        // history_i = chi_0 u_i^0 + sum_{k=1}^{n} (chi_k - chi_{k-1}) u_i^k
        for (std::size_t i = 0; i < width; ++i) rhs[i] = chi[0] * sol.field[i];
        for (std::size_t k = 1; k <= n; ++k) {
            const double c = chi[k] - chi[k - 1];
            const double* uk = sol.field.data() + k * width;
            for (std::size_t i = 0; i < width; ++i) rhs[i] += c * uk[i];
        }
        for (std::size_t i = 0; i < width; ++i) rhs[i] *= inv_g;
        if (p.source) {
            for (std::size_t i = 0; i < width; ++i) rhs[i] += p.source(sol.x[i], t[n + 1]);
        }
        const double d = inv_g * chi[n];
        std::fill(diag.begin(), diag.end(), d + 2.0 * r);
        if (dirichlet) {
            diag[0] = diag[width - 1] = 1.0;
            rhs[0] = rhs[width - 1] = 0.0;
        }
        solve_tridiagonal(lower, diag, upper, rhs, scratch);
        std::copy(rhs.begin(), rhs.end(), sol.field.begin() + static_cast<std::ptrdiff_t>((n + 1) * width));
    }
    return sol;
}

DiffuseSolution solve_diffuse(const DiffuseProblem& p, MeshKind kind, std::size_t intervals) {
    p.validate();
    const TimeMesh mesh = TimeMesh::make(kind, p.T, intervals, p.alpha);
    return solve_diffuse_implicit(p, mesh);
}

double mass(std::span<const double> row, double dx, [[maybe_unused]] Boundary bc) {
    if (row.size() < 2) throw std::invalid_argument("profile needs at least two points");
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < row.size(); ++i) interior += row[i];
    return dx * (0.5 * (row.front() + row.back()) + interior);
}

double gradient_seminorm_sq(std::span<const double> row, double dx) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
        const double g = row[i + 1] - row[i];
        sum += g * g;
    }
    return sum / dx;
}

}  // namespace fracstep
