#include "fracstep/relax.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "fracstep/caputo.hpp"

namespace fracstep {

namespace {

void check_horizon(const RelaxProblem& p, const TimeMesh& mesh) {
    if (std::abs(mesh.horizon() - p.T) > 1e-12 * p.T) {
        throw std::invalid_argument("mesh horizon " + std::to_string(mesh.horizon()) +
                                    " does not match problem horizon " + std::to_string(p.T));
    }
}

RelaxScheme implicit_label(MeshKind kind) {
    switch (kind) {
        case MeshKind::PowerLaw: return RelaxScheme::SfdmImplicit;
        case MeshKind::Uniform: return RelaxScheme::UniformImplicit;
        case MeshKind::LegacyNonUniform: return RelaxScheme::LegacyImplicit;
    }
    return RelaxScheme::UniformImplicit;
}

RelaxSolution backward_euler(const RelaxProblem& p, const TimeMesh& mesh) {
    const auto t = mesh.nodes();
    std::vector<double> u(t.size());
    u[0] = p.A;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        const double tau = t[n + 1] - t[n];
        u[n + 1] = (u[n] / tau + p.f(t[n + 1])) / (1.0 / tau + p.B);
    }
    return {mesh, std::move(u), implicit_label(mesh.kind())};
}

}  // namespace

void RelaxProblem::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::domain_error("gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
    if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error("T must be positive");
    if (!std::isfinite(A) || !std::isfinite(B)) throw std::domain_error("A and B must be finite");
}

std::string_view to_string(RelaxScheme scheme) {
    switch (scheme) {
        case RelaxScheme::SfdmImplicit: return "sfdm-implicit";
        case RelaxScheme::UniformImplicit: return "uniform-implicit";
        case RelaxScheme::LegacyImplicit: return "legacy-implicit";
        case RelaxScheme::SfdmExplicitVolterra: return "sfdm-volterra";
        case RelaxScheme::ClockExplicitVolterra: return "clock-volterra";
    }
    return "unknown";
}

RelaxScheme parse_relax_scheme(std::string_view name) {
    for (auto s : {RelaxScheme::SfdmImplicit, RelaxScheme::UniformImplicit,
                   RelaxScheme::LegacyImplicit, RelaxScheme::SfdmExplicitVolterra,
                   RelaxScheme::ClockExplicitVolterra}) {
        if (name == to_string(s)) return s;
    }
    throw std::invalid_argument("unknown relaxation scheme '" + std::string(name) + "'");
}

MeshKind mesh_kind_for(RelaxScheme scheme) {
    switch (scheme) {
        case RelaxScheme::SfdmImplicit:
        case RelaxScheme::SfdmExplicitVolterra: return MeshKind::PowerLaw;
        case RelaxScheme::UniformImplicit:
        case RelaxScheme::ClockExplicitVolterra: return MeshKind::Uniform;
        case RelaxScheme::LegacyImplicit: return MeshKind::LegacyNonUniform;
    }
    throw std::invalid_argument("unknown relaxation scheme");
}

RelaxSolution solve_relax_implicit(const RelaxProblem& p, const TimeMesh& mesh) {
    p.validate();
    check_horizon(p, mesh);
    if (p.gamma == 1.0) return backward_euler(p, mesh);

    const auto t = mesh.nodes();
    const std::size_t n_total = mesh.intervals();
    const double inv_g = 1.0 / std::tgamma(1.0 - p.gamma);
    const L1Kernel kernel(mesh, p.gamma);
    std::vector<double> chi(n_total);
    std::vector<double> u(n_total + 1);
    u[0] = p.A;
    for (std::size_t n = 0; n < n_total; ++n) {
        kernel.weights(n, chi);
        double history = chi[0] * u[0];
        for (std::size_t k = 1; k <= n; ++k) history += (chi[k] - chi[k - 1]) * u[k];
        u[n + 1] = (p.f(t[n + 1]) + inv_g * history) / (inv_g * chi[n] + p.B);
    }
    return {mesh, std::move(u), implicit_label(mesh.kind())};
}

void volterra_weights(const TimeMesh& mesh, double gamma, std::size_t k, std::span<double> out) {
    const auto t = mesh.nodes();
    if (k >= mesh.intervals()) throw std::out_of_range("Volterra row must satisfy k < N");
    if (out.size() < k + 1) throw std::invalid_argument("Volterra weight buffer too small");
    const double target = t[k + 1];
    for (std::size_t j = 0; j <= k; ++j) {
        out[j] = pow_increment(target - t[j + 1], t[j + 1] - t[j], gamma) / gamma;
    }
}

VolterraMatrix::VolterraMatrix(const TimeMesh& mesh, double gamma)
    : rows_(mesh.intervals()), packed_(rows_ * (rows_ + 1) / 2) {
    for (std::size_t k = 0; k < rows_; ++k) {
        volterra_weights(mesh, gamma, k, std::span<double>(packed_).subspan(k * (k + 1) / 2, k + 1));
    }
}

std::span<const double> VolterraMatrix::row(std::size_t k) const {
    if (k >= rows_) throw std::out_of_range("Volterra row out of range");
    return std::span<const double>(packed_).subspan(k * (k + 1) / 2, k + 1);
}

RelaxSolution solve_relax_explicit_volterra(const RelaxProblem& p, const TimeMesh& mesh,
                                            VolterraOptions options) {
    p.validate();
    check_horizon(p, mesh);
    RelaxScheme scheme{};
    switch (mesh.kind()) {
        case MeshKind::PowerLaw: scheme = RelaxScheme::SfdmExplicitVolterra; break;
        case MeshKind::Uniform: scheme = RelaxScheme::ClockExplicitVolterra; break;
        case MeshKind::LegacyNonUniform:
            throw std::invalid_argument("explicit Volterra scheme runs on power-law or uniform meshes");
    }

    const auto t = mesh.nodes();
    const std::size_t n_total = mesh.intervals();
    const double inv_g = 1.0 / std::tgamma(p.gamma);
    std::optional<VolterraMatrix> table;
    if (options.precompute_matrix) table.emplace(mesh, p.gamma);
    std::vector<double> w(n_total);
    // load_j = f(t_j) - B u_j, filled as u_j becomes known
    std::vector<double> load(n_total + 1);
    std::vector<double> u(n_total + 1);
    u[0] = p.A;
    for (std::size_t k = 0; k < n_total; ++k) {
        load[k] = p.f(t[k]) - p.B * u[k];
        std::span<const double> row;
        if (table) {
            row = table->row(k);
        } else {
            volterra_weights(mesh, p.gamma, k, w);
            row = std::span<const double>(w).first(k + 1);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) acc += row[j] * load[j];
        u[k + 1] = u[0] + inv_g * acc;
    }
    return {mesh, std::move(u), scheme};
}

RelaxSolution solve_relax(const RelaxProblem& p, RelaxScheme scheme, std::size_t intervals,
                          VolterraOptions options) {
    p.validate();
    const TimeMesh mesh = TimeMesh::make(mesh_kind_for(scheme), p.T, intervals, p.gamma);
    switch (scheme) {
        case RelaxScheme::SfdmExplicitVolterra:
        case RelaxScheme::ClockExplicitVolterra:
            return solve_relax_explicit_volterra(p, mesh, options);
        default: return solve_relax_implicit(p, mesh);
    }
}

}  // namespace fracstep
