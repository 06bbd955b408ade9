#include "fracstep/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracstep {

namespace {

void check_common(double horizon, std::size_t intervals) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::domain_error("mesh horizon must be positive and finite, got " +
                                std::to_string(horizon));
    }
    if (intervals == 0) {
        throw std::domain_error("mesh needs at least one interval");
    }
}

void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("fractional order must lie in (0, 1], got " +
                                std::to_string(alpha));
    }
}

}  // namespace

std::string_view to_string(MeshKind kind) {
    switch (kind) {
        case MeshKind::PowerLaw: return "power-law";
        case MeshKind::Uniform: return "uniform";
        case MeshKind::LegacyNonUniform: return "legacy";
    }
    return "unknown";
}

MeshKind parse_mesh_kind(std::string_view name) {
    if (name == "power-law" || name == "powerlaw" || name == "sfdm") return MeshKind::PowerLaw;
    if (name == "uniform") return MeshKind::Uniform;
    if (name == "legacy" || name == "nonuniform" || name == "legacy-nonuniform") {
        return MeshKind::LegacyNonUniform;
    }
    throw std::invalid_argument("unknown mesh strategy '" + std::string(name) + "'");
}

TimeMesh TimeMesh::power_law(double horizon, std::size_t intervals, double alpha) {
    check_common(horizon, intervals);
    check_order(alpha);
    if (alpha == 1.0) {
        TimeMesh mesh = uniform(horizon, intervals);
        mesh.kind_ = MeshKind::PowerLaw;
        return mesh;
    }
    const double n = static_cast<double>(intervals);
    const double inv_alpha = 1.0 / alpha;
    std::vector<double> nodes(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        nodes[k] = horizon * std::pow(static_cast<double>(k) / n, inv_alpha);
    }
    nodes.back() = horizon;
    return TimeMesh(MeshKind::PowerLaw, horizon, alpha, std::move(nodes));
}

TimeMesh TimeMesh::uniform(double horizon, std::size_t intervals) {
    check_common(horizon, intervals);
    const double n = static_cast<double>(intervals);
    std::vector<double> nodes(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        nodes[k] = horizon * (static_cast<double>(k) / n);
    }
    nodes.back() = horizon;
    return TimeMesh(MeshKind::Uniform, horizon, 1.0, std::move(nodes));
}

TimeMesh TimeMesh::legacy_nonuniform(double horizon, std::size_t intervals) {
    check_common(horizon, intervals);
    // t_n = mu * sum_{i=1}^{n} (N + 1 - i) = mu * n (2N + 1 - n) / 2
    const double n_total = static_cast<double>(intervals);
    const double mu = 2.0 * horizon / (n_total * (n_total + 1.0));
    std::vector<double> nodes(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double kk = static_cast<double>(k);
        nodes[k] = mu * (kk * (2.0 * n_total + 1.0 - kk) / 2.0);
    }
    nodes.back() = horizon;
    return TimeMesh(MeshKind::LegacyNonUniform, horizon, 1.0, std::move(nodes));
}

TimeMesh TimeMesh::make(MeshKind kind, double horizon, std::size_t intervals, double alpha) {
    switch (kind) {
        case MeshKind::PowerLaw: return power_law(horizon, intervals, alpha);
        case MeshKind::Uniform: return uniform(horizon, intervals);
        case MeshKind::LegacyNonUniform: return legacy_nonuniform(horizon, intervals);
    }
    throw std::invalid_argument("unknown mesh kind");
}

double TimeMesh::step(std::size_t k) const {
    if (k == 0 || k >= nodes_.size()) {
        throw std::out_of_range("step index must be in [1, N]");
    }
    return nodes_[k] - nodes_[k - 1];
}

std::vector<double> TimeMesh::steps() const {
    std::vector<double> out(intervals());
    for (std::size_t k = 1; k < nodes_.size(); ++k) out[k - 1] = nodes_[k] - nodes_[k - 1];
    return out;
}

double TimeMesh::power_law_step() const noexcept {
    return std::pow(horizon_, alpha_) / static_cast<double>(intervals());
}

double b_coeff(std::size_t k, std::size_t j, double alpha) {
    check_order(alpha);
    if (k == j) return 0.0;
    const double inv_alpha = 1.0 / alpha;
    return std::pow(static_cast<double>(k), inv_alpha) - std::pow(static_cast<double>(j), inv_alpha);
}

}  // namespace fracstep
