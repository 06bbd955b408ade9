#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/diffuse.hpp"
#include "fracstep/mesh.hpp"

namespace fracstep {

/// max_i |u_i - exact_i| / |exact_i| over entries with |exact_i| >= 1e-12.
double mre(std::span<const double> numeric, std::span<const double> exact);

/// max_i |coarse_i - reference_i|.
double mae1(std::span<const double> coarse_final, std::span<const double> reference_final);

/// log2(err_half / err_full).
double convergence_rate(double err_half, double err_full);

/// One benchmark configuration and its outcome.
struct ErrorReport {
    std::string scheme;  ///< e.g. "sfdm-implicit"
    MeshKind mesh = MeshKind::PowerLaw;
    double alpha = 0.0;
    double T = 0.0;
    std::size_t N = 0;  ///< time intervals ("nodes" in the tables)
    std::size_t M = 0;  ///< space intervals, 0 for the scalar relaxation problem
    std::optional<double> mre;
    std::optional<double> mae1;
    std::optional<double> rate;  ///< vs the half-resolution sibling, when present
    double wall_time = 0.0;      ///< seconds, median over repeats
};

/// Fills `rate` for each report whose sibling with the same scheme, alpha, T and M
/// has exactly half as many intervals. Uses MRE when present, else MAE1.
void attach_rates(std::vector<ErrorReport>& reports);

/// Reference cache location: $FRACSTEP_CACHE, or ./cache.
std::filesystem::path default_cache_dir();

/// Fine-grid diffusion solutions stored as raw little-endian doubles plus a JSON
/// manifest, keyed by a hash of the full problem description.
class ReferenceCache {
public:
    explicit ReferenceCache(std::filesystem::path dir = default_cache_dir());

    /// Returns the cached solution or solves, stores and returns it. Corrupt or
    /// mismatching entries are recomputed. Problems with a source term are rejected.
    DiffuseSolution get(const DiffuseProblem& p, MeshKind kind, std::size_t reference_nodes);

    /// Whether the most recent get() was served from disk.
    bool last_hit() const noexcept { return last_hit_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Canonical description string and its 64-bit FNV-1a hash.
    static std::string key(const DiffuseProblem& p, MeshKind kind, std::size_t reference_nodes);
    static std::uint64_t hash(std::string_view key);

private:
    std::filesystem::path dir_;
    bool last_hit_ = false;
};

/// reference_solution(p, kind, N_ref) through a cache in `dir`.
DiffuseSolution reference_solution(const DiffuseProblem& p, MeshKind kind,
                                   std::size_t reference_nodes = 5000,
                                   const std::filesystem::path& dir = default_cache_dir());

enum class Table { T1, T2, T3, T4 };
std::string_view to_string(Table t);
Table parse_table(std::string_view name);

/// Narrowing of a table run. Empty lists keep the default configuration.
struct TableOverrides {
    std::vector<double> alphas;              ///< T3, T4
    std::vector<double> horizons;            ///< T3
    std::vector<std::size_t> nodes;          ///< T1, T2, T4 node lists; T3 S-FDM nodes
    std::optional<std::size_t> space_intervals;
    std::size_t reference_nodes = 5000;      ///< T4
    std::filesystem::path cache_dir = default_cache_dir();
    int repeats = 1;                          ///< timing repeats, median reported
};

/// Fixed S-FDM node count for a table3 cell (alpha in {0.4, 0.6, 0.8}).
std::optional<std::size_t> table3_sfdm_nodes(double alpha, double T);

/// Runs the configurations of one table, serially, and returns their reports with
/// rates attached.
std::vector<ErrorReport> run_table(Table which, const TableOverrides& overrides = {});

/// Smallest S-FDM interval count whose sine-mode MRE is <= target, searched by
/// doubling then bisection in [1, max_nodes]. Returns nullopt if max_nodes fails.
std::optional<std::size_t> find_parity_nodes(const DiffuseProblem& p, double target_mre,
                                             std::size_t max_nodes = 20000);

/// Writes reports as CSV rows in the table's layout (no provenance header).
void write_table_csv(std::ostream& os, Table which, std::span<const ErrorReport> reports);

}  // namespace fracstep
