#include "fracstep/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fracstep/csv.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/relax.hpp"

namespace fracstep {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kMaskFloor = 1e-12;

template <class F>
double median_seconds(int repeats, F&& run) {
    std::vector<double> times;
    for (int r = 0; r < std::max(1, repeats); ++r) {
        const auto start = std::chrono::steady_clock::now();
        run();
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// table3 S-FDM node counts, indexed by alpha then T.
const std::map<double, std::map<double, std::size_t>>& table3_nodes() {
    static const std::map<double, std::map<double, std::size_t>> nodes = {
        {0.4, {{1, 6}, {10, 20}, {50, 45}, {100, 60}, {200, 80}, {500, 150}}},
        {0.6, {{1, 8}, {10, 40}, {50, 100}, {100, 200}, {200, 350}, {500, 700}}},
        {0.8, {{1, 10}, {10, 70}, {50, 250}, {100, 400}, {200, 700}, {500, 1500}}},
    };
    return nodes;
}

DiffuseProblem sine_problem(double alpha, double T, std::size_t M) {
    DiffuseProblem p;
    p.alpha = alpha;
    p.L = 10.0;
    p.D = exact_diffusion_coefficient(p.L);
    p.M = M;
    p.T = T;
    p.ic = InitialKind::Sine;
    p.bc = Boundary::Dirichlet0;
    return p;
}

DiffuseProblem point_source_problem(double alpha, std::size_t M) {
    DiffuseProblem p;
    p.alpha = alpha;
    p.L = 10.0;
    p.D = 0.005;
    p.M = M;
    p.T = 10.0;
    p.ic = InitialKind::PointSource;
    p.bc = Boundary::NeumannZeroFlux;
    return p;
}

std::string implicit_scheme_name(MeshKind kind) {
    switch (kind) {
        case MeshKind::PowerLaw: return "sfdm-implicit";
        case MeshKind::Uniform: return "uniform-implicit";
        case MeshKind::LegacyNonUniform: return "legacy-implicit";
    }
    return "unknown";
}

ErrorReport sine_report(const DiffuseProblem& p, MeshKind kind, std::size_t N, int repeats) {
    const TimeMesh mesh = TimeMesh::make(kind, p.T, N, p.alpha);
    DiffuseSolution sol{mesh, {}, {}};
    const double wall = median_seconds(repeats, [&] { sol = solve_diffuse_implicit(p, mesh); });
    const auto exact = exact_diffusion_profile(sol.x, p.T, p.L, p.alpha);
    ErrorReport r;
    r.scheme = implicit_scheme_name(kind);
    r.mesh = kind;
    r.alpha = p.alpha;
    r.T = p.T;
    r.N = N;
    r.M = p.M;
    r.mre = mre(sol.final_row(), exact);
    r.wall_time = wall;
    return r;
}

std::vector<ErrorReport> run_table1(const TableOverrides& o) {
    RelaxProblem p;
    p.gamma = 0.5;
    p.A = 10.0;
    p.B = 1.0;
    p.T = 20.0;
    const double exact = exact_relaxation(p.A, p.B, p.gamma, p.T);
    const std::vector<std::size_t> sfdm = o.nodes.empty() ? std::vector<std::size_t>{25, 50, 100, 200} : o.nodes;
    const std::vector<std::size_t> unif = o.nodes.empty() ? std::vector<std::size_t>{25, 50, 100, 200, 400} : o.nodes;
    std::vector<ErrorReport> out;
    for (const auto& [scheme, list] : {std::pair{RelaxScheme::SfdmImplicit, sfdm},
                                        std::pair{RelaxScheme::UniformImplicit, unif}}) {
        for (const std::size_t N : list) {
            const TimeMesh mesh = TimeMesh::make(mesh_kind_for(scheme), p.T, N, p.gamma);
            std::vector<double> u;
            const double wall =
                median_seconds(o.repeats, [&] { u = solve_relax_implicit(p, mesh).u; });
            ErrorReport r;
            r.scheme = std::string(to_string(scheme));
            r.mesh = mesh.kind();
            r.alpha = p.gamma;
            r.T = p.T;
            r.N = N;
            r.M = 0;
            r.mre = std::abs(u.back() - exact) / std::abs(exact);
            r.wall_time = wall;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<ErrorReport> run_table2(const TableOverrides& o) {
    const DiffuseProblem p = sine_problem(0.6, 20.0, o.space_intervals.value_or(100));
    const std::vector<std::size_t> sfdm = o.nodes.empty() ? std::vector<std::size_t>{25, 50, 100, 200} : o.nodes;
    const std::vector<std::size_t> unif = o.nodes.empty() ? std::vector<std::size_t>{25, 50, 100, 200, 400} : o.nodes;
    std::vector<ErrorReport> out;
    for (const std::size_t N : sfdm) out.push_back(sine_report(p, MeshKind::PowerLaw, N, o.repeats));
    for (const std::size_t N : unif) out.push_back(sine_report(p, MeshKind::Uniform, N, o.repeats));
    return out;
}

std::vector<ErrorReport> run_table3(const TableOverrides& o) {
    const std::vector<double> alphas = o.alphas.empty() ? std::vector<double>{0.4, 0.6, 0.8} : o.alphas;
    const std::vector<double> horizons =
        o.horizons.empty() ? std::vector<double>{1, 10, 50, 100, 200, 500} : o.horizons;
    std::vector<ErrorReport> out;
    for (const double alpha : alphas) {
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            const double T = horizons[h];
            std::size_t sfdm_nodes = 0;
            if (o.nodes.size() == horizons.size()) {
                sfdm_nodes = o.nodes[h];
            } else if (o.nodes.size() == 1) {
                sfdm_nodes = o.nodes.front();
            } else if (auto fixed = table3_sfdm_nodes(alpha, T)) {
                sfdm_nodes = *fixed;
            } else {
                std::ostringstream os;
                os << "no fixed S-FDM node count for alpha=" << alpha << ", T=" << T
                   << "; pass nodes explicitly";
                throw std::invalid_argument(os.str());
            }
            const auto uniform_nodes = static_cast<std::size_t>(std::llround(T / 0.1));
            if (uniform_nodes == 0) throw std::invalid_argument("T too small for a 0.1 uniform step");
            const DiffuseProblem p = sine_problem(alpha, T, o.space_intervals.value_or(100));
            out.push_back(sine_report(p, MeshKind::PowerLaw, sfdm_nodes, o.repeats));
            out.push_back(sine_report(p, MeshKind::Uniform, uniform_nodes, o.repeats));
        }
    }
    return out;
}

std::vector<ErrorReport> run_table4(const TableOverrides& o) {
    const std::vector<double> alphas = o.alphas.empty() ? std::vector<double>{0.8, 0.6, 0.4} : o.alphas;
    const std::vector<std::size_t> nodes = o.nodes.empty() ? std::vector<std::size_t>{20, 40, 80} : o.nodes;
    ReferenceCache cache(o.cache_dir);
    std::vector<ErrorReport> out;
    for (const MeshKind kind : {MeshKind::PowerLaw, MeshKind::Uniform, MeshKind::LegacyNonUniform}) {
        for (const double alpha : alphas) {
            const DiffuseProblem p = point_source_problem(alpha, o.space_intervals.value_or(100));
            const DiffuseSolution ref = cache.get(p, kind, o.reference_nodes);
            for (const std::size_t N : nodes) {
                const TimeMesh mesh = TimeMesh::make(kind, p.T, N, p.alpha);
                DiffuseSolution sol{mesh, {}, {}};
                const double wall =
                    median_seconds(o.repeats, [&] { sol = solve_diffuse_implicit(p, mesh); });
                ErrorReport r;
                r.scheme = implicit_scheme_name(kind);
                r.mesh = kind;
                r.alpha = alpha;
                r.T = p.T;
                r.N = N;
                r.M = p.M;
                r.mae1 = mae1(sol.final_row(), ref.final_row());
                r.wall_time = wall;
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace

double mre(std::span<const double> numeric, std::span<const double> exact) {
    if (numeric.size() != exact.size()) throw std::invalid_argument("mre: profile lengths differ");
    double worst = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (std::abs(exact[i]) < kMaskFloor) continue;
        any = true;
        worst = std::max(worst, std::abs(numeric[i] - exact[i]) / std::abs(exact[i]));
    }
    if (!any) throw std::invalid_argument("mre: exact profile is zero everywhere");
    return worst;
}

double mae1(std::span<const double> coarse_final, std::span<const double> reference_final) {
    if (coarse_final.size() != reference_final.size()) {
        throw std::invalid_argument("mae1: space grids differ");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse_final.size(); ++i) {
        worst = std::max(worst, std::abs(coarse_final[i] - reference_final[i]));
    }
    return worst;
}

double convergence_rate(double err_half, double err_full) {
    if (!(err_half > 0.0) || !(err_full > 0.0)) {
        throw std::domain_error("convergence_rate needs positive errors");
    }
    return std::log2(err_half / err_full);
}

void attach_rates(std::vector<ErrorReport>& reports) {
    for (auto& r : reports) {
        r.rate.reset();
        if (r.N % 2 != 0) continue;
        const auto err_of = [](const ErrorReport& e) { return e.mre ? e.mre : e.mae1; };
        const auto mine = err_of(r);
        if (!mine) continue;
        for (const auto& s : reports) {
            if (s.scheme != r.scheme || s.M != r.M || s.N * 2 != r.N) continue;
            if (!same_value(s.alpha, r.alpha) || !same_value(s.T, r.T)) continue;
            const auto theirs = err_of(s);
            if (theirs && *theirs > 0.0 && *mine > 0.0) r.rate = convergence_rate(*theirs, *mine);
            break;
        }
    }
}

fs::path default_cache_dir() {
    if (const char* env = std::getenv("FRACSTEP_CACHE"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path("cache");
}

ReferenceCache::ReferenceCache(fs::path dir) : dir_(std::move(dir)) {}

std::string ReferenceCache::key(const DiffuseProblem& p, MeshKind kind, std::size_t reference_nodes) {
    if (p.source) throw std::invalid_argument("reference cache cannot key problems with a source term");
    json j;
    j["format"] = "fracstep-reference-1";
    j["alpha"] = p.alpha;
    j["D"] = p.D;
    j["L"] = p.L;
    j["M"] = p.M;
    j["T"] = p.T;
    j["ic"] = std::string(to_string(p.ic));
    if (p.ic == InitialKind::Custom) j["custom_ic"] = p.custom_ic;
    j["bc"] = std::string(to_string(p.bc));
    j["mesh"] = std::string(to_string(kind));
    j["N_ref"] = reference_nodes;
    return j.dump();
}

std::uint64_t ReferenceCache::hash(std::string_view key) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

DiffuseSolution ReferenceCache::get(const DiffuseProblem& p, MeshKind kind,
                                    std::size_t reference_nodes) {
    p.validate();
    const std::string k = key(p, kind, reference_nodes);
    const std::string stem = hex64(hash(k));
    const fs::path bin = dir_ / (stem + ".bin");
    const fs::path manifest = dir_ / (stem + ".json");
    const std::size_t rows = reference_nodes + 1;
    const std::size_t cols = p.M + 1;
    const std::uintmax_t bytes = rows * cols * sizeof(double);
    last_hit_ = false;

    std::error_code ec;
    if (fs::exists(manifest, ec) && fs::exists(bin, ec) && fs::file_size(bin, ec) == bytes && !ec) {
        try {
            std::ifstream mf(manifest);
            const json m = json::parse(mf);
            if (m.at("key").get<std::string>() == k && m.at("rows").get<std::size_t>() == rows &&
                m.at("cols").get<std::size_t>() == cols) {
                std::vector<double> field(rows * cols);
                std::ifstream in(bin, std::ios::binary);
                in.read(reinterpret_cast<char*>(field.data()), static_cast<std::streamsize>(bytes));
                if (in && std::all_of(field.begin(), field.end(), [](double v) { return std::isfinite(v); })) {
                    last_hit_ = true;
                    return DiffuseSolution{TimeMesh::make(kind, p.T, reference_nodes, p.alpha),
                                           p.grid(), std::move(field)};
                }
            }
        } catch (const std::exception&) {
            // unreadable manifest: fall through and rebuild
        }
    }

    DiffuseSolution sol = solve_diffuse(p, kind, reference_nodes);
    fs::create_directories(dir_);
    const fs::path tmp_bin = dir_ / (stem + ".bin.tmp");
    {
        std::ofstream out(tmp_bin, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(sol.field.data()), static_cast<std::streamsize>(bytes));
        if (!out) throw std::runtime_error("failed to write reference cache " + tmp_bin.string());
    }
    fs::rename(tmp_bin, bin);
    json m;
    m["key"] = k;
    m["hash"] = stem;
    m["rows"] = rows;
    m["cols"] = cols;
    m["dtype"] = "float64";
    m["version"] = std::string(kVersion);
    m["created"] = static_cast<std::int64_t>(std::time(nullptr));
    const fs::path tmp_manifest = dir_ / (stem + ".json.tmp");
    {
        std::ofstream out(tmp_manifest, std::ios::trunc);
        out << m.dump(2) << '\n';
        if (!out) throw std::runtime_error("failed to write reference manifest " + tmp_manifest.string());
    }
    fs::rename(tmp_manifest, manifest);
    return sol;
}

DiffuseSolution reference_solution(const DiffuseProblem& p, MeshKind kind,
                                   std::size_t reference_nodes, const fs::path& dir) {
    ReferenceCache cache(dir);
    return cache.get(p, kind, reference_nodes);
}

std::string_view to_string(Table t) {
    switch (t) {
        case Table::T1: return "table1";
        case Table::T2: return "table2";
        case Table::T3: return "table3";
        case Table::T4: return "table4";
    }
    return "unknown";
}

Table parse_table(std::string_view name) {
    for (auto t : {Table::T1, Table::T2, Table::T3, Table::T4}) {
        if (name == to_string(t)) return t;
    }
    throw std::invalid_argument("unknown table '" + std::string(name) + "'");
}

std::optional<std::size_t> table3_sfdm_nodes(double alpha, double T) {
    for (const auto& [a, row] : table3_nodes()) {
        if (!same_value(a, alpha)) continue;
        for (const auto& [h, n] : row) {
            if (same_value(h, T)) return n;
        }
    }
    return std::nullopt;
}

std::vector<ErrorReport> run_table(Table which, const TableOverrides& overrides) {
    std::vector<ErrorReport> reports;
    switch (which) {
        case Table::T1: reports = run_table1(overrides); break;
        case Table::T2: reports = run_table2(overrides); break;
        case Table::T3: reports = run_table3(overrides); break;
        case Table::T4: reports = run_table4(overrides); break;
    }
    if (which != Table::T3) attach_rates(reports);
    return reports;
}

std::optional<std::size_t> find_parity_nodes(const DiffuseProblem& p, double target_mre,
                                             std::size_t max_nodes) {
    const std::vector<double> x = p.grid();
    const std::vector<double> exact = exact_diffusion_profile(x, p.T, p.L, p.alpha);
    const auto ok = [&](std::size_t n) {
        const DiffuseSolution sol = solve_diffuse(p, MeshKind::PowerLaw, n);
        return mre(sol.final_row(), exact) <= target_mre;
    };
    std::size_t hi = 1;
    while (!ok(hi)) {
        if (hi >= max_nodes) return std::nullopt;
        hi = std::min(hi * 2, max_nodes);
    }
    std::size_t lo = hi / 2;  // fails (or 0)
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) hi = mid; else lo = mid;
    }
    return hi;
}

void write_table_csv(std::ostream& os, Table which, std::span<const ErrorReport> reports) {
    if (which == Table::T3) {
        os << "alpha,T,sfdm_nodes,sfdm_mre,sfdm_wall_time,uniform_nodes,uniform_mre,uniform_wall_time,time_ratio\n";
        for (std::size_t i = 0; i + 1 < reports.size(); i += 2) {
            const ErrorReport& s = reports[i];
            const ErrorReport& u = reports[i + 1];
            os << format_double(s.alpha) << ',' << format_double(s.T) << ',' << s.N << ','
               << format_optional(s.mre) << ',' << format_double(s.wall_time) << ',' << u.N << ','
               << format_optional(u.mre) << ',' << format_double(u.wall_time) << ','
               << format_double(s.wall_time > 0.0 ? u.wall_time / s.wall_time : 0.0) << '\n';
        }
        return;
    }
    const bool absolute = which == Table::T4;
    os << "scheme,mesh,alpha,T,N,M," << (absolute ? "mae1" : "mre") << ",rate,wall_time\n";
    for (const ErrorReport& r : reports) {
        os << r.scheme << ',' << to_string(r.mesh) << ',' << format_double(r.alpha) << ','
           << format_double(r.T) << ',' << r.N << ',' << r.M << ','
           << format_optional(absolute ? r.mae1 : r.mre) << ',' << format_optional(r.rate) << ','
           << format_double(r.wall_time) << '\n';
    }
}

}  // namespace fracstep
