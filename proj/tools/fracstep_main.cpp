// fracstep: solve fractional relaxation/diffusion problems, reproduce the benchmark
// tables and dump time meshes as CSV.
//
// Exit codes: 0 success, 1 numeric or solver failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracstep/bench.hpp"
#include "fracstep/csv.hpp"
#include "fracstep/diffuse.hpp"
#include "fracstep/mesh.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/relax.hpp"

namespace {

using json = nlohmann::json;
using namespace fracstep;

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

/// Flag-level validation failures; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CLI::Validator open_unit_order(bool include_one) {
    return CLI::Validator(
        [include_one](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (const std::exception&) {
                return "not a number: " + s;
            }
            const bool ok = v > 0.0 && (include_one ? v <= 1.0 : v < 1.0);
            if (!ok) return std::string("order must lie in (0, 1") + (include_one ? "]" : ")") + ", got " + s;
            return {};
        },
        include_one ? "ORDER in (0,1]" : "ORDER in (0,1)");
}

const CLI::Validator kPositive = CLI::Validator(
    [](std::string& s) -> std::string {
        try {
            if (std::stod(s) > 0.0) return {};
        } catch (const std::exception&) {
        }
        return "must be a positive number, got " + s;
    },
    "POSITIVE");

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": not a number list: " + s);
        }
    }
    return out;
}

std::vector<std::size_t> parse_counts(const std::string& s, const std::string& flag) {
    std::vector<std::size_t> out;
    for (double v : parse_doubles(s, flag)) {
        if (!(v >= 1.0) || v != std::floor(v)) throw UsageError(flag + ": expected positive integers, got " + s);
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

/// Output sink: a file when --out is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& csv() { return file_ ? *file_ : std::cout; }
    /// Summary lines go to stdout when the CSV goes to a file, else to stderr.
    std::ostream& summary() { return file_ ? std::cout : std::cerr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// Options shared by every command that echoes its configuration.
struct Echo {
    json config = json::object();
};

struct RelaxArgs {
    double gamma = 0.5;
    double A = 10.0;
    double B = 1.0;
    double T = 20.0;
    std::string scheme = "sfdm-implicit";
    std::size_t nodes = 100;
    bool matrix = false;
    std::string out;
};

struct DiffuseArgs {
    double alpha = 0.6;
    double L = 10.0;
    std::string D = "exactk";
    std::size_t xnodes = 100;
    double T = 20.0;
    std::string ic = "sine";
    std::string bc = "dirichlet";
    std::string mesh = "power-law";
    std::size_t nodes = 100;
    std::string rows = "all";
    std::string out;
};

struct BenchArgs {
    std::string table;
    std::string alphas;
    std::string horizons;
    std::string nodes;
    std::optional<std::size_t> xnodes;
    std::size_t nref = 5000;
    std::string cache;
    int repeats = 1;
    std::string out;
};

struct ParityArgs {
    double alpha = 0.4;
    double T = 500.0;
    std::size_t xnodes = 100;
    std::size_t max_nodes = 20000;
};

struct MeshArgs {
    std::string strategy = "power-law";
    double alpha = 0.5;
    double T = 10.0;
    std::size_t nodes = 50;
    std::string out;
};

int run_relax(const RelaxArgs& a) {
    RelaxProblem p;
    p.gamma = a.gamma;
    p.A = a.A;
    p.B = a.B;
    p.T = a.T;
    RelaxScheme scheme{};
    try {
        scheme = parse_relax_scheme(a.scheme);
        p.validate();
    } catch (const std::exception& e) {
        throw UsageError(std::string("--scheme/--gamma: ") + e.what());
    }
    const RelaxSolution sol = solve_relax(p, scheme, a.nodes, VolterraOptions{a.matrix});

    const bool have_exact = p.B >= 0.0;
    const auto t = sol.mesh.nodes();
    std::vector<double> exact;
    if (have_exact) {
        exact.reserve(t.size());
        for (double tk : t) exact.push_back(exact_relaxation(p.A, p.B, p.gamma, tk));
    }

    json cfg = {{"command", "solve relax"}, {"gamma", a.gamma}, {"A", a.A}, {"B", a.B},
                {"T", a.T}, {"scheme", a.scheme}, {"nodes", a.nodes}, {"volterra_matrix", a.matrix}};
    Sink sink(a.out);
    write_provenance(sink.csv(), cfg.dump());
    sink.csv() << (have_exact ? "t,u,exact\n" : "t,u\n");
    for (std::size_t k = 0; k < t.size(); ++k) {
        sink.csv() << format_double(t[k]) << ',' << format_double(sol.u[k]);
        if (have_exact) sink.csv() << ',' << format_double(exact[k]);
        sink.csv() << '\n';
    }
    if (have_exact && exact.back() != 0.0) {
        sink.summary() << "mre_final=" << format_double(std::abs(sol.u.back() - exact.back()) / std::abs(exact.back()))
                       << '\n';
    }
    return kExitOk;
}

int run_diffuse(const DiffuseArgs& a) {
    DiffuseProblem p;
    MeshKind kind{};
    try {
        p.alpha = a.alpha;
        p.L = a.L;
        p.M = a.xnodes;
        p.T = a.T;
        p.ic = parse_initial_kind(a.ic);
        p.bc = parse_boundary(a.bc);
        kind = parse_mesh_kind(a.mesh);
        if (a.D == "exactk") {
            p.D = exact_diffusion_coefficient(p.L);
        } else {
            std::size_t used = 0;
            p.D = std::stod(a.D, &used);
            if (used != a.D.size()) throw std::invalid_argument("--D: expected a number or 'exactk'");
        }
        if (p.ic == InitialKind::Custom) throw std::invalid_argument("--ic custom is library-only");
        if (a.rows != "all" && a.rows != "final") throw std::invalid_argument("--rows must be 'all' or 'final'");
        p.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    const DiffuseSolution sol = solve_diffuse(p, kind, a.nodes);

    json cfg = {{"command", "solve diffuse"}, {"alpha", a.alpha}, {"L", a.L}, {"D", p.D},
                {"xnodes", a.xnodes}, {"T", a.T}, {"ic", a.ic}, {"bc", a.bc},
                {"mesh", a.mesh}, {"nodes", a.nodes}, {"rows", a.rows}};
    Sink sink(a.out);
    write_provenance(sink.csv(), cfg.dump());
    sink.csv() << "t,x,u\n";
    const auto t = sol.mesh.nodes();
    const std::size_t first = a.rows == "final" ? sol.mesh.intervals() : 0;
    for (std::size_t n = first; n < sol.time_nodes(); ++n) {
        const auto row = sol.row(n);
        for (std::size_t i = 0; i < row.size(); ++i) {
            sink.csv() << format_double(t[n]) << ',' << format_double(sol.x[i]) << ','
                       << format_double(row[i]) << '\n';
        }
    }
    const bool exact_available = p.ic == InitialKind::Sine && p.bc == Boundary::Dirichlet0 &&
                                 std::abs(p.D - exact_diffusion_coefficient(p.L)) <= 1e-12 * p.D;
    if (exact_available) {
        const auto exact = exact_diffusion_profile(sol.x, p.T, p.L, p.alpha);
        sink.summary() << "mre_final=" << format_double(mre(sol.final_row(), exact)) << '\n';
    }
    sink.summary() << "mass_final=" << format_double(mass(sol.final_row(), p.dx(), p.bc)) << '\n';
    return kExitOk;
}

int run_bench(const BenchArgs& a) {
    Table which{};
    TableOverrides o;
    try {
        which = parse_table(a.table);
        o.alphas = parse_doubles(a.alphas, "--alphas");
        for (double v : o.alphas) {
            if (!(v > 0.0 && v < 1.0)) throw UsageError("--alphas: orders must lie in (0, 1)");
        }
        o.horizons = parse_doubles(a.horizons, "--T");
        for (double v : o.horizons) {
            if (!(v > 0.0)) throw UsageError("--T: horizons must be positive");
        }
        o.nodes = parse_counts(a.nodes, "--nodes");
        o.space_intervals = a.xnodes;
        o.reference_nodes = a.nref;
        if (!a.cache.empty()) o.cache_dir = a.cache;
        o.repeats = a.repeats;
        if (which == Table::T4 && o.space_intervals && *o.space_intervals % 2 != 0) {
            throw UsageError("--xnodes: point source needs an even number of intervals");
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    std::vector<ErrorReport> reports;
    try {
        reports = run_table(which, o);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    json cfg = {{"command", "bench"}, {"table", a.table}, {"alphas", a.alphas}, {"T", a.horizons},
                {"nodes", a.nodes}, {"nref", a.nref}, {"repeats", a.repeats},
                {"cache", o.cache_dir.string()}};
    if (a.xnodes) cfg["xnodes"] = *a.xnodes;
    Sink sink(a.out);
    write_provenance(sink.csv(), cfg.dump());
    write_table_csv(sink.csv(), which, reports);
    return kExitOk;
}

int run_parity(const ParityArgs& a) {
    DiffuseProblem p;
    p.alpha = a.alpha;
    p.L = 10.0;
    p.D = exact_diffusion_coefficient(p.L);
    p.M = a.xnodes;
    p.T = a.T;
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    const auto uniform_nodes = static_cast<std::size_t>(std::llround(a.T / 0.1));
    if (uniform_nodes == 0) throw UsageError("--T: too small for a 0.1 uniform step");
    const DiffuseSolution uni = solve_diffuse(p, MeshKind::Uniform, uniform_nodes);
    const double target = mre(uni.final_row(), exact_diffusion_profile(uni.x, p.T, p.L, p.alpha));
    const auto found = find_parity_nodes(p, target, a.max_nodes);
    json cfg = {{"command", "bench parity"}, {"alpha", a.alpha}, {"T", a.T}, {"xnodes", a.xnodes},
                {"max_nodes", a.max_nodes}};
    write_provenance(std::cout, cfg.dump());
    std::cout << "alpha,T,uniform_nodes,uniform_mre,sfdm_nodes\n"
              << format_double(a.alpha) << ',' << format_double(a.T) << ',' << uniform_nodes << ','
              << format_double(target) << ',' << (found ? std::to_string(*found) : std::string()) << '\n';
    return found ? kExitOk : kExitSolver;
}

int run_mesh(const MeshArgs& a) {
    MeshKind kind{};
    try {
        kind = parse_mesh_kind(a.strategy);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--strategy: ") + e.what());
    }
    const TimeMesh mesh = TimeMesh::make(kind, a.T, a.nodes, a.alpha);
    json cfg = {{"command", "mesh"}, {"strategy", a.strategy}, {"alpha", a.alpha},
                {"T", a.T}, {"nodes", a.nodes}};
    Sink sink(a.out);
    write_provenance(sink.csv(), cfg.dump());
    sink.csv() << "k,t,tau,power_law_time\n";
    const auto t = mesh.nodes();
    for (std::size_t k = 0; k < t.size(); ++k) {
        sink.csv() << k << ',' << format_double(t[k]) << ','
                   << (k == 0 ? std::string() : format_double(t[k] - t[k - 1])) << ','
                   << format_double(std::pow(t[k], a.alpha)) << '\n';
    }
    return kExitOk;
}

/// Pulls "--config <path>" out of argv and splices the JSON object's entries in as
/// flags right after the subcommand names, so explicit flags (later) win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config: missing path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot open " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("--config: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("--config: top level must be a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ',';
                joined += v.is_string() ? v.get<std::string>() : v.dump();
            }
            injected.push_back(flag);
            injected.push_back(joined);
        } else if (value.is_string()) {
            injected.push_back(flag);
            injected.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            injected.push_back(flag);
            injected.push_back(value.is_number_float() ? format_double(value.get<double>()) : value.dump());
        } else {
            throw UsageError("--config: unsupported value for key '" + key + "'");
        }
    }
    std::size_t insert_at = std::min<std::size_t>(2, args.size());
    if (args.size() > 2 && args[1] == "solve") insert_at = 3;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracstep: scale-dependent finite differences for fractional relaxation and diffusion"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "JSON file whose keys mirror the flags; flags override it");

    RelaxArgs relax;
    DiffuseArgs diffuse;
    BenchArgs bench;
    ParityArgs parity;
    MeshArgs mesh;

    auto* solve = app.add_subcommand("solve", "Solve a single problem and write its solution as CSV");
    solve->require_subcommand(1);
    auto* relax_cmd = solve->add_subcommand("relax", "Fractional relaxation D^g u + B u = 0, u(0) = A");
    relax_cmd->add_option("--gamma", relax.gamma, "Fractional order")->check(open_unit_order(true));
    relax_cmd->add_option("--A", relax.A, "Initial value");
    relax_cmd->add_option("--B", relax.B, "Relaxation coefficient");
    relax_cmd->add_option("--T", relax.T, "Time horizon")->check(kPositive);
    relax_cmd->add_option("--scheme", relax.scheme,
                          "sfdm-implicit | uniform-implicit | legacy-implicit | sfdm-volterra | clock-volterra");
    relax_cmd->add_option("--nodes", relax.nodes, "Time intervals N")->check(CLI::PositiveNumber);
    relax_cmd->add_flag("--volterra-matrix", relax.matrix, "Precompute the Volterra weight table");
    relax_cmd->add_option("--out", relax.out, "Output CSV path (default stdout)");

    auto* diffuse_cmd = solve->add_subcommand("diffuse", "Time-fractional diffusion on [0, L]");
    diffuse_cmd->add_option("--alpha", diffuse.alpha, "Fractional order")->check(open_unit_order(false));
    diffuse_cmd->add_option("--L", diffuse.L, "Domain length")->check(kPositive);
    diffuse_cmd->add_option("--D", diffuse.D, "Diffusion coefficient, or 'exactk' for L^2/pi^2");
    diffuse_cmd->add_option("--xnodes", diffuse.xnodes, "Space intervals M")->check(CLI::Range(2, 1 << 24));
    diffuse_cmd->add_option("--T", diffuse.T, "Time horizon")->check(kPositive);
    diffuse_cmd->add_option("--ic", diffuse.ic, "sine | point");
    diffuse_cmd->add_option("--bc", diffuse.bc, "dirichlet | neumann");
    diffuse_cmd->add_option("--mesh", diffuse.mesh, "power-law | uniform | legacy");
    diffuse_cmd->add_option("--nodes", diffuse.nodes, "Time intervals N")->check(CLI::PositiveNumber);
    diffuse_cmd->add_option("--rows", diffuse.rows, "all | final");
    diffuse_cmd->add_option("--out", diffuse.out, "Output CSV path (default stdout)");

    auto* bench_cmd = app.add_subcommand("bench", "Reproduce a benchmark table as CSV");
    bench_cmd->add_option("table", bench.table, "table1 | table2 | table3 | table4");
    bench_cmd->add_option("--alphas", bench.alphas, "Comma-separated orders (table3, table4)");
    bench_cmd->add_option("--T", bench.horizons, "Comma-separated horizons (table3)");
    bench_cmd->add_option("--nodes", bench.nodes, "Comma-separated time interval counts");
    bench_cmd->add_option("--xnodes", bench.xnodes, "Space intervals M")->check(CLI::Range(2, 1 << 24));
    bench_cmd->add_option("--nref", bench.nref, "Reference intervals for table4")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--cache", bench.cache, "Reference cache directory (default $FRACSTEP_CACHE or ./cache)");
    bench_cmd->add_option("--repeats", bench.repeats, "Timing repeats; the median is reported")->check(CLI::Range(1, 1000));
    bench_cmd->add_option("--out", bench.out, "Output CSV path (default stdout)");
    auto* parity_cmd = bench_cmd->add_subcommand("parity", "Search S-FDM nodes matching the uniform 0.1-step MRE");
    parity_cmd->add_option("--alpha", parity.alpha, "Fractional order")->check(open_unit_order(false));
    parity_cmd->add_option("--T", parity.T, "Time horizon")->check(kPositive);
    parity_cmd->add_option("--xnodes", parity.xnodes, "Space intervals M")->check(CLI::Range(2, 1 << 24));
    parity_cmd->add_option("--max-nodes", parity.max_nodes, "Search ceiling")->check(CLI::PositiveNumber);

    auto* mesh_cmd = app.add_subcommand("mesh", "Dump time-mesh node positions as CSV");
    mesh_cmd->add_option("--strategy", mesh.strategy, "power-law | uniform | legacy");
    mesh_cmd->add_option("--alpha", mesh.alpha, "Grading order (also the power-law time axis)")
        ->check(open_unit_order(true));
    mesh_cmd->add_option("--T", mesh.T, "Time horizon")->check(kPositive);
    mesh_cmd->add_option("--nodes", mesh.nodes, "Time intervals N")->check(CLI::PositiveNumber);
    mesh_cmd->add_option("--out", mesh.out, "Output CSV path (default stdout)");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<char*> cargs;
        for (auto& s : args) cargs.push_back(s.data());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return kExitUsage;
        }

        if (*relax_cmd) return run_relax(relax);
        if (*diffuse_cmd) return run_diffuse(diffuse);
        if (*parity_cmd) return run_parity(parity);
        if (*bench_cmd) {
            if (bench.table.empty()) throw UsageError("bench: missing table name");
            return run_bench(bench);
        }
        if (*mesh_cmd) return run_mesh(mesh);
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}
