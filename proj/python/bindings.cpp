#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "fracstep/bench.hpp"
#include "fracstep/caputo.hpp"
#include "fracstep/csv.hpp"
#include "fracstep/diffuse.hpp"
#include "fracstep/mesh.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/relax.hpp"

namespace py = pybind11;
using namespace fracstep;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class Range>
Array to_array(const Range& r) {
    Array out(static_cast<py::ssize_t>(std::size(r)));
    std::copy(std::begin(r), std::end(r), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

py::dict report_to_dict(const ErrorReport& r) {
    py::dict d;
    d["scheme"] = r.scheme;
    d["mesh"] = std::string(to_string(r.mesh));
    d["alpha"] = r.alpha;
    d["T"] = r.T;
    d["N"] = r.N;
    d["M"] = r.M;
    d["mre"] = r.mre ? py::cast(*r.mre) : py::none();
    d["mae1"] = r.mae1 ? py::cast(*r.mae1) : py::none();
    d["rate"] = r.rate ? py::cast(*r.rate) : py::none();
    d["wall_time"] = r.wall_time;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fracstep, m) {
    m.doc() = "Fractional relaxation and subdiffusion solvers on power-law time meshes.";
    m.attr("__version__") = std::string(kVersion);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);

    m.def(
        "mesh",
        [](const std::string& strategy, double T, std::size_t nodes, double alpha) {
            return to_array(TimeMesh::make(parse_mesh_kind(strategy), T, nodes, alpha).nodes());
        },
        py::arg("strategy"), py::arg("T"), py::arg("nodes"), py::arg("alpha") = 1.0,
        "Time nodes t_0..t_N for 'power-law', 'uniform' or 'legacy'.");

    m.def("ml", &ml, py::arg("alpha"), py::arg("z"), py::arg("tol") = kDefaultMlTol,
          "One-parameter Mittag-Leffler function E_alpha(z).");
    m.def("exact_relaxation", &exact_relaxation, py::arg("A"), py::arg("B"), py::arg("gamma"), py::arg("t"));
    m.def(
        "exact_diffusion",
        [](const Array& x, double t, double L, double alpha) {
            const auto xs = to_vector(x);
            return to_array(exact_diffusion_profile(xs, t, L, alpha));
        },
        py::arg("x"), py::arg("t"), py::arg("L"), py::arg("alpha"));
    m.def("exact_diffusion_coefficient", &exact_diffusion_coefficient, py::arg("L"));

    m.def(
        "l1_weights",
        [](const std::string& strategy, double T, std::size_t nodes, double alpha, std::size_t n,
           std::optional<double> mesh_alpha) {
            const auto mesh = TimeMesh::make(parse_mesh_kind(strategy), T, nodes, mesh_alpha.value_or(alpha));
            return to_array(l1_weights(mesh, alpha, n).values());
        },
        py::arg("strategy"), py::arg("T"), py::arg("nodes"), py::arg("alpha"), py::arg("n"),
        py::arg("mesh_alpha") = py::none(),
        "Weights chi_0..chi_n of the L1 derivative at t_{n+1}; the mesh is graded by mesh_alpha (default alpha).");

    m.def(
        "solve_relax",
        [](double gamma, double A, double B, double T, const std::string& scheme, std::size_t nodes,
           std::optional<std::function<double(double)>> source) {
            RelaxProblem p;
            p.gamma = gamma;
            p.A = A;
            p.B = B;
            p.T = T;
            if (source) p.source = *source;
            const auto sol = solve_relax(p, parse_relax_scheme(scheme), nodes);
            return py::make_tuple(to_array(sol.mesh.nodes()), to_array(sol.u));
        },
        py::arg("gamma"), py::arg("A"), py::arg("B"), py::arg("T"), py::arg("scheme") = "sfdm-implicit",
        py::arg("nodes") = 100, py::arg("source") = py::none(), "Returns (t, u).");

    m.def(
        "solve_diffuse",
        [](double alpha, double D, double L, std::size_t xnodes, double T, const std::string& ic,
           const std::string& bc, const std::string& mesh, std::size_t nodes, std::optional<Array> custom_ic) {
            DiffuseProblem p;
            p.alpha = alpha;
            p.D = D;
            p.L = L;
            p.M = xnodes;
            p.T = T;
            p.ic = parse_initial_kind(ic);
            p.bc = parse_boundary(bc);
            if (custom_ic) p.custom_ic = to_vector(*custom_ic);
            const auto sol = solve_diffuse(p, parse_mesh_kind(mesh), nodes);
            Array field({static_cast<py::ssize_t>(sol.time_nodes()), static_cast<py::ssize_t>(sol.space_nodes())});
            std::copy(sol.field.begin(), sol.field.end(), field.mutable_data());
            return py::make_tuple(to_array(sol.mesh.nodes()), to_array(sol.x), field);
        },
        py::arg("alpha"), py::arg("D"), py::arg("L") = 10.0, py::arg("xnodes") = 100, py::arg("T") = 1.0,
        py::arg("ic") = "sine", py::arg("bc") = "dirichlet", py::arg("mesh") = "power-law",
        py::arg("nodes") = 100, py::arg("custom_ic") = py::none(),
        "Returns (t, x, u) with u of shape (nodes + 1, xnodes + 1).");

    m.def(
        "mre", [](const Array& u, const Array& exact) { return mre(to_vector(u), to_vector(exact)); },
        py::arg("numeric"), py::arg("exact"));
    m.def(
        "mae1", [](const Array& u, const Array& ref) { return mae1(to_vector(u), to_vector(ref)); },
        py::arg("coarse"), py::arg("reference"));
    m.def("convergence_rate", &convergence_rate, py::arg("err_half"), py::arg("err_full"));

    m.def(
        "run_table",
        [](const std::string& table, std::optional<std::vector<double>> alphas,
           std::optional<std::vector<double>> horizons, std::optional<std::vector<std::size_t>> nodes,
           std::optional<std::size_t> xnodes, std::size_t nref, std::optional<std::filesystem::path> cache,
           int repeats) {
            TableOverrides o;
            if (alphas) o.alphas = *alphas;
            if (horizons) o.horizons = *horizons;
            if (nodes) o.nodes = *nodes;
            o.space_intervals = xnodes;
            o.reference_nodes = nref;
            if (cache) o.cache_dir = *cache;
            o.repeats = repeats;
            std::vector<ErrorReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_table(parse_table(table), o);
            }
            py::list rows;
            for (const auto& r : reports) rows.append(report_to_dict(r));
            return rows;
        },
        py::arg("table"), py::arg("alphas") = py::none(), py::arg("T") = py::none(), py::arg("nodes") = py::none(),
        py::arg("xnodes") = py::none(), py::arg("nref") = 5000, py::arg("cache") = py::none(),
        py::arg("repeats") = 1, "Rows of table1..table4 as dicts.");
}
