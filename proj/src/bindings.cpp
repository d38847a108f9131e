// pybind11 front end for the core operations: lattice transforms,
// certification, projection, simulation and greedy maximization.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subdiff/certify.hpp"
#include "subdiff/maximize.hpp"
#include "subdiff/model.hpp"
#include "subdiff/project.hpp"
#include "subdiff/simulate.hpp"

namespace py = pybind11;
using namespace subdiff;

PYBIND11_MODULE(_core, m) {
    m.doc() = "submodularity certification, projection and influence toolkit";

    py::class_<ActivationTable>(m, "ActivationTable")
        .def(py::init([](int k, std::vector<double> a) {
                 lattice::check_length(a.size(), k);
                 return ActivationTable{k, std::move(a)};
             }),
             py::arg("k"), py::arg("a"))
        .def_readonly("k", &ActivationTable::k)
        .def_readonly("a", &ActivationTable::a)
        .def("__len__", &ActivationTable::size);

    py::class_<Network>(m, "Network")
        .def_property_readonly("names", [](const Network& n) { return n.names; })
        .def_property_readonly("parents", [](const Network& n) { return n.parents; })
        .def_property_readonly("topo_order", [](const Network& n) { return n.topo_order; })
        .def("vertex_count", &Network::vertex_count)
        .def("vertex_id", &Network::vertex_id)
        .def("table", [](const Network& n, int v) { return n.tables.at(v); })
        .def("to_json", [](const Network& n) { return serialize_network(n); });

    m.def("load_network", &load_network, py::arg("json_text"));
    m.def("load_network_file", &load_network_file, py::arg("path"));

    m.def("connection_matrix", &lattice::connection_matrix, py::arg("k"));
    m.def(
        "zeta_transform",
        [](std::vector<double> x, int k) { return lattice::zeta_transform(x, k); },
        py::arg("x"), py::arg("k"));
    m.def(
        "mobius_transform",
        [](std::vector<double> g, int k) { return lattice::mobius_transform(g, k); },
        py::arg("g"), py::arg("k"));
    m.def(
        "apply_connection",
        [](std::vector<double> b, int k) { return lattice::apply_connection(b, k); },
        py::arg("b"), py::arg("k"));

    py::class_<CoverageCertificate>(m, "CoverageCertificate")
        .def_readonly("feasible", &CoverageCertificate::feasible)
        .def_readonly("b", &CoverageCertificate::b)
        .def_readonly("witness_pattern", &CoverageCertificate::witness_pattern)
        .def_readonly("witness_value", &CoverageCertificate::witness_value)
        .def_readonly("residual", &CoverageCertificate::residual);

    m.def(
        "certify_vertex",
        [](const ActivationTable& a, double eps) { return certify_vertex(a, eps); },
        py::arg("table"), py::arg("eps") = kDefaultFeasibilityTol);
    m.def(
        "certify_model",
        [](const Network& net, double eps) {
            ModelCertificate mc = certify_model(net, eps);
            py::list verts;
            for (const auto& c : mc.vertices) verts.append(c);
            return py::make_tuple(mc.feasible, verts);
        },
        py::arg("net"), py::arg("eps") = kDefaultFeasibilityTol);
    m.def(
        "theorem2_check",
        [](const ActivationTable& a, double eps) {
            auto rep = theorem2_check(a, eps);
            return py::make_tuple(rep.nonnegative, rep.monotone, rep.submodular);
        },
        py::arg("table"), py::arg("eps") = kDefaultFeasibilityTol);
    m.def("falsify_equivalence", &falsify_equivalence, py::arg("k"),
          py::arg("samples"), py::arg("rng_seed"));

    py::class_<ProjectionResult>(m, "ProjectionResult")
        .def_readonly("a_star", &ProjectionResult::a_star)
        .def_readonly("b_star", &ProjectionResult::b_star)
        .def_readonly("objective", &ProjectionResult::objective)
        .def_readonly("iterations", &ProjectionResult::iterations)
        .def_readonly("converged", &ProjectionResult::converged);

    m.def("project_vertex", &project_vertex, py::arg("table"),
          py::arg("tol") = kDefaultProjectionTol,
          py::arg("max_iter") = kDefaultProjectionMaxIter);
    m.def(
        "project_model",
        [](const Network& net, double tol, int max_iter) {
            auto proj = project_model(net, tol, max_iter);
            return py::make_tuple(proj.net, proj.converged);
        },
        py::arg("net"), py::arg("tol") = kDefaultProjectionTol,
        py::arg("max_iter") = kDefaultProjectionMaxIter);

    m.def("simulate_once", &simulate_once, py::arg("net"), py::arg("seeds"),
          py::arg("rng_seed"));
    m.def(
        "exact_distribution",
        [](const Network& net, const VertexSet& seeds) {
            std::map<std::uint32_t, double> d = exact_distribution(net, seeds);
            py::dict out;
            for (const auto& [mask, p] : d) out[py::int_(mask)] = p;
            return out;
        },
        py::arg("net"), py::arg("seeds"));
    m.def("exact_spread", &exact_spread, py::arg("net"), py::arg("seeds"));
    m.def(
        "estimate_spread",
        [](const Network& net, const VertexSet& seeds, std::int64_t samples,
           std::uint64_t rng_seed, int workers) {
            auto est = estimate_spread(net, seeds, samples, rng_seed, workers);
            return py::make_tuple(est.mean, est.stderr_);
        },
        py::arg("net"), py::arg("seeds"), py::arg("samples") = 10000,
        py::arg("rng_seed") = 0, py::arg("workers") = 1);

    m.def("simulate_multi", &simulate_multi, py::arg("net"), py::arg("seeds"),
          py::arg("rng_seed"));
    m.def("exact_multi_spread", &exact_multi_spread, py::arg("net"),
          py::arg("seeds"), py::arg("type"));

    py::class_<GreedyTrace>(m, "GreedyTrace")
        .def_readonly("chosen", &GreedyTrace::chosen)
        .def_readonly("marginal_gains", &GreedyTrace::marginal_gains)
        .def_readonly("evaluations", &GreedyTrace::evaluations);

    m.def(
        "greedy_select",
        [](const Network& net, int budget, const std::string& estimator,
           std::int64_t samples, std::uint64_t rng_seed, bool lazy) {
            Estimator est;
            if (estimator == "exact") {
                est.kind = Estimator::Kind::Exact;
            } else if (estimator == "mc") {
                est.kind = Estimator::Kind::MonteCarlo;
                est.samples = samples;
                est.rng_seed = rng_seed;
            } else {
                throw std::invalid_argument("estimator must be 'exact' or 'mc'");
            }
            return greedy_select(net, budget, est, lazy);
        },
        py::arg("net"), py::arg("budget"), py::arg("estimator") = "exact",
        py::arg("samples") = 10000, py::arg("rng_seed") = 0, py::arg("lazy") = true);
    m.def(
        "brute_force_opt",
        [](const Network& net, int budget) {
            auto opt = brute_force_opt(net, budget);
            return py::make_tuple(opt.seeds, opt.spread);
        },
        py::arg("net"), py::arg("budget"));
}
