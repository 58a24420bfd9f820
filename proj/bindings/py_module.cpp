#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nodalkit/basis.hpp"
#include "nodalkit/experiments.hpp"
#include "nodalkit/graph.hpp"
#include "nodalkit/io.hpp"
#include "nodalkit/nodal.hpp"
#include "nodalkit/spectral.hpp"

namespace py = pybind11;
using namespace nodalkit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nodal structure of symmetric matrices viewed as signed graphs";

  py::enum_<SignConvention>(m, "SignConvention")
      .value("laplacian_like", SignConvention::laplacian_like)
      .value("adjacency_like", SignConvention::adjacency_like);

  py::class_<Edge>(m, "Edge")
      .def_readonly("u", &Edge::u)
      .def_readonly("v", &Edge::v)
      .def_readonly("sign", &Edge::sign)
      .def("__repr__", [](const Edge& e) {
        return "Edge(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " +
               (e.sign > 0 ? "+1" : "-1") + ")";
      });

  py::class_<SignedGraph>(m, "SignedGraph")
      .def_readonly("n", &SignedGraph::n)
      .def_readonly("edges", &SignedGraph::edges)
      .def("has_edge", &SignedGraph::has_edge, py::arg("u"), py::arg("v"))
      .def("sign", &SignedGraph::sign, py::arg("u"), py::arg("v"))
      .def("__repr__", [](const SignedGraph& G) {
        return "SignedGraph(n=" + std::to_string(G.n) +
               ", m=" + std::to_string(G.edges.size()) + ")";
      });

  py::class_<GraphInvariants>(m, "GraphInvariants")
      .def_readonly("n", &GraphInvariants::n)
      .def_readonly("e", &GraphInvariants::e)
      .def_readonly("kappa", &GraphInvariants::kappa)
      .def_readonly("nu", &GraphInvariants::nu)
      .def_readonly("e_pos", &GraphInvariants::e_pos)
      .def_readonly("e_neg", &GraphInvariants::e_neg);

  py::class_<FrustrationResult>(m, "FrustrationResult")
      .def_readonly("f", &FrustrationResult::f)
      .def_readonly("state", &FrustrationResult::state)
      .def_readonly("certified", &FrustrationResult::certified);

  m.def(
      "from_symmetric_matrix",
      [](const Matrix& A, double zero_tol) {
        return from_symmetric_matrix(SymmetricMatrix(A), zero_tol);
      },
      py::arg("matrix"), py::arg("zero_tol") = 0.0,
      "Signed graph of a symmetric matrix: edge (i, j) iff |M_ij| > zero_tol, "
      "sigma_ij = -sign(M_ij).");
  m.def(
      "make_signed_graph",
      [](int n, const std::vector<std::tuple<int, int, int>>& edges) {
        std::vector<Edge> es;
        es.reserve(edges.size());
        for (const auto& [u, v, s] : edges) es.push_back({u, v, s});
        return make_signed_graph(n, std::move(es));
      },
      py::arg("n"), py::arg("edges"), "Signed graph from (u, v, sign) triples.");
  m.def(
      "canonical_matrix", [](const SignedGraph& G) { return canonical_matrix(G).mat(); },
      py::arg("graph"), "M_ij = -sigma_ij on edges, zero elsewhere.");
  m.def("connected_components",
        py::overload_cast<const SignedGraph&>(&connected_components), py::arg("graph"));
  m.def("graph_invariants", &graph_invariants, py::arg("graph"));
  m.def("frustrated_edge_count", &frustrated_edge_count, py::arg("graph"), py::arg("state"));
  m.def("frustration_index_exact", &frustration_index_exact, py::arg("graph"),
        py::arg("cap") = 24);
  m.def("frustration_index_heuristic", &frustration_index_heuristic, py::arg("graph"),
        py::arg("seed") = 0, py::arg("restarts") = 16);
  m.def(
      "switch_matrix",
      [](const Matrix& A, const State& state) {
        return switch_matrix(SymmetricMatrix(A), state).mat();
      },
      py::arg("matrix"), py::arg("state"), "D M D for the diagonal sign matrix D of `state`.");

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("eigenvectors", &Spectrum::eigenvectors)
      .def_readonly("residual_norm", &Spectrum::residual_norm);

  py::class_<EigenGroup>(m, "EigenGroup")
      .def_readonly("eigenvalue", &EigenGroup::lambda)
      .def_readonly("k", &EigenGroup::k)
      .def_readonly("r", &EigenGroup::r)
      .def_readonly("first", &EigenGroup::first)
      .def("__repr__", [](const EigenGroup& g) {
        return "EigenGroup(eigenvalue=" + std::to_string(g.lambda) + ", k=" + std::to_string(g.k) +
               ", r=" + std::to_string(g.r) + ")";
      });

  m.def(
      "eigendecompose", [](const Matrix& A) { return eigendecompose(SymmetricMatrix(A)); },
      py::arg("matrix"), "Full spectral decomposition, eigenvalues ascending.");
  m.def("group_eigenvalues", &group_eigenvalues, py::arg("spectrum"),
        py::arg("group_tol") = 1e-8);
  m.def("eigenspace_common_zeros", &eigenspace_common_zeros, py::arg("spectrum"),
        py::arg("group"), py::arg("zero_tol") = -1.0,
        "Indices where every eigenvector of the group vanishes.");

  py::class_<PathDomainCounts>(m, "PathDomainCounts")
      .def_readonly("kappa_lt", &PathDomainCounts::kappa_lt)
      .def_readonly("kappa_le", &PathDomainCounts::kappa_le)
      .def_readonly("kappa_gt", &PathDomainCounts::kappa_gt)
      .def_readonly("kappa_ge", &PathDomainCounts::kappa_ge);

  py::class_<NodalDecomposition>(m, "NodalDecomposition")
      .def_readonly("parts", &NodalDecomposition::parts)
      .def_readonly("N", &NodalDecomposition::N)
      .def_readonly("certified_minimal", &NodalDecomposition::certified_minimal);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("k", &BoundReport::k)
      .def_readonly("r", &BoundReport::r)
      .def_readonly("nu", &BoundReport::nu)
      .def_readonly("f", &BoundReport::f)
      .def_readonly("N", &BoundReport::N)
      .def_readonly("exactN", &BoundReport::exactN)
      .def_readonly("lower", &BoundReport::lower)
      .def_readonly("upper", &BoundReport::upper)
      .def_readonly("satisfied", &BoundReport::satisfied)
      .def("to_json", [](const BoundReport& rep) { return bound_report_json(rep); });

  py::class_<RefinedLowerBound>(m, "RefinedLowerBound")
      .def_readonly("nu_pos", &RefinedLowerBound::nu_pos)
      .def_readonly("nu_neg", &RefinedLowerBound::nu_neg)
      .def_readonly("lower", &RefinedLowerBound::lower);

  py::class_<InertiaCheckResult>(m, "InertiaCheckResult")
      .def_readonly("kappa_pos", &InertiaCheckResult::kappa_pos)
      .def_readonly("kappa_neg", &InertiaCheckResult::kappa_neg)
      .def_readonly("bound_pos", &InertiaCheckResult::bound_pos)
      .def_readonly("bound_neg", &InertiaCheckResult::bound_neg)
      .def_readonly("ok", &InertiaCheckResult::ok);

  m.def("sign_pattern", &sign_pattern, py::arg("x"), py::arg("zero_tol") = -1.0);
  m.def("path_domain_counts", &path_domain_counts, py::arg("graph"), py::arg("x"),
        py::arg("convention") = SignConvention::laplacian_like, py::arg("zero_tol") = -1.0);
  m.def("minimal_nodal_decomposition_exact", &minimal_nodal_decomposition_exact,
        py::arg("graph"), py::arg("x"),
        py::arg("convention") = SignConvention::laplacian_like, py::arg("cap") = 20,
        py::arg("budget_sec") = 10.0, py::arg("zero_tol") = -1.0);
  m.def("minimal_nodal_decomposition_heuristic", &minimal_nodal_decomposition_heuristic,
        py::arg("graph"), py::arg("x"),
        py::arg("convention") = SignConvention::laplacian_like, py::arg("seed") = 0,
        py::arg("zero_tol") = -1.0);
  m.def("support_nodal_count", &support_nodal_count, py::arg("graph"), py::arg("x"),
        py::arg("convention") = SignConvention::laplacian_like, py::arg("cap") = 20,
        py::arg("budget_sec") = 10.0, py::arg("zero_tol") = -1.0);
  m.def(
      "verify_generic_bounds",
      [](const Matrix& A, const SignedGraph& G, const EigenGroup& group, const Vector& phi,
         SignConvention conv, int frustration_cap, int nodal_cap, double budget_sec,
         double zero_tol) {
        return verify_generic_bounds(SymmetricMatrix(A), G, group, phi, conv, frustration_cap,
                                     nodal_cap, budget_sec, zero_tol);
      },
      py::arg("matrix"), py::arg("graph"), py::arg("group"), py::arg("phi"),
      py::arg("convention") = SignConvention::laplacian_like, py::arg("frustration_cap") = 24,
      py::arg("nodal_cap") = 20, py::arg("budget_sec") = 10.0, py::arg("zero_tol") = -1.0,
      "Checks k + (r-1) - nu <= N(phi) <= k + f for a non-vanishing eigenvector.");
  m.def("refined_lower_bound", &refined_lower_bound, py::arg("graph"), py::arg("group"),
        py::arg("phi"), py::arg("zero_tol") = -1.0);
  m.def(
      "inertia_check",
      [](const Matrix& A, const EigenGroup& group, const Vector& phi, double zero_tol) {
        return inertia_check(SymmetricMatrix(A), group, phi, zero_tol);
      },
      py::arg("matrix"), py::arg("group"), py::arg("phi"), py::arg("zero_tol") = -1.0);

  py::class_<ConstructionConfig>(m, "ConstructionConfig")
      .def(py::init<>())
      .def_readwrite("frustration_cap", &ConstructionConfig::frustration_cap)
      .def_readwrite("seed", &ConstructionConfig::seed)
      .def_readwrite("candidate_limit", &ConstructionConfig::candidate_limit)
      .def_readwrite("max_repair_rounds", &ConstructionConfig::max_repair_rounds)
      .def_readwrite("compute_partitions", &ConstructionConfig::compute_partitions)
      .def_readwrite("nodal_cap", &ConstructionConfig::nodal_cap)
      .def_readwrite("nodal_budget_sec", &ConstructionConfig::nodal_budget_sec)
      .def_readwrite("nodal_restarts", &ConstructionConfig::nodal_restarts);

  py::class_<ValidationOptions>(m, "ValidationOptions")
      .def(py::init<>())
      .def_readwrite("zero_tol", &ValidationOptions::zero_tol)
      .def_readwrite("orth_tol", &ValidationOptions::orth_tol)
      .def_readwrite("residual_tol", &ValidationOptions::residual_tol)
      .def_readwrite("frustration_cap", &ValidationOptions::frustration_cap)
      .def_readwrite("nodal_cap", &ValidationOptions::nodal_cap)
      .def_readwrite("nodal_budget_sec", &ValidationOptions::nodal_budget_sec)
      .def_readwrite("seed", &ValidationOptions::seed);

  py::class_<SignedBasisVector>(m, "SignedBasisVector")
      .def_readonly("phi", &SignedBasisVector::phi)
      .def_readonly("eps", &SignedBasisVector::eps)
      .def_readonly("bound", &SignedBasisVector::bound)
      .def_readonly("N", &SignedBasisVector::N)
      .def_readonly("N_exact", &SignedBasisVector::N_exact)
      .def_readonly("partition", &SignedBasisVector::partition);

  py::class_<SignedBasisResult>(m, "SignedBasisResult")
      .def_readonly("eigenvalue", &SignedBasisResult::lambda)
      .def_readonly("k", &SignedBasisResult::k)
      .def_readonly("r", &SignedBasisResult::r)
      .def_readonly("f", &SignedBasisResult::f)
      .def_readonly("f_exact", &SignedBasisResult::f_exact)
      .def_readonly("switch_state", &SignedBasisResult::switch_state)
      .def_readonly("exact_backend", &SignedBasisResult::exact_backend)
      .def_readonly("vectors", &SignedBasisResult::vectors)
      .def("to_json", [](const SignedBasisResult& r) { return signed_basis_result_json(r); });

  py::class_<StrongSupportVector>(m, "StrongSupportVector")
      .def_readonly("phi", &StrongSupportVector::phi)
      .def_readonly("support", &StrongSupportVector::support)
      .def_readonly("bound", &StrongSupportVector::bound);

  py::class_<StrongSupportResult>(m, "StrongSupportResult")
      .def_readonly("eigenvalue", &StrongSupportResult::lambda)
      .def_readonly("k", &StrongSupportResult::k)
      .def_readonly("r", &StrongSupportResult::r)
      .def_readonly("f", &StrongSupportResult::f)
      .def_readonly("f_exact", &StrongSupportResult::f_exact)
      .def_readonly("switch_state", &StrongSupportResult::switch_state)
      .def_readonly("vectors", &StrongSupportResult::vectors);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("reports", &ValidationReport::reports)
      .def_readonly("orthonormal", &ValidationReport::orthonormal)
      .def_readonly("residual_ok", &ValidationReport::residual_ok)
      .def_readonly("sign_compatible", &ValidationReport::sign_compatible)
      .def_readonly("partitions_valid", &ValidationReport::partitions_valid)
      .def_readonly("bounds_hold", &ValidationReport::bounds_hold)
      .def_readonly("all_ok", &ValidationReport::all_ok)
      .def_readonly("max_orth_residual", &ValidationReport::max_orth_residual)
      .def_readonly("max_eigen_residual", &ValidationReport::max_eigen_residual)
      .def_readonly("messages", &ValidationReport::messages);

  py::class_<PerturbationReport>(m, "PerturbationReport")
      .def_readonly("trials", &PerturbationReport::trials)
      .def_readonly("passed", &PerturbationReport::passed)
      .def_readonly("fraction", &PerturbationReport::fraction)
      .def_readonly("upsilon", &PerturbationReport::upsilon);

  m.def(
      "construct_signed_basis",
      [](const Matrix& A, const EigenGroup& group, const ConstructionConfig& cfg) {
        return construct_signed_basis(SymmetricMatrix(A), group, cfg);
      },
      py::arg("matrix"), py::arg("group"), py::arg("config") = ConstructionConfig{},
      "Orthogonal eigenspace basis phi_1..phi_r with compatible signings eps_s "
      "satisfying N(eps_s) <= k + (s-1) + f.");
  m.def(
      "construct_strong_support_basis",
      [](const Matrix& A, const EigenGroup& group, const ConstructionConfig& cfg) {
        return construct_strong_support_basis(SymmetricMatrix(A), group, cfg);
      },
      py::arg("matrix"), py::arg("group"), py::arg("config") = ConstructionConfig{});
  m.def(
      "validate_signed_basis",
      [](const Matrix& A, const EigenGroup& group, const SignedBasisResult& result,
         const ValidationOptions& opts) {
        return validate_signed_basis(SymmetricMatrix(A), group, result, opts);
      },
      py::arg("matrix"), py::arg("group"), py::arg("result"),
      py::arg("options") = ValidationOptions{});
  m.def("perturbation_stability_test", &perturbation_stability_test, py::arg("result"),
        py::arg("upsilon_scale") = 1.0, py::arg("trials") = 64, py::arg("seed") = 0,
        py::arg("zero_tol") = -1.0);

  py::class_<GnpqParams>(m, "GnpqParams")
      .def(py::init<>())
      .def(py::init([](int n, double p, double q, std::uint64_t seed) {
             return GnpqParams{n, p, q, seed};
           }),
           py::arg("n"), py::arg("p"), py::arg("q"), py::arg("seed") = 0)
      .def_readwrite("n", &GnpqParams::n)
      .def_readwrite("p", &GnpqParams::p)
      .def_readwrite("q", &GnpqParams::q)
      .def_readwrite("seed", &GnpqParams::seed);

  py::class_<CliqueDomainConfig>(m, "CliqueDomainConfig")
      .def(py::init<>())
      .def_readwrite("k", &CliqueDomainConfig::k)
      .def_readwrite("s", &CliqueDomainConfig::s)
      .def_readwrite("s_cap", &CliqueDomainConfig::s_cap)
      .def_readwrite("budget", &CliqueDomainConfig::budget)
      .def_readwrite("seed", &CliqueDomainConfig::seed)
      .def_readwrite("zero_tol", &CliqueDomainConfig::zero_tol);

  py::class_<GreedyCliqueStats>(m, "GreedyCliqueStats")
      .def_readonly("removed", &GreedyCliqueStats::removed)
      .def_readonly("leftover", &GreedyCliqueStats::leftover)
      .def_readonly("s_used", &GreedyCliqueStats::s_used)
      .def_readonly("budget_used", &GreedyCliqueStats::budget_used)
      .def_readonly("domains", &GreedyCliqueStats::domains);

  py::class_<MaxDomainCheck>(m, "MaxDomainCheck")
      .def_readonly("max_size", &MaxDomainCheck::max_size)
      .def_readonly("bound", &MaxDomainCheck::bound)
      .def_readonly("ok", &MaxDomainCheck::ok);

  py::class_<EigenvectorStats>(m, "EigenvectorStats")
      .def_readonly("index", &EigenvectorStats::index)
      .def_readonly("paths", &EigenvectorStats::paths)
      .def_readonly("N_heur", &EigenvectorStats::N_heur)
      .def_readonly("clique_count", &EigenvectorStats::clique_count)
      .def_readonly("leftover", &EigenvectorStats::leftover)
      .def_readonly("max_size", &EigenvectorStats::max_size)
      .def_readonly("bound", &EigenvectorStats::bound)
      .def_readonly("bound_ok", &EigenvectorStats::bound_ok)
      .def_readonly("path_trivial", &EigenvectorStats::path_trivial);

  py::class_<ExperimentRecord>(m, "ExperimentRecord")
      .def_readonly("seed", &ExperimentRecord::seed)
      .def_readonly("stats", &ExperimentRecord::stats);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("clique", &ExperimentConfig::clique)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("nodal_restarts", &ExperimentConfig::nodal_restarts)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("params", &ExperimentResult::params)
      .def_readonly("k", &ExperimentResult::k)
      .def_readonly("s", &ExperimentResult::s)
      .def_readonly("budget", &ExperimentResult::budget)
      .def_readonly("trials", &ExperimentResult::trials)
      .def_readonly("records", &ExperimentResult::records)
      .def_readonly("path_trivial_rate", &ExperimentResult::path_trivial_rate)
      .def_readonly("bound_ok_rate", &ExperimentResult::bound_ok_rate)
      .def_readonly("mean_clique_over_n", &ExperimentResult::mean_clique_over_n)
      .def_readonly("mean_leftover_over_n", &ExperimentResult::mean_leftover_over_n)
      .def_readonly("mean_N_over_n_log_n", &ExperimentResult::mean_N_over_n_log_n);

  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("purpose"));
  m.def(
      "sample_gnpq",
      [](const GnpqParams& params) {
        auto [G, M] = sample_gnpq(params);
        return std::make_pair(G, M.mat());
      },
      py::arg("params"), "Returns (graph, matrix) for the sampled G(n, p, q).");
  m.def("clique_domain_present", &clique_domain_present, py::arg("graph"), py::arg("phi"),
        py::arg("candidates"), py::arg("k"), py::arg("zero_tol") = -1.0);
  m.def("find_clique_domain", &find_clique_domain, py::arg("graph"), py::arg("phi"),
        py::arg("candidates"), py::arg("k"), py::arg("zero_tol") = -1.0);
  m.def("validate_clique_domains", &validate_clique_domains, py::arg("graph"), py::arg("phi"),
        py::arg("domains"), py::arg("k"), py::arg("zero_tol") = -1.0);
  m.def("resolve_scan_size", &resolve_scan_size, py::arg("params"), py::arg("config"));
  m.def("greedy_clique_partition", &greedy_clique_partition, py::arg("graph"), py::arg("phi"),
        py::arg("params"), py::arg("config"));
  m.def("max_domain_size_bound_check", &max_domain_size_bound_check, py::arg("graph"),
        py::arg("phi"), py::arg("p_and_q"),
        py::arg("convention") = SignConvention::adjacency_like, py::arg("zero_tol") = -1.0);
  m.def("path_triviality_scan", &path_triviality_scan, py::arg("graph"), py::arg("spectrum"),
        py::arg("zero_tol") = -1.0);
  m.def(
      "run_experiment",
      [](const GnpqParams& params, const ExperimentConfig& config) {
        return run_experiment(params, config);
      },
      py::arg("params"), py::arg("config") = ExperimentConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def("experiment_csv", &experiment_csv, py::arg("result"));
  m.def("experiment_json", &experiment_json, py::arg("result"));

  m.def(
      "read_input_matrix", [](const std::string& path) { return read_input_matrix(path).mat(); },
      py::arg("path"), "Reads a Matrix Market symmetric file or a signed edge list.");
}
