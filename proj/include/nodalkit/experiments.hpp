#pragma once

#include "nodalkit/nodal.hpp"
#include "nodalkit/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nodalkit {

/// G(n, p, q) sampling parameters: each unordered pair {i, j} independently
/// carries a +1 edge with probability p, a -1 edge with probability q, and no
/// edge otherwise.
struct GnpqParams {
  int n = 0;
  double p = 0;
  double q = 0;
  std::uint64_t seed = 0;
};

/// Clique-domain scan configuration. Scans s-subsets of the remaining
/// vertices for k-cliques whose edges are all good in the adjacency
/// convention (M_uv x_u x_v > 0).
struct CliqueDomainConfig {
  int k = 2;
  int s = 0;                // 0: default ceil((p^q)^-k), capped at min(n/4, s_cap)
  int s_cap = 30;           // enumeration stays desk-scale under this cap
  long long budget = -1;    // consecutive failed scans allowed; -1: 200 * n / s
  std::uint64_t seed = 0;
  double zero_tol = -1.0;   // entries at or below are excluded from cliques
};

struct GreedyCliqueStats {
  int removed = 0;    // clique domains removed
  int leftover = 0;   // vertices never covered (n - removed * k)
  int s_used = 0;
  long long budget_used = 0;  // longest failure streak reached
  std::vector<std::vector<int>> domains;  // removed cliques, each sorted
};

struct MaxDomainCheck {
  int max_size = 0;  // largest all-good connected sign-compatible part found
  int bound = 0;     // ceil(3 * log_{1/(1-(p^q))} n)
  bool ok = false;   // max_size <= bound
};

/// Per-eigenvector measurements. `paths` holds the literal sign-graph counts
/// of (M, phi): kappa_gt is the component count of the graph on all n
/// vertices with edges M_uv phi_u phi_v > 0 (the good-edge graph in the
/// adjacency convention).
struct EigenvectorStats {
  int index = 0;  // eigenvector column, ascending eigenvalue order
  PathDomainCounts paths;
  int N_heur = 0;        // heuristic minimal decomposition of the support
  int clique_count = 0;  // greedy clique domains removed
  int leftover = 0;
  int max_size = 0;
  int bound = 0;
  bool bound_ok = false;
  bool path_trivial = false;  // kappa_gt == 1
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  EigenvectorStats stats;
};

struct ExperimentConfig {
  CliqueDomainConfig clique;
  int trials = 1;          // seeds params.seed, params.seed + 1, ...
  int nodal_restarts = 2;  // restarts of the heuristic decomposition
  int threads = 0;         // 0: NODALKIT_THREADS env or hardware concurrency
};

struct ExperimentResult {
  GnpqParams params;  // params.seed is the base seed
  int k = 0;
  int s = 0;
  long long budget = 0;
  int trials = 0;
  std::vector<ExperimentRecord> records;  // ordered by (seed, index)
  double path_trivial_rate = 0;
  double bound_ok_rate = 0;
  double mean_clique_over_n = 0;   // mean of clique_count / n
  double mean_leftover_over_n = 0;
  // Trend ratio mean(N_heur) / (n / log n); emitted without any assertion.
  double mean_N_over_n_log_n = 0;
};

/// Deterministic sub-seed for a named purpose; order-independent and stable
/// across platforms.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose);

/// Samples G(n, p, q). Each pair decision is keyed by (seed, i, j) through a
/// counter-based generator, so the output is independent of enumeration
/// order and reproducible. The matrix holds the edge signs (+1/-1) with a
/// zero diagonal. Throws std::invalid_argument on parameter violations.
std::pair<SignedGraph, SymmetricMatrix> sample_gnpq(const GnpqParams& params);

/// True iff some k-subset B of S induces a clique with M_uv phi_u phi_v > 0
/// on every pair (adjacency convention). Entries with |phi| <= zero_tol are
/// incompatible with every clique. Enumerates k-subsets with early pruning.
bool clique_domain_present(const SignedGraph& G, const Vector& phi, const std::vector<int>& S,
                           int k, double zero_tol = -1.0);

/// Lexicographically smallest witnessing clique, or nullopt.
std::optional<std::vector<int>> find_clique_domain(const SignedGraph& G, const Vector& phi,
                                                   const std::vector<int>& S, int k,
                                                   double zero_tol = -1.0);

/// Disjointness and all-good-clique validity of removed domains.
bool validate_clique_domains(const SignedGraph& G, const Vector& phi,
                             const std::vector<std::vector<int>>& domains, int k,
                             double zero_tol = -1.0);

/// Scan size actually used for (p, q, n, k): config.s when positive, else
/// ceil((p^q)^-k) capped at min(n/4, config.s_cap); never below k.
int resolve_scan_size(const GnpqParams& params, const CliqueDomainConfig& config);

/// Greedy clique-domain removal: repeatedly scan random s-subsets of the
/// remaining vertices and remove the lexicographically smallest witnessing
/// clique; stop after `budget` consecutive failed scans. Guarantees
/// removed * k + leftover == n.
GreedyCliqueStats greedy_clique_partition(const SignedGraph& G, const Vector& phi,
                                          const GnpqParams& params,
                                          const CliqueDomainConfig& config);

/// Largest sign-compatible all-good induced connected subgraph found by the
/// heuristic decomposition plus a local-growth pass on its largest parts,
/// against the bound ceil(3 * log_{1/(1-p_and_q)} n).
MaxDomainCheck max_domain_size_bound_check(const SignedGraph& G, const Vector& phi,
                                           double p_and_q,
                                           SignConvention conv = SignConvention::adjacency_like,
                                           double zero_tol = -1.0);

/// kappa(G^>_phi) == 1 for every eigenvector column, where G^> has the edges
/// with M_uv phi_u phi_v > 0 on all n vertices.
std::vector<bool> path_triviality_scan(const SignedGraph& G, const Spectrum& spectrum,
                                       double zero_tol = -1.0);

/// Full per-eigenvector program over `trials` consecutive seeds. Trials run
/// in parallel (capped by NODALKIT_THREADS); records are merged in
/// deterministic (seed, index) order regardless of scheduling.
ExperimentResult run_experiment(const GnpqParams& params, const ExperimentConfig& config);

/// CSV summary, one row per record:
/// seed,i,kappa_gt,N_heur,clique_count,leftover,max_size,bound_ok
std::string experiment_csv(const ExperimentResult& result);

/// JSON document: parameters, summary rates, and one record object per
/// (seed, eigen-index).
std::string experiment_json(const ExperimentResult& result);

}  // namespace nodalkit
