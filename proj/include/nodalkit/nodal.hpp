#pragma once

#include "nodalkit/graph.hpp"
#include "nodalkit/spectral.hpp"

#include <cstdint>
#include <vector>

namespace nodalkit {

/// Under laplacian_like, an edge (i, j) is "good" (may lie inside a nodal
/// domain) iff M_ij x_i x_j < 0; adjacency_like flips the requirement to
/// M_ij x_i x_j > 0. The two modes are related by M -> -M.
enum class SignConvention { laplacian_like, adjacency_like };

/// Component counts of the four path-domain graphs of (M, x):
///   kappa_lt: vertices [n],          edges with M_ij x_i x_j < 0
///   kappa_le: vertices [n] \ i0(x),  edges with M_ij x_i x_j <= 0
///   kappa_gt: vertices [n],          edges with M_ij x_i x_j > 0
///   kappa_ge: vertices [n] \ i0(x),  edges with M_ij x_i x_j >= 0
/// Under adjacency_like the product signs are negated first.
struct PathDomainCounts {
  int kappa_lt = 0;
  int kappa_le = 0;
  int kappa_gt = 0;
  int kappa_ge = 0;
};

struct NodalDecomposition {
  std::vector<std::vector<int>> parts;  // sorted by smallest vertex; members ascending
  int N = 0;
  bool certified_minimal = false;
};

/// Bound check for a single non-vanishing eigenvector.
struct BoundReport {
  int k = 0;
  int r = 0;
  int nu = 0;
  int f = 0;
  int N = 0;
  bool exactN = false;  // N certified minimal (and f certified exact)
  int lower = 0;        // k + (r-1) - nu
  int upper = 0;        // k + f
  bool satisfied = false;
};

struct RefinedLowerBound {
  int nu_pos = 0;  // cyclomatic number of the graph of entries with M_ij x_i x_j > 0
  int nu_neg = 0;  // cyclomatic number of the graph of entries with M_ij x_i x_j < 0
  int lower = 0;   // k + (r-1) - nu + nu_pos + nu_neg
};

struct InertiaCheckResult {
  int kappa_pos = 0;  // components of G^> (positive entries of D_x (M - lambda I) D_x)
  int kappa_neg = 0;  // components of G^<
  int bound_pos = 0;  // n - k - r + 1
  int bound_neg = 0;  // k - 1
  bool ok = false;
};

/// Sign pattern of x with entries below zero_tol snapped to 0
/// (zero_tol < 0 uses default_zero_tol).
State sign_pattern(const Vector& x, double zero_tol = -1.0);

PathDomainCounts path_domain_counts(const SignedGraph& G, const Vector& x,
                                    SignConvention conv = SignConvention::laplacian_like,
                                    double zero_tol = -1.0);

/// Core partition search over `subset`. edge_good[e] classifies G.edges[e]:
/// +1 good, -1 bad; edges with an endpoint outside `subset` are ignored.
/// Parts must induce connected good subgraphs containing no bad edge.
NodalDecomposition min_partition_exact(const SignedGraph& G, const std::vector<int>& subset,
                                       const std::vector<std::int8_t>& edge_good, int cap = 20,
                                       double budget_sec = 10.0);
NodalDecomposition min_partition_heuristic(const SignedGraph& G, const std::vector<int>& subset,
                                           const std::vector<std::int8_t>& edge_good,
                                           std::uint64_t seed, int restarts = 8);

/// Edge classification for a sign pattern under a convention.
std::vector<std::int8_t> classify_edges(const SignedGraph& G, const State& pattern,
                                        SignConvention conv);

/// Minimal nodal decomposition N(x) of a non-vanishing x over all of [n].
/// Throws std::invalid_argument when x vanishes somewhere or n > cap.
NodalDecomposition minimal_nodal_decomposition_exact(
    const SignedGraph& G, const Vector& x, SignConvention conv = SignConvention::laplacian_like,
    int cap = 20, double budget_sec = 10.0, double zero_tol = -1.0);

NodalDecomposition minimal_nodal_decomposition_heuristic(
    const SignedGraph& G, const Vector& x, SignConvention conv = SignConvention::laplacian_like,
    std::uint64_t seed = 0, double zero_tol = -1.0);

/// N^s(x): minimal decomposition of the support of x. Uses the exact search
/// when the support size is within cap, otherwise the heuristic.
NodalDecomposition support_nodal_count(const SignedGraph& G, const Vector& x,
                                       SignConvention conv = SignConvention::laplacian_like,
                                       int cap = 20, double budget_sec = 10.0,
                                       double zero_tol = -1.0);

/// Checks k + (r-1) - nu <= N(phi) <= k + f for a non-vanishing eigenvector
/// phi of the group (k, r). f and N are exact within the caps, otherwise
/// heuristic upper estimates (exactN = false).
BoundReport verify_generic_bounds(const SymmetricMatrix& M, const SignedGraph& G,
                                  const EigenGroup& group, const Vector& phi,
                                  SignConvention conv = SignConvention::laplacian_like,
                                  int frustration_cap = 24, int nodal_cap = 20,
                                  double budget_sec = 10.0, double zero_tol = -1.0);

RefinedLowerBound refined_lower_bound(const SignedGraph& G, const EigenGroup& group,
                                      const Vector& phi, double zero_tol = -1.0);

/// Inertia bounds of B = D_phi (M - lambda I) D_phi:
/// kappa_+ - 1 <= n - k - r + 1 and kappa_- - 1 <= k - 1.
InertiaCheckResult inertia_check(const SymmetricMatrix& M, const EigenGroup& group,
                                 const Vector& phi, double zero_tol = -1.0);

}  // namespace nodalkit
