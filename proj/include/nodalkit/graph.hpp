#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodalkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// State vector over {+1, -1}. Entries of 0 are allowed only where a caller
/// explicitly works with restricted supports.
using State = std::vector<int>;

/// Dense symmetric matrix. Construction validates symmetry and rejects
/// non-symmetric input, reporting the first offending index pair.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Matrix m, double sym_tol = 1e-12);

  int n() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

 private:
  Matrix mat_;
};

/// Undirected signed edge, u < v, sign in {+1, -1}.
struct Edge {
  int u;
  int v;
  int sign;
};

/// Signed graph of a symmetric matrix: vertices [0, n), edge (i, j) wherever
/// |M_ij| > zero_tol for i != j, carrying sign sigma_ij = -sgn(M_ij).
struct SignedGraph {
  int n = 0;
  std::vector<Edge> edges;  // sorted lexicographically by (u, v)
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, sign), sorted

  int sign(int i, int j) const;  // 0 when (i, j) is not an edge
  bool has_edge(int i, int j) const { return sign(i, j) != 0; }
};

struct GraphInvariants {
  int n = 0;
  int e = 0;
  int kappa = 0;  // connected components
  int nu = 0;     // cyclomatic number e - n + kappa
  int e_pos = 0;  // edges with sigma = +1
  int e_neg = 0;  // edges with sigma = -1
};

struct FrustrationResult {
  int f = 0;        // frustrated edge count of `state`
  State state;      // witnessing state, state[0] = +1
  bool certified = false;  // true when f is the exact frustration index
};

SignedGraph from_symmetric_matrix(const SymmetricMatrix& M, double zero_tol = 0.0);

/// Builds a signed graph directly from an edge list.
SignedGraph make_signed_graph(int n, std::vector<Edge> edges);

/// Canonical symmetric matrix of a signed graph: M_ij = -sigma_ij on edges,
/// zero elsewhere (so that from_symmetric_matrix round-trips the signs).
SymmetricMatrix canonical_matrix(const SignedGraph& G);

/// Connected components, ordered by smallest contained vertex; vertices
/// within each component sorted ascending.
std::vector<std::vector<int>> connected_components(const SignedGraph& G);

/// Components of the subgraph induced on `subset` (same ordering contract).
std::vector<std::vector<int>> connected_components(const SignedGraph& G,
                                                   const std::vector<int>& subset);

GraphInvariants graph_invariants(const SignedGraph& G);

/// Number of edges with sigma_ij * state_i * state_j < 0.
int frustrated_edge_count(const SignedGraph& G, const State& state);

/// Exact frustration index by branch and bound over states with state[0] = +1.
/// Ties between optimal states resolve to the lexicographically smallest one
/// (+1 ordered before -1). Throws std::invalid_argument when G.n > cap.
FrustrationResult frustration_index_exact(const SignedGraph& G, int cap = 24);

/// Seeded local search (greedy flips with random restarts). Deterministic for
/// a fixed seed; returns an upper bound witness, certified = false.
FrustrationResult frustration_index_heuristic(const SignedGraph& G, std::uint64_t seed,
                                              int restarts = 16);

/// Switched graph: sigma'_ij = sigma_ij * state_i * state_j.
SignedGraph switch_graph(const SignedGraph& G, const State& state);

/// Switched matrix D M D with D = diag(state).
SymmetricMatrix switch_matrix(const SymmetricMatrix& M, const State& state);

}  // namespace nodalkit
