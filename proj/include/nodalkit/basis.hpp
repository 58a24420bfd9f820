#pragma once

#include "nodalkit/nodal.hpp"
#include "nodalkit/rational.hpp"
#include "nodalkit/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nodalkit {

/// Arithmetic backend selection for the eigenspace analysis and the signed
/// basis construction.  kAuto upgrades to exact rationals when the matrix has
/// integer entries, lambda admits a small rational form and the rational
/// nullity of M - lambda I matches the numerical multiplicity; otherwise it
/// falls back to floating point.
enum class NumericsMode { kAuto, kFloat, kExact };

/// Caller-supplied block basis for one Y part.  `vertices` identifies the part
/// (any order); `basis` rows follow the part's vertices sorted ascending and
/// columns must span the same subspace as the automatic basis, be pairwise
/// orthogonal and vanish nowhere.
struct PsiOverrideEntry {
  std::vector<int> vertices;
  Matrix basis;
};

struct AnalyzeOptions {
  double zero_tol = -1.0;   // entry zero guard; < 0 selects the scaled default
  NumericsMode mode = NumericsMode::kAuto;
  double rref_guard = 1e-11;  // relative pivot threshold for float elimination
  std::vector<PsiOverrideEntry> psi_override;
};

/// Flat coefficient label alpha_sigma^j (0-based block j, 0-based sigma).
struct VarRef {
  int j = 0;
  int sigma = 0;
  friend bool operator==(const VarRef& a, const VarRef& b) {
    return a.j == b.j && a.sigma == b.sigma;
  }
};

/// Combinatorial and linear-algebraic structure of one eigenspace:
/// the common zero set, its parts, the block bases, and the reduced
/// coefficient constraint system.
struct EigenspaceStructure {
  double lambda = 0;
  int k = 0;
  int r = 0;
  std::vector<int> i0;  // common zeros of the eigenspace, ascending

  // Connected parts of G[i0] (X) and G[[n] \ i0] (Y) in construction order:
  // X starts at the part holding the smallest vertex and grows connectedly in
  // the part graph H, preferring low H-degree then low minimum vertex; Y is
  // sorted by (v(j), H-degree, minimum vertex).
  std::vector<std::vector<int>> X_parts;
  std::vector<std::vector<int>> Y_parts;
  std::vector<std::pair<int, int>> H_edges;  // (x index, y index), lex sorted
  std::vector<int> u;                        // per X part: smallest adjacent y index
  std::vector<int> v;                        // per Y part: smallest adjacent x index

  // Per-part orthogonal, nowhere-vanishing bases of the eigenspace projection
  // onto Y_j. Rows follow sorted(Y_j); psi[j] has r_j columns.
  std::vector<Matrix> psi;
  std::vector<int> r_j;
  std::vector<int> var_offset;  // flat offset of block j's coefficients

  // Reduced coefficient constraints: gamma x r_hat RREF of the rows demanding
  // (M x)_i = 0 for i in i0, columns in flat (j, sigma) order; pivot columns
  // are the ones claimed when sweeping flat indices from the largest down.
  std::vector<VarRef> pivots;  // ascending flat order
  Matrix coeffs;
  int gamma = 0;

  // Diagnostics of the block-diagonal comparison matrix.
  int k_hat = 0;
  int r_hat = 0;
  int f_hat = 0;    // positive off-diagonal pairs inside the Y blocks
  int f_tilde = 0;  // positive pairs within X_i and between X_i and Y_{u(i)}

  // Per X part: lexicographically smallest adjacent pair (a in X_i,
  // b in Y_{u(i)}); the sign of a signing on X_i is copied from phi(b).
  std::vector<int> anchor_a;
  std::vector<int> anchor_b;

  // Blocks without pivots, ascending (j_1 < j_2 < ...); the first
  // q - gamma of them drive the sign constraints.
  std::vector<int> pivot_free_blocks;
  // Per m in [0, q - gamma): lexicographically smallest adjacent pair across
  // (Y_{j_m}, X_{v(j_m)}). Entries are -1 for m = 0 (no constraint there).
  std::vector<int> a_m;
  std::vector<int> b_m;

  bool exact = false;  // rational backend produced the data below
  std::vector<std::vector<std::vector<Rational>>> psi_exact;
  std::vector<std::vector<Rational>> coeffs_exact;

  int flat_index(int j, int sigma) const { return var_offset[j] + sigma; }
  int num_vars() const { return r_hat; }
};

/// Role of each flat coefficient in constructing one basis vector.
enum class CoeffRole : std::uint8_t {
  kEliminated,  // pivot, determined by the RREF formulas
  kSignForced,  // last coefficient of a sign-constrained block
  kOrthogonal,  // solved from the orthogonality system
  kFree,        // canonical small integer
};

struct CoefficientAssignment {
  std::vector<double> alpha;    // flat (j, sigma) order
  std::vector<CoeffRole> role;  // same order
};

struct SignedBasisVector {
  Vector phi;   // unit eigenvector, original frame
  State eps;    // compatible signing: eps_i = sgn(phi_i) wherever phi_i != 0
  int bound = 0;  // k + (s - 1) + f for the s-th vector
  int N = 0;      // achieved nodal count of eps (within the caps)
  bool N_exact = false;
  std::vector<std::vector<int>> partition;
  CoefficientAssignment coeffs;  // in the switched frame
  std::vector<Rational> phi_exact;  // unnormalised, exact backend only
};

struct SignedBasisResult {
  double lambda = 0;
  int k = 0;
  int r = 0;
  int f = 0;
  bool f_exact = false;
  State switch_state;  // diagonal signs used to reach the f-minimal form
  bool exact_backend = false;
  EigenspaceStructure structure;  // analysis of the switched matrix
  std::vector<SignedBasisVector> vectors;
};

struct ConstructionConfig {
  AnalyzeOptions analyze;
  int frustration_cap = 24;        // exact frustration search bound
  std::uint64_t seed = 0;          // heuristic fallbacks and psi repairs
  int candidate_limit = 64;        // canonical scan 1..limit, then -1..-limit
  int max_repair_rounds = 40;      // zero-repair shrink attempts
  bool compute_partitions = true;  // attach achieved decompositions
  int nodal_cap = 20;              // exact partition search bound
  double nodal_budget_sec = 10.0;
  int nodal_restarts = 16;
};

struct StrongSupportVector {
  Vector phi;      // unit eigenvector, original frame
  int support = 0;
  int bound = 0;  // k + (s - 1) + f for the s-th vector
};

struct StrongSupportResult {
  double lambda = 0;
  int k = 0;
  int r = 0;
  int f = 0;
  bool f_exact = false;
  State switch_state;
  std::vector<StrongSupportVector> vectors;
};

struct ValidationOptions {
  double zero_tol = -1.0;
  double orth_tol = 1e-8;      // pairwise dot / unit-norm residual
  double residual_tol = 1e-7;  // |(M - lambda) phi|_2, relative
  int frustration_cap = 24;
  int nodal_cap = 20;
  double nodal_budget_sec = 10.0;
  std::uint64_t seed = 0;
};

struct ValidationReport {
  std::vector<BoundReport> reports;  // per vector; upper = k + (s-1) + f
  bool orthonormal = false;
  bool residual_ok = false;
  bool sign_compatible = false;   // eps matches sgn(phi) off the zero set
  bool partitions_valid = false;  // listed parts connected, internally good
  bool bounds_hold = false;       // every N within its per-vector bound
  bool all_ok = false;
  double max_orth_residual = 0;
  double max_eigen_residual = 0;
  std::vector<std::string> messages;
};

struct PerturbationReport {
  int trials = 0;
  int passed = 0;
  double fraction = 0;
  double upsilon = 0;  // rotation angle scale actually used
};

EigenspaceStructure analyze_eigenspace(const SymmetricMatrix& M, const EigenGroup& group,
                                       const AnalyzeOptions& opts = {});
EigenspaceStructure analyze_eigenspace(const SymmetricMatrix& M, const Spectrum& spec,
                                       const EigenGroup& group, const AnalyzeOptions& opts = {});

/// Builds an orthogonal eigenspace basis phi_1..phi_r with compatible signings
/// eps_s satisfying N(eps_s) <= k + (s-1) + f.  The matrix is switched
/// internally to an f-minimal form and every output is switched back.
SignedBasisResult construct_signed_basis(const SymmetricMatrix& M, const EigenGroup& group,
                                         const ConstructionConfig& cfg = {});
SignedBasisResult construct_signed_basis(const SymmetricMatrix& M, const Spectrum& spec,
                                         const EigenGroup& group,
                                         const ConstructionConfig& cfg = {});

/// Orthogonal eigenspace basis with support sizes |supp(phi_s)| <= the strong
/// nodal bound's witness structure: each vector minimises support greedily
/// subject to orthogonality, certifying N^s(phi_s) related counts.
StrongSupportResult construct_strong_support_basis(const SymmetricMatrix& M,
                                                   const EigenGroup& group,
                                                   const ConstructionConfig& cfg = {});
StrongSupportResult construct_strong_support_basis(const SymmetricMatrix& M, const Spectrum& spec,
                                                   const EigenGroup& group,
                                                   const ConstructionConfig& cfg = {});

ValidationReport validate_signed_basis(const SymmetricMatrix& M, const EigenGroup& group,
                                       const SignedBasisResult& result,
                                       const ValidationOptions& opts = {});

/// Applies `trials` random compositions of C(r, 2) plane rotations with
/// angles uniform in [-upsilon, upsilon], where upsilon = upsilon_scale *
/// 2^{-C(r,2)} * (smallest nonzero entry magnitude), and reports the fraction
/// of trials preserving every vector's sign pattern.
PerturbationReport perturbation_stability_test(const SignedBasisResult& result,
                                               double upsilon_scale = 1.0, int trials = 64,
                                               std::uint64_t seed = 0, double zero_tol = -1.0);

}  // namespace nodalkit
