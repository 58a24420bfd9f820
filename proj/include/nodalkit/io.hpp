#pragma once

#include "nodalkit/basis.hpp"
#include "nodalkit/experiments.hpp"
#include "nodalkit/graph.hpp"
#include "nodalkit/nodal.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace nodalkit {

/// Signed edge-list text format: a header line "n m", then m lines "i j s"
/// with 0-based vertex ids and s in {+1, -1}. Blank lines and lines starting
/// with '#' are ignored. Errors carry 1-based line numbers.
SignedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const SignedGraph& G);

/// Matrix Market coordinate format, symmetric real/integer; entries are
/// 1-based and only one triangle is stored. Errors carry line numbers.
Matrix read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const SymmetricMatrix& M);

/// Reads a matrix from `path`: Matrix Market when the file opens with a
/// %%MatrixMarket banner, otherwise the signed edge-list format (mapped to
/// its canonical matrix). Throws std::runtime_error with diagnostics.
SymmetricMatrix read_input_matrix(const std::string& path);

/// Frozen single-object serializations.
/// BoundReport: {"k","r","nu","f","N","exactN","lower","upper","satisfied"}.
std::string bound_report_json(const BoundReport& rep);
/// SignedBasisResult: {"eigenvalue","k","r","f","vectors"} with per-vector
/// {"phi","eps","partition","bound","N"}.
std::string signed_basis_result_json(const SignedBasisResult& res);

/// One full command invocation. Exactly one input source may be set: an
/// input path (analyze, construct-basis, frustration, nodal) or G(n, p, q)
/// parameters (experiment).
struct RunConfig {
  std::string command;  // analyze | construct-basis | experiment | frustration | nodal
  std::string input_path;
  GnpqParams gnpq;
  bool has_gnpq = false;

  double zero_tol = -1.0;
  double group_tol = 1e-8;
  SignConvention convention = SignConvention::laplacian_like;
  int exact_cap_frustration = 24;
  int exact_cap_nodal = 20;
  std::uint64_t seed = 0;

  int clique_k = 2;       // experiment
  int scan_s = 0;         // experiment; 0 = default
  int trials = 1;         // experiment
  int index = -1;         // nodal: eigenvector column
  int perturb_trials = 0; // construct-basis: 0 disables the stability test

  std::string out_path;   // empty: write to `out`
  std::string format = "json";  // json | csv | text
};

/// Executes the command, writing the primary document to `out` (or
/// config.out_path when set) and diagnostics to `err`.
/// Exit code contract: 0 when no bound violation and no error occurred,
/// 1 when a verified bound or validation failed, 2 on any error.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace nodalkit
