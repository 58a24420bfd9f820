#pragma once

#include "nodalkit/graph.hpp"

#include <vector>

namespace nodalkit {

/// Full spectral decomposition with eigenvalues sorted ascending and a
/// deterministic eigenvector sign convention: in each column the entry of
/// largest magnitude (smallest index on ties) is made positive.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;       // orthonormal columns
  double residual_norm = 0;  // max_i |M v_i - lambda_i v_i|_2
};

/// A group of numerically equal eigenvalues.
struct EigenGroup {
  double lambda = 0;  // mean of the grouped eigenvalues
  int k = 0;          // 1-based index: 1 + #eigenvalues strictly below the group
  int r = 0;          // multiplicity
  int first = 0;      // first column of the group in Spectrum (0-based)
};

Spectrum eigendecompose(const SymmetricMatrix& M);

/// Groups consecutive eigenvalues whose gap is at most
/// group_tol * max(1, spectral radius).
std::vector<EigenGroup> group_eigenvalues(const Spectrum& spec, double group_tol = 1e-8);

/// Default zero tolerance for eigenvector entries: 1e-9 * |x|_inf.
double default_zero_tol(const Vector& x);

/// Indices i with |x_i| <= zero_tol (pass zero_tol < 0 for the default).
std::vector<int> vanishing_set(const Vector& x, double zero_tol = -1.0);

/// The n x r orthonormal basis of the group's eigenspace.
Matrix group_basis(const Spectrum& spec, const EigenGroup& g);

/// Common zeros i0(lambda) of the whole eigenspace: indices whose row in the
/// group basis has norm <= zero_tol * sqrt(r). Pass zero_tol < 0 to use
/// 1e-9 * (largest row norm).
std::vector<int> eigenspace_common_zeros(const Spectrum& spec, const EigenGroup& g,
                                         double zero_tol = -1.0);

}  // namespace nodalkit
