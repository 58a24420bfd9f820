#include "nodalkit/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nodalkit {

Spectrum eigendecompose(const SymmetricMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: solver failed to converge");
  }
  Spectrum spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();
  const int n = M.n();
  for (int c = 0; c < n; ++c) {
    int arg = 0;
    double mx = -1.0;
    for (int i = 0; i < n; ++i) {
      double a = std::abs(spec.eigenvectors(i, c));
      if (a > mx) {
        mx = a;
        arg = i;
      }
    }
    if (spec.eigenvectors(arg, c) < 0) spec.eigenvectors.col(c) = -spec.eigenvectors.col(c);
  }
  double worst = 0;
  for (int c = 0; c < n; ++c) {
    double res =
        (M.mat() * spec.eigenvectors.col(c) - spec.eigenvalues[c] * spec.eigenvectors.col(c))
            .norm();
    worst = std::max(worst, res);
  }
  spec.residual_norm = worst;
  return spec;
}

std::vector<EigenGroup> group_eigenvalues(const Spectrum& spec, double group_tol) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  if (n == 0) return {};
  const double rho = std::max(std::abs(spec.eigenvalues[0]), std::abs(spec.eigenvalues[n - 1]));
  const double tol = group_tol * std::max(1.0, rho);
  std::vector<EigenGroup> groups;
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || spec.eigenvalues[i] - spec.eigenvalues[i - 1] > tol) {
      EigenGroup g;
      g.first = start;
      g.r = i - start;
      g.k = start + 1;
      g.lambda = spec.eigenvalues.segment(start, g.r).mean();
      groups.push_back(g);
      start = i;
    }
  }
  return groups;
}

double default_zero_tol(const Vector& x) { return 1e-9 * x.cwiseAbs().maxCoeff(); }

std::vector<int> vanishing_set(const Vector& x, double zero_tol) {
  if (zero_tol < 0) zero_tol = default_zero_tol(x);
  std::vector<int> out;
  for (int i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) <= zero_tol) out.push_back(i);
  }
  return out;
}

Matrix group_basis(const Spectrum& spec, const EigenGroup& g) {
  return spec.eigenvectors.middleCols(g.first, g.r);
}

std::vector<int> eigenspace_common_zeros(const Spectrum& spec, const EigenGroup& g,
                                         double zero_tol) {
  Matrix B = group_basis(spec, g);
  Vector row_norms(B.rows());
  for (int i = 0; i < B.rows(); ++i) row_norms[i] = B.row(i).norm();
  if (zero_tol < 0) zero_tol = 1e-9 * row_norms.maxCoeff();
  std::vector<int> out;
  const double thr = zero_tol * std::sqrt(static_cast<double>(g.r));
  for (int i = 0; i < B.rows(); ++i) {
    if (row_norms[i] <= thr) out.push_back(i);
  }
  return out;
}

}  // namespace nodalkit
