#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nodalkit/rational.hpp"

namespace nodalkit {

/// Scalar policy for the templated linear algebra below.  The double
/// instantiation treats magnitudes below a relative guard as zero; the
/// Rational instantiation is exact and ignores the guard.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x, double guard) { return std::abs(x) <= guard; }
  static int sgn(double x, double guard) {
    if (std::abs(x) <= guard) return 0;
    return x > 0 ? 1 : -1;
  }
  static double abs_approx(double x) { return std::abs(x); }
};

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x, double) { return x == 0; }
  static int sgn(const Rational& x, double) {
    if (x == 0) return 0;
    return x > 0 ? 1 : -1;
  }
  static double abs_approx(const Rational& x) { return std::abs(to_double(x)); }
};

/// Dense row-major matrix over an arbitrary field scalar.
template <class F>
struct FMat {
  int rows = 0;
  int cols = 0;
  std::vector<F> a;

  FMat() = default;
  FMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, F(0)) {}

  F& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const F& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

template <class F>
F dot_columns(const FMat<F>& m, int c1, int c2) {
  F acc(0);
  for (int i = 0; i < m.rows; ++i) acc += m(i, c1) * m(i, c2);
  return acc;
}

template <class F>
double column_scale(const FMat<F>& m, int c) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) best = std::max(best, FieldTraits<F>::abs_approx(m(i, c)));
  return best;
}

/// Reduced row echelon form with a caller-supplied column visiting order.
/// Pivot rows are swapped to the top in discovery order, pivots normalised to
/// one and eliminated from every other row.  Returns the pivot columns in the
/// order they were claimed.  `guard` is a relative zero threshold for the
/// double instantiation (scaled by the largest initial magnitude).
template <class F>
std::vector<int> rref_ordered(FMat<F>& m, const std::vector<int>& column_order, double guard) {
  double scale = 0.0;
  for (const F& x : m.a) scale = std::max(scale, FieldTraits<F>::abs_approx(x));
  const double eff = FieldTraits<F>::exact ? 0.0 : guard * std::max(1.0, scale);

  std::vector<int> pivot_cols;
  int next_row = 0;
  for (int col : column_order) {
    if (next_row >= m.rows) break;
    int pr = -1;
    if constexpr (FieldTraits<F>::exact) {
      for (int i = next_row; i < m.rows; ++i) {
        if (m(i, col) != 0) {
          pr = i;
          break;
        }
      }
    } else {
      double best = eff;
      for (int i = next_row; i < m.rows; ++i) {
        double v = FieldTraits<F>::abs_approx(m(i, col));
        if (v > best) {
          best = v;
          pr = i;
        }
      }
    }
    if (pr < 0) continue;
    if (pr != next_row) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(pr, j), m(next_row, j));
    }
    F inv = F(1) / m(next_row, col);
    for (int j = 0; j < m.cols; ++j) m(next_row, j) = m(next_row, j) * inv;
    m(next_row, col) = F(1);
    for (int i = 0; i < m.rows; ++i) {
      if (i == next_row) continue;
      F factor = m(i, col);
      if (FieldTraits<F>::is_zero(factor, eff)) {
        m(i, col) = F(0);
        continue;
      }
      for (int j = 0; j < m.cols; ++j) m(i, j) = m(i, j) - factor * m(next_row, j);
      m(i, col) = F(0);
    }
    pivot_cols.push_back(col);
    ++next_row;
  }
  return pivot_cols;
}

/// Basis of the nullspace of m (columns of the result), via RREF in natural
/// column order.  Free variables are set to one, one at a time.
template <class F>
FMat<F> nullspace(FMat<F> m, double guard) {
  std::vector<int> order(m.cols);
  for (int j = 0; j < m.cols; ++j) order[j] = j;
  std::vector<int> pivots = rref_ordered(m, order, guard);
  std::vector<int> pivot_of_col(m.cols, -1);
  for (size_t k = 0; k < pivots.size(); ++k) pivot_of_col[pivots[k]] = static_cast<int>(k);

  std::vector<int> free_cols;
  for (int j = 0; j < m.cols; ++j) {
    if (pivot_of_col[j] < 0) free_cols.push_back(j);
  }
  FMat<F> basis(m.cols, static_cast<int>(free_cols.size()));
  for (size_t t = 0; t < free_cols.size(); ++t) {
    int fc = free_cols[t];
    basis(fc, static_cast<int>(t)) = F(1);
    for (int j = 0; j < m.cols; ++j) {
      int pr = pivot_of_col[j];
      if (pr >= 0) basis(j, static_cast<int>(t)) = -m(pr, fc);
    }
  }
  return basis;
}

/// Solves the square system a x = b by Gaussian elimination.  Returns false
/// when the matrix is singular at the working precision.
template <class F>
bool solve_square(FMat<F> a, std::vector<F> b, std::vector<F>& x, double guard) {
  const int n = a.rows;
  if (n != a.cols || static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_square: shape mismatch");
  double scale = 0.0;
  for (const F& v : a.a) scale = std::max(scale, FieldTraits<F>::abs_approx(v));
  const double eff = FieldTraits<F>::exact ? 0.0 : guard * std::max(1.0, scale);

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int pr = -1;
    if constexpr (FieldTraits<F>::exact) {
      for (int i = col; i < n; ++i) {
        if (a(i, col) != 0) {
          pr = i;
          break;
        }
      }
    } else {
      double best = eff;
      for (int i = col; i < n; ++i) {
        double v = FieldTraits<F>::abs_approx(a(i, col));
        if (v > best) {
          best = v;
          pr = i;
        }
      }
    }
    if (pr < 0) return false;
    if (pr != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pr, j), a(col, j));
      std::swap(b[pr], b[col]);
    }
    for (int i = col + 1; i < n; ++i) {
      if (FieldTraits<F>::is_zero(a(i, col), eff)) continue;
      F factor = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) = a(i, j) - factor * a(col, j);
      b[i] = b[i] - factor * b[col];
    }
  }
  x.assign(n, F(0));
  for (int i = n - 1; i >= 0; --i) {
    F acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return true;
}

}  // namespace nodalkit
