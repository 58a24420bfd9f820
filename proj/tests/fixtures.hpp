#pragma once

#include "nodalkit/graph.hpp"

#include <utility>
#include <vector>

namespace fixtures {

// 16x16 integer symmetric matrix whose zero eigenvalue has index 7 and
// multiplicity 6. Used as the golden structure fixture throughout the tests.
inline nodalkit::SymmetricMatrix golden16() {
  nodalkit::Matrix m = nodalkit::Matrix::Zero(16, 16);
  for (int i : {1, 2, 5, 10, 11, 12}) m(i - 1, i - 1) = -1;  // 1-indexed diagonal entries
  auto set = [&](int i, int j, double v) {
    m(i - 1, j - 1) = v;
    m(j - 1, i - 1) = v;
  };
  set(6, 9, 1);
  set(15, 16, 1);
  const std::vector<std::pair<int, int>> neg = {
      {1, 2},  {1, 5},  {2, 5},   {3, 8},   {4, 8},   {5, 6},   {5, 9},   {6, 7},
      {6, 11}, {8, 11}, {9, 10},  {9, 13},  {9, 14},  {10, 11}, {10, 12}, {10, 15},
      {10, 16}, {11, 12}, {11, 15}, {11, 16}, {12, 15}, {12, 16}};
  for (auto [i, j] : neg) set(i, j, -1);
  return nodalkit::SymmetricMatrix(std::move(m));
}

// Laplacian of the star K_{1,n-1} with the hub at vertex 0.
inline nodalkit::SymmetricMatrix star_laplacian(int n) {
  nodalkit::Matrix m = nodalkit::Matrix::Zero(n, n);
  m(0, 0) = n - 1;
  for (int i = 1; i < n; ++i) {
    m(i, i) = 1;
    m(0, i) = m(i, 0) = -1;
  }
  return nodalkit::SymmetricMatrix(std::move(m));
}

// Negative adjacency matrix of the path on n vertices.
inline nodalkit::SymmetricMatrix path_negative_adjacency(int n) {
  nodalkit::Matrix m = nodalkit::Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = -1;
  return nodalkit::SymmetricMatrix(std::move(m));
}

}  // namespace fixtures
