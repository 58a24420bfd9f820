#include "doctest.h"
#include "fixtures.hpp"
#include "nodalkit/nodal.hpp"
#include "oracles.hpp"

#include <random>

using namespace nodalkit;

namespace {

SignedGraph random_signed_graph(std::mt19937_64& rng, int n, double edge_p) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::uniform_real_distribution<>(0, 1)(rng) < edge_p) {
        edges.push_back({i, j, (rng() & 1) ? +1 : -1});
      }
    }
  }
  return make_signed_graph(n, edges);
}

Vector random_pattern_vector(std::mt19937_64& rng, int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = (rng() & 1) ? 1.0 : -1.0;
  return x;
}

}  // namespace

TEST_SUITE_BEGIN("nodal");

TEST_CASE("path domain counts on P3") {
  SymmetricMatrix M = fixtures::path_negative_adjacency(3);
  SignedGraph G = from_symmetric_matrix(M);
  Vector phi(3);
  phi << 1.0, 0.0, -1.0;
  PathDomainCounts c = path_domain_counts(G, phi);
  CHECK(c.kappa_lt == 3);  // middle entry vanishes, so no strict edges at all
  CHECK(c.kappa_le == 2);
  CHECK(c.kappa_gt == 3);
  CHECK(c.kappa_ge == 2);
}

TEST_CASE("convention flip swaps the strict counts") {
  std::mt19937_64 rng(5);
  SignedGraph G = random_signed_graph(rng, 9, 0.5);
  Vector x = random_pattern_vector(rng, 9);
  PathDomainCounts lap = path_domain_counts(G, x, SignConvention::laplacian_like);
  PathDomainCounts adj = path_domain_counts(G, x, SignConvention::adjacency_like);
  CHECK(lap.kappa_lt == adj.kappa_gt);
  CHECK(lap.kappa_gt == adj.kappa_lt);
  CHECK(lap.kappa_le == adj.kappa_ge);
  CHECK(lap.kappa_ge == adj.kappa_le);
}

TEST_CASE("exact minimal decomposition matches Bell-number enumeration") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);  // up to 8 vertices
    SignedGraph G = random_signed_graph(rng, n, 0.55);
    Vector x = random_pattern_vector(rng, n);
    auto conv = (trial % 2) ? SignConvention::adjacency_like : SignConvention::laplacian_like;
    auto cls = classify_edges(G, sign_pattern(x), conv);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    int expect = oracles::min_nodal_partition(G, all, cls);
    NodalDecomposition got = minimal_nodal_decomposition_exact(G, x, conv);
    REQUIRE(got.certified_minimal);
    REQUIRE(got.N == expect);
    // Returned parts must be valid under the literal definition too.
    for (const auto& part : got.parts) CHECK(oracles::part_valid(G, part, cls));
    int covered = 0;
    for (const auto& part : got.parts) covered += static_cast<int>(part.size());
    CHECK(covered == n);
  }
}

TEST_CASE("exact decomposition is deterministic") {
  std::mt19937_64 rng(777);
  SignedGraph G = random_signed_graph(rng, 10, 0.5);
  Vector x = random_pattern_vector(rng, 10);
  auto a = minimal_nodal_decomposition_exact(G, x);
  auto b = minimal_nodal_decomposition_exact(G, x);
  CHECK(a.parts == b.parts);
}

TEST_CASE("heuristic decomposition upper-bounds the exact one") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + static_cast<int>(rng() % 7);
    SignedGraph G = random_signed_graph(rng, n, 0.5);
    Vector x = random_pattern_vector(rng, n);
    auto exact = minimal_nodal_decomposition_exact(G, x);
    auto heur = minimal_nodal_decomposition_heuristic(G, x, SignConvention::laplacian_like, 3);
    CHECK(heur.N >= exact.N);
    auto cls = classify_edges(G, sign_pattern(x), SignConvention::laplacian_like);
    for (const auto& part : heur.parts) CHECK(oracles::part_valid(G, part, cls));
  }
}

TEST_CASE("fiedler exactness on path eigenvectors") {
  // Negative adjacency of a path is a generalized Laplacian of an acyclic
  // graph: the k-th eigenvector has exactly k domains.
  const int n = 6;
  SymmetricMatrix M = fixtures::path_negative_adjacency(n);
  SignedGraph G = from_symmetric_matrix(M);
  Spectrum spec = eigendecompose(M);
  for (int k = 1; k <= n; ++k) {
    Vector phi = spec.eigenvectors.col(k - 1);
    auto dec = minimal_nodal_decomposition_exact(G, phi);
    CHECK(dec.N == k);
  }
}

TEST_CASE("vanishing vectors are rejected for full decompositions") {
  SignedGraph G = from_symmetric_matrix(fixtures::path_negative_adjacency(3));
  Vector x(3);
  x << 1.0, 0.0, -1.0;
  CHECK_THROWS_AS(minimal_nodal_decomposition_exact(G, x), std::invalid_argument);
  auto sup = support_nodal_count(G, x);
  CHECK(sup.N == 2);  // two isolated support vertices
}

TEST_CASE("support decomposition matches enumeration on the support") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + static_cast<int>(rng() % 5);
    SignedGraph G = random_signed_graph(rng, n, 0.6);
    Vector x(n);
    int nonzero = 0;
    for (int i = 0; i < n; ++i) {
      int c = static_cast<int>(rng() % 3);
      x[i] = (c == 0) ? 0.0 : (c == 1 ? 1.0 : -1.0);
      nonzero += (c != 0);
    }
    if (nonzero == 0) continue;
    auto cls = classify_edges(G, sign_pattern(x), SignConvention::laplacian_like);
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (x[i] != 0.0) support.push_back(i);
    }
    int expect = oracles::min_nodal_partition(G, support, cls);
    CHECK(support_nodal_count(G, x).N == expect);
  }
}

TEST_CASE("generic bounds hold for small random integer matrices") {
  std::mt19937_64 rng(60601);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + static_cast<int>(rng() % 5);
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 2) {
          double v = static_cast<double>(1 + rng() % 3) * ((rng() & 1) ? 1 : -1);
          m(i, j) = m(j, i) = v;
        }
      }
      m(i, i) = static_cast<double>(static_cast<int>(rng() % 5)) - 2.0;
    }
    SymmetricMatrix M(m);
    SignedGraph G = from_symmetric_matrix(M);
    if (connected_components(G).size() != 1) continue;  // bounds assume irreducible M
    Spectrum spec = eigendecompose(M);
    auto groups = group_eigenvalues(spec);
    for (const auto& g : groups) {
      for (int c = g.first; c < g.first + g.r; ++c) {
        Vector phi = spec.eigenvectors.col(c);
        if (!vanishing_set(phi).empty()) continue;
        BoundReport rep = verify_generic_bounds(M, G, g, phi);
        CHECK(rep.satisfied);
        CHECK(rep.exactN);
        // Eigenvector-dependent refinement of the lower bound.
        RefinedLowerBound ref = refined_lower_bound(G, g, phi);
        CHECK(ref.lower >= rep.lower);
        CHECK(rep.N >= ref.lower);
        // Mohammadian path-domain regressions.
        PathDomainCounts pc = path_domain_counts(G, phi);
        CHECK(pc.kappa_le <= g.k);
        CHECK(pc.kappa_lt <= g.k + g.r - 1);
        CHECK(pc.kappa_lt <= rep.N);
        // Signed-Laplacian inertia bounds.
        InertiaCheckResult ic = inertia_check(M, g, phi);
        CHECK(ic.ok);
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("bound report flags heuristic results above the caps") {
  std::mt19937_64 rng(8);
  SignedGraph G = random_signed_graph(rng, 12, 0.4);
  Vector x = random_pattern_vector(rng, 12);
  SymmetricMatrix M = canonical_matrix(G);
  Spectrum spec = eigendecompose(M);
  auto groups = group_eigenvalues(spec);
  BoundReport rep = verify_generic_bounds(M, G, groups[0], x, SignConvention::laplacian_like,
                                          /*frustration_cap=*/4, /*nodal_cap=*/4);
  CHECK_FALSE(rep.exactN);
}

TEST_SUITE_END();
