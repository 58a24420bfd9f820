// Acceptance gate. Each criterion prints exactly one line
//   [PASS] criterion N: <name> (<elapsed>s)
//   [FAIL] criterion N: <name> (<detail>)
// Run all criteria with no arguments, or a single one by number (1-8).
// Exit code is the number of failed criteria.

#include "fixtures.hpp"
#include "nodalkit/basis.hpp"
#include "nodalkit/experiments.hpp"
#include "nodalkit/graph.hpp"
#include "nodalkit/nodal.hpp"
#include "nodalkit/spectral.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace nodalkit;

namespace {

std::string fail(const std::string& msg) { return msg; }

template <typename... Args>
std::string failf(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared instance generators
// ---------------------------------------------------------------------------

// Random integer symmetric matrix on 2..10 vertices; nullopt when the signed
// graph is not connected (the bounds assume irreducible input).
std::optional<SymmetricMatrix> random_integer_instance(std::mt19937_64& rng) {
  int n = 2 + static_cast<int>(rng() % 9);
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
  SymmetricMatrix M(std::move(m));
  if (connected_components(from_symmetric_matrix(M)).size() != 1) return std::nullopt;
  return M;
}

// Random integer-weighted tree with a random integer diagonal.
SymmetricMatrix random_tree_instance(std::mt19937_64& rng) {
  int n = 2 + static_cast<int>(rng() % 11);  // 2..12
  Matrix m = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    int p = static_cast<int>(rng() % i);
    double w = static_cast<double>(1 + rng() % 3) * ((rng() & 1) ? 1 : -1);
    m(i, p) = m(p, i) = w;
  }
  for (int i = 0; i < n; ++i)
    m(i, i) = static_cast<double>(static_cast<int>(rng() % 5)) - 2.0;
  return SymmetricMatrix(std::move(m));
}

struct Instance {
  std::string name;
  SymmetricMatrix M;
  bool star = false;
};

Matrix neg_complete_bipartite(int a, int b) {
  int n = a + b;
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < a; ++i)
    for (int j = a; j < n; ++j) m(i, j) = m(j, i) = -1.0;
  return m;
}

Matrix neg_circulant(int n, const std::vector<int>& jumps) {
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int d : jumps) {
      int j = (i + d) % n;
      m(i, j) = m(j, i) = -1.0;
    }
  }
  return m;
}

// 50 matrices with a forced eigenvalue multiplicity: star Laplacians,
// complete bipartite graphs, circulants, and switchings of the reference
// 16-vertex matrix.
std::vector<Instance> forced_multiplicity_instances() {
  std::vector<Instance> out;
  for (int n = 4; n <= 17; ++n)
    out.push_back({"star" + std::to_string(n), fixtures::star_laplacian(n), true});
  const std::pair<int, int> bip[] = {{2, 2}, {2, 3}, {2, 4}, {3, 3}, {2, 5}, {3, 4}, {2, 6},
                                     {3, 5}, {4, 4}, {2, 7}, {3, 6}, {4, 5}, {2, 8}};
  for (auto [a, b] : bip) {
    out.push_back({"bipartite" + std::to_string(a) + "x" + std::to_string(b),
                   SymmetricMatrix(neg_complete_bipartite(a, b))});
  }
  for (int n = 5; n <= 15; ++n)
    out.push_back({"cycle" + std::to_string(n), SymmetricMatrix(neg_circulant(n, {1}))});
  out.push_back({"circulant7-12", SymmetricMatrix(neg_circulant(7, {1, 2}))});
  out.push_back({"circulant9-12", SymmetricMatrix(neg_circulant(9, {1, 2}))});

  SymmetricMatrix base = fixtures::golden16();
  out.push_back({"reference16", base});
  std::mt19937_64 rng(5150);
  for (int t = 0; t < 9; ++t) {
    State st(16);
    for (int i = 0; i < 16; ++i) st[i] = (rng() & 1) ? 1 : -1;
    out.push_back({"reference16-switch" + std::to_string(t), switch_matrix(base, st)});
  }
  return out;
}

AnalyzeOptions reference_overrides() {
  AnalyzeOptions opts;
  PsiOverrideEntry e1, e5;
  e1.vertices = {0, 1, 4};
  e1.basis = Matrix(3, 2);
  e1.basis << 1, -5, 2, 4, -3, 1;
  e5.vertices = {9, 10, 11};
  e5.basis = e1.basis;
  opts.psi_override = {e1, e5};
  return opts;
}

// ---------------------------------------------------------------------------
// Criterion 1: reference 16-vertex reproduction
// ---------------------------------------------------------------------------
std::string criterion1() {
  SymmetricMatrix M = fixtures::golden16();
  SignedGraph G = from_symmetric_matrix(M);
  FrustrationResult f_oracle = oracles::frustration(G);
  if (f_oracle.f != 2) return failf("oracle frustration %d != 2", f_oracle.f);

  Spectrum spec = eigendecompose(M);
  EigenGroup g{};
  bool found = false;
  for (const EigenGroup& gg : group_eigenvalues(spec)) {
    if (std::abs(gg.lambda) < 1e-7) {
      g = gg;
      found = true;
    }
  }
  if (!found) return fail("no zero eigenvalue group");
  if (g.k != 7 || g.r != 6) return failf("zero group (k,r)=(%d,%d), want (7,6)", g.k, g.r);

  EigenspaceStructure s = analyze_eigenspace(M, spec, g, reference_overrides());
  if (!s.exact) return fail("rational backend not engaged");
  if (s.i0 != std::vector<int>{5, 7, 8, 14, 15}) return fail("common zero set mismatch");
  const std::vector<std::vector<int>> wantX = {{5, 8}, {14, 15}, {7}};
  const std::vector<std::vector<int>> wantY = {{0, 1, 4}, {6}, {12},    {13},
                                               {9, 10, 11}, {2}, {3}};
  if (s.X_parts != wantX) return fail("X part ordering mismatch");
  if (s.Y_parts != wantY) return fail("Y block ordering mismatch");
  if (s.gamma != 3) return failf("gamma %d != 3", s.gamma);
  if (s.r_hat != 9) return failf("r_hat %d != 9", s.r_hat);
  const std::vector<VarRef> wantSigma = {{4, 0}, {4, 1}, {6, 0}};
  if (!(s.pivots.size() == 3 && s.pivots[0] == wantSigma[0] && s.pivots[1] == wantSigma[1] &&
        s.pivots[2] == wantSigma[2]))
    return fail("eliminated-coefficient set mismatch");

  // Last elimination row: alpha^7_1 = -3 a^1_1 + a^1_2 + a^2_1 - a^6_1
  // (stored as alpha_pivot = -sum coeff * alpha_free).
  auto co = [&](int row, int j1, int s1) {
    return s.coeffs_exact[row][s.flat_index(j1 - 1, s1 - 1)];
  };
  if (!(co(2, 1, 1) == Rational(3) && co(2, 1, 2) == Rational(-1) &&
        co(2, 2, 1) == Rational(-1) && co(2, 6, 1) == Rational(1) &&
        co(2, 7, 1) == Rational(1) && co(2, 3, 1) == Rational(0) && co(2, 4, 1) == Rational(0)))
    return fail("pivot elimination formula mismatch");

  // The published basis (three eigenvectors with signings and partitions,
  // 1-based in the listing) must pass full validation.
  SignedBasisResult pub;
  pub.lambda = 0.0;
  pub.k = 7;
  pub.r = 6;
  pub.f = 2;
  pub.f_exact = true;
  pub.switch_state = State(16, 1);
  auto push = [&](std::initializer_list<double> phi, std::initializer_list<int> eps,
                  std::vector<std::vector<int>> parts, int bound) {
    SignedBasisVector v;
    v.phi = Eigen::Map<const Vector>(std::data(phi), 16);
    v.phi.normalize();
    v.eps.assign(eps.begin(), eps.end());
    for (std::vector<int>& part : parts)
      for (int& i : part) --i;
    v.partition = parts;
    v.N = static_cast<int>(parts.size());
    v.bound = bound;
    pub.vectors.push_back(std::move(v));
  };
  push({-5, 4, 1, 1, 1, 0, 1, 0, 0, -3, -2, 5, 1, 1, 0, 0},
       {-1, 1, 1, 1, 1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, -1},
       {{1}, {2, 5, 6, 7}, {3}, {4}, {8, 10, 11, 15}, {9, 13, 14}, {12}, {16}}, 9);
  push({-5, 4, 1, 1, 1, 0, 1, 0, 0, 58.0 / 9, -2, -40.0 / 9, 1, -76.0 / 9, 0, 0},
       {-1, 1, 1, 1, 1, 1, 1, -1, 1, 1, -1, -1, 1, -1, 1, 1},
       {{1}, {2, 5, 6, 7}, {3}, {4}, {8, 11, 12}, {9, 10, 13, 15}, {14}, {16}}, 10);
  push({-5, 4, 1, 1, 1, 0, 1, 0, 0, 58.0 / 9, -2, -40.0 / 9, -55.0 / 3, 98.0 / 9, 0, 0},
       {-1, 1, 1, 1, 1, 1, 1, -1, 1, 1, -1, -1, -1, 1, 1, 1},
       {{1}, {2, 5, 6, 7}, {3}, {4}, {8, 11, 12}, {9, 10, 14}, {13}, {15}, {16}}, 11);

  ValidationReport rep = validate_signed_basis(M, g, pub);
  if (!rep.all_ok) return fail("published basis failed validation");
  if (rep.max_orth_residual > 1e-10)
    return failf("orthogonality residual %.3g > 1e-10", rep.max_orth_residual);
  if (rep.reports.size() != 3 || rep.reports[0].N != 8 || rep.reports[1].N != 8 ||
      rep.reports[2].N != 9)
    return fail("published partition sizes != (8, 8, 9)");

  // Own construction: exact backend, N(eps_s) <= 7 + (s-1) + f with the
  // exhaustively verified frustration index.
  ConstructionConfig cc;
  cc.analyze = reference_overrides();
  SignedBasisResult own = construct_signed_basis(M, spec, g, cc);
  if (!own.exact_backend) return fail("construction left the rational backend");
  if (own.f != f_oracle.f) return failf("construction f %d != oracle %d", own.f, f_oracle.f);
  if (own.vectors.size() != 6) return fail("construction did not emit 6 vectors");
  for (int sidx = 0; sidx < 6; ++sidx) {
    int cap = 7 + sidx + f_oracle.f;
    if (own.vectors[sidx].N > cap)
      return failf("vector %d: N %d > %d", sidx + 1, own.vectors[sidx].N, cap);
  }
  ValidationReport own_rep = validate_signed_basis(M, g, own);
  if (!own_rep.all_ok) return fail("own construction failed validation");
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 2: generic nodal bound on random integer matrices
// ---------------------------------------------------------------------------
std::string criterion2() {
  std::mt19937_64 rng(220001);
  int instances = 0;
  long long checked = 0;
  while (instances < 500) {
    auto inst = random_integer_instance(rng);
    if (!inst) continue;
    ++instances;
    const SymmetricMatrix& M = *inst;
    SignedGraph G = from_symmetric_matrix(M);
    Spectrum spec = eigendecompose(M);
    for (const EigenGroup& g : group_eigenvalues(spec)) {
      for (int c = g.first; c < g.first + g.r; ++c) {
        Vector phi = spec.eigenvectors.col(c);
        if (!vanishing_set(phi).empty()) continue;
        BoundReport rep = verify_generic_bounds(M, G, g, phi);
        if (!rep.exactN)
          return failf("instance %d col %d: N not exact", instances, c);
        if (!rep.satisfied)
          return failf("instance %d col %d: N=%d outside [%d, %d]", instances, c, rep.N,
                       rep.lower, rep.upper);
        RefinedLowerBound ref = refined_lower_bound(G, g, phi);
        if (ref.lower < rep.lower || rep.N < ref.lower)
          return failf("instance %d col %d: refined lower bound violated", instances, c);
        PathDomainCounts pc = path_domain_counts(G, phi);
        if (pc.kappa_le > g.k)
          return failf("instance %d col %d: kappa_le %d > k %d", instances, c, pc.kappa_le, g.k);
        if (pc.kappa_lt > g.k + g.r - 1)
          return failf("instance %d col %d: kappa_lt %d > k+r-1 %d", instances, c, pc.kappa_lt,
                       g.k + g.r - 1);
        if (pc.kappa_lt > rep.N)
          return failf("instance %d col %d: kappa_lt %d > N %d", instances, c, pc.kappa_lt,
                       rep.N);
        ++checked;
      }
    }
  }
  if (checked < 1000) return failf("only %lld eigenvectors checked", checked);
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 3: acyclic matrices give N == k exactly
// ---------------------------------------------------------------------------
std::string criterion3() {
  std::mt19937_64 rng(330001);
  long long checked = 0;
  for (int inst = 0; inst < 200; ++inst) {
    SymmetricMatrix M = random_tree_instance(rng);
    SignedGraph G = from_symmetric_matrix(M);
    FrustrationResult fr = frustration_index_exact(G);
    if (fr.f != 0) return failf("instance %d: tree frustration %d != 0", inst, fr.f);
    Spectrum spec = eigendecompose(M);
    for (const EigenGroup& g : group_eigenvalues(spec)) {
      for (int c = g.first; c < g.first + g.r; ++c) {
        Vector phi = spec.eigenvectors.col(c);
        if (!vanishing_set(phi).empty()) continue;
        BoundReport rep = verify_generic_bounds(M, G, g, phi);
        if (!rep.satisfied || !rep.exactN || rep.N != g.k)
          return failf("instance %d col %d: N=%d != k=%d", inst, c, rep.N, g.k);
        ++checked;
      }
    }
  }
  if (checked < 500) return failf("only %lld eigenvectors checked", checked);
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 4: signed-Laplacian inertia bounds
// ---------------------------------------------------------------------------
std::string criterion4() {
  std::mt19937_64 rng(220001);  // the criterion-2 instance family
  int instances = 0;
  long long checked = 0;
  while (instances < 500) {
    auto inst = random_integer_instance(rng);
    if (!inst) continue;
    ++instances;
    const SymmetricMatrix& M = *inst;
    Spectrum spec = eigendecompose(M);
    for (const EigenGroup& g : group_eigenvalues(spec)) {
      for (int c = g.first; c < g.first + g.r; ++c) {
        Vector phi = spec.eigenvectors.col(c);
        if (!vanishing_set(phi).empty()) continue;
        InertiaCheckResult ic = inertia_check(M, g, phi);
        if (ic.kappa_pos - 1 > ic.bound_pos)
          return failf("instance %d col %d: kappa+ %d - 1 > %d", instances, c, ic.kappa_pos,
                       ic.bound_pos);
        if (ic.kappa_neg - 1 > ic.bound_neg)
          return failf("instance %d col %d: kappa- %d - 1 > %d", instances, c, ic.kappa_neg,
                       ic.bound_neg);
        if (!ic.ok) return failf("instance %d col %d: inertia check flag", instances, c);
        ++checked;
      }
    }
  }
  if (checked < 1000) return failf("only %lld eigenvectors checked", checked);
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 5: signed basis construction on forced-multiplicity matrices
// ---------------------------------------------------------------------------
std::string criterion5() {
  std::vector<Instance> insts = forced_multiplicity_instances();
  if (insts.size() != 50) return failf("instance list has %zu entries", insts.size());
  for (const Instance& inst : insts) {
    Spectrum spec = eigendecompose(inst.M);
    int multi = 0;
    for (const EigenGroup& g : group_eigenvalues(spec)) {
      if (g.r < 2) continue;
      ++multi;
      SignedBasisResult res;
      try {
        res = construct_signed_basis(inst.M, spec, g, {});
      } catch (const std::exception& ex) {
        return failf("%s lambda=%.4g: construction threw (%s)", inst.name.c_str(), g.lambda,
                     ex.what());
      }
      for (std::size_t s = 0; s < res.vectors.size(); ++s) {
        if (res.vectors[s].N > res.vectors[s].bound)
          return failf("%s lambda=%.4g vector %zu: N %d > bound %d", inst.name.c_str(), g.lambda,
                       s + 1, res.vectors[s].N, res.vectors[s].bound);
      }
      ValidationReport rep = validate_signed_basis(inst.M, g, res);
      if (!rep.all_ok)
        return failf("%s lambda=%.4g: validation failed", inst.name.c_str(), g.lambda);
      PerturbationReport pr = perturbation_stability_test(res, 1.0, 100, 7);
      if (pr.fraction != 1.0)
        return failf("%s lambda=%.4g: perturbation fraction %.3f != 1", inst.name.c_str(),
                     g.lambda, pr.fraction);
    }
    if (multi == 0) return failf("%s: no multiple eigenvalue", inst.name.c_str());
  }
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 6: strong support basis bound N^s(phi_l) <= k + (l-1) + f
// ---------------------------------------------------------------------------
std::string criterion6() {
  std::vector<Instance> insts = forced_multiplicity_instances();
  for (const Instance& inst : insts) {
    SignedGraph G = from_symmetric_matrix(inst.M);
    Spectrum spec = eigendecompose(inst.M);
    for (const EigenGroup& g : group_eigenvalues(spec)) {
      if (g.r < 2) continue;
      StrongSupportResult res;
      try {
        res = construct_strong_support_basis(inst.M, spec, g, {});
      } catch (const std::exception& ex) {
        return failf("%s lambda=%.4g: construction threw (%s)", inst.name.c_str(), g.lambda,
                     ex.what());
      }
      if (static_cast<int>(res.vectors.size()) != g.r)
        return failf("%s lambda=%.4g: %zu vectors != r=%d", inst.name.c_str(), g.lambda,
                     res.vectors.size(), g.r);
      for (std::size_t l = 0; l < res.vectors.size(); ++l) {
        const StrongSupportVector& v = res.vectors[l];
        int cap = g.k + static_cast<int>(l) + res.f;
        if (v.bound != cap)
          return failf("%s lambda=%.4g vector %zu: bound %d != %d", inst.name.c_str(), g.lambda,
                       l + 1, v.bound, cap);
        NodalDecomposition dec = support_nodal_count(G, v.phi);
        if (dec.N > cap)
          return failf("%s lambda=%.4g vector %zu: N^s %d > %d", inst.name.c_str(), g.lambda,
                       l + 1, dec.N, cap);
      }
      // Star Laplacians: the first vector is supported on exactly two leaves.
      if (inst.star && std::abs(g.lambda - 1.0) < 1e-9 && res.vectors[0].support != 2)
        return failf("%s: first support %d != 2", inst.name.c_str(), res.vectors[0].support);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 7: random signed graph program at n = 400
// ---------------------------------------------------------------------------
std::string criterion7() {
  GnpqParams params{400, 0.3, 0.3, 1};
  ExperimentConfig ec;
  ec.trials = 10;
  ExperimentResult res = run_experiment(params, ec);
  if (res.s != 12) return failf("scan size %d != 12", res.s);
  if (static_cast<int>(res.records.size()) != 4000)
    return failf("%zu records != 4000", res.records.size());
  if (res.path_trivial_rate != 1.0)
    return failf("path-trivial rate %.6f != 1 (kappa(G^>) == 1 must hold for every vector)",
                 res.path_trivial_rate);
  if (res.bound_ok_rate != 1.0)
    return failf("max-domain bound rate %.6f != 1", res.bound_ok_rate);
  int good_seeds = 0;
  for (int t = 0; t < 10; ++t) {
    double leftover = 0;
    for (int i = 0; i < 400; ++i) leftover += res.records[t * 400 + i].stats.leftover;
    leftover /= 400.0;
    if (leftover <= 0.10 * 400) ++good_seeds;
  }
  if (good_seeds < 9) return failf("greedy leftover <= 10%% on only %d/10 seeds", good_seeds);
  return {};
}

// ---------------------------------------------------------------------------
// Criterion 8: library results match brute-force oracles
// ---------------------------------------------------------------------------
std::string criterion8() {
  // (a) minimal nodal decomposition vs set-partition enumeration, n <= 8.
  {
    std::mt19937_64 rng(880001);
    for (int inst = 0; inst < 200; ++inst) {
      int n = 2 + static_cast<int>(rng() % 7);
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (std::uniform_real_distribution<>(0, 1)(rng) < 0.6)
            edges.push_back({i, j, (rng() & 1) ? +1 : -1});
      SignedGraph G = make_signed_graph(n, edges);
      Vector x(n);
      for (int i = 0; i < n; ++i) x[i] = (rng() & 1) ? 1.0 : -1.0;
      NodalDecomposition dec = minimal_nodal_decomposition_exact(G, x);
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      int expect = oracles::min_nodal_partition(
          G, all, classify_edges(G, sign_pattern(x), SignConvention::laplacian_like));
      if (dec.N != expect || !dec.certified_minimal)
        return failf("nodal oracle: instance %d N=%d expect %d", inst, dec.N, expect);
    }
  }
  // (b) frustration index vs the 2^(n-1) state scan, n <= 12.
  {
    std::mt19937_64 rng(880002);
    for (int inst = 0; inst < 100; ++inst) {
      int n = 2 + static_cast<int>(rng() % 11);
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (std::uniform_real_distribution<>(0, 1)(rng) < 0.5)
            edges.push_back({i, j, (rng() & 1) ? +1 : -1});
      SignedGraph G = make_signed_graph(n, edges);
      FrustrationResult got = frustration_index_exact(G);
      FrustrationResult expect = oracles::frustration(G);
      if (got.f != expect.f || !got.certified)
        return failf("frustration oracle: instance %d f=%d expect %d", inst, got.f, expect.f);
      if (got.state != expect.state)
        return failf("frustration oracle: instance %d witness differs", inst);
      if (frustrated_edge_count(G, got.state) != got.f)
        return failf("frustration oracle: instance %d witness count", inst);
    }
  }
  // (c) clique-domain predicate vs literal subset scan, 1000 cases.
  {
    GnpqParams params{40, 0.5, 0.5, 31337};
    auto [G, A] = sample_gnpq(params);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    Vector phi(40);
    for (int i = 0; i < 40; ++i) phi[i] = gauss(rng);
    std::vector<std::vector<char>> good(40, std::vector<char>(40, 0));
    for (int u = 0; u < 40; ++u)
      for (int v = u + 1; v < 40; ++v)
        if (A(u, v) != 0.0 && A(u, v) * phi[u] * phi[v] > 0) good[u][v] = good[v][u] = 1;
    std::vector<int> all(40);
    std::iota(all.begin(), all.end(), 0);
    int hits = 0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<int> S;
      std::sample(all.begin(), all.end(), std::back_inserter(S), 8, rng);
      bool expect = oracles::clique_domain_subset_scan(S, 3, good);
      if (clique_domain_present(G, phi, S, 3) != expect)
        return failf("clique oracle: case %d disagrees", t);
      hits += expect;
    }
    if (hits == 0 || hits == 1000) return failf("clique oracle: degenerate split %d", hits);
  }
  return {};
}

struct Criterion {
  int id;
  const char* name;
  std::string (*fn)();
};

const Criterion kCriteria[] = {
    {1, "reference 16-vertex reproduction", criterion1},
    {2, "generic nodal bounds (500 random integer matrices)", criterion2},
    {3, "acyclic exactness N == k (200 random trees)", criterion3},
    {4, "signed-Laplacian inertia bounds", criterion4},
    {5, "signed basis construction on 50 forced-multiplicity matrices", criterion5},
    {6, "strong support basis bounds", criterion6},
    {7, "random signed graph program (n=400, 10 seeds)", criterion7},
    {8, "oracle equivalences (nodal, frustration, clique domains)", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int which = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (which != 0 && c.id != which) continue;
    std::string err;
    auto t0 = std::chrono::steady_clock::now();
    try {
      err = c.fn();
    } catch (const std::exception& ex) {
      err = std::string("unhandled exception: ") + ex.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (err.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2fs)\n", c.id, c.name, sec);
    } else {
      std::printf("[FAIL] criterion %d: %s (%s)\n", c.id, c.name, err.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures;
}
