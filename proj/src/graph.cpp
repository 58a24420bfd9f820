#include "nodalkit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

namespace nodalkit {

SymmetricMatrix::SymmetricMatrix(Matrix m, double sym_tol) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
    throw std::invalid_argument("SymmetricMatrix: matrix must be square with n >= 1");
  }
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  for (int i = 0; i < mat_.rows(); ++i) {
    for (int j = i + 1; j < mat_.cols(); ++j) {
      if (std::abs(mat_(i, j) - mat_(j, i)) > sym_tol * scale) {
        throw std::invalid_argument("SymmetricMatrix: entries (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                    std::to_string(i) + ") differ");
      }
    }
  }
}

int SignedGraph::sign(int i, int j) const {
  for (const auto& [nb, s] : adj[i]) {
    if (nb == j) return s;
  }
  return 0;
}

namespace {

void finalize_graph(SignedGraph& G) {
  std::sort(G.edges.begin(), G.edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  G.adj.assign(G.n, {});
  for (const Edge& e : G.edges) {
    G.adj[e.u].push_back({e.v, e.sign});
    G.adj[e.v].push_back({e.u, e.sign});
  }
  for (auto& lst : G.adj) std::sort(lst.begin(), lst.end());
}

void check_state(const SignedGraph& G, const State& state) {
  if (static_cast<int>(state.size()) != G.n) {
    throw std::invalid_argument("state length does not match vertex count");
  }
  for (int s : state) {
    if (s != 1 && s != -1) throw std::invalid_argument("state entries must be +1 or -1");
  }
}

}  // namespace

SignedGraph from_symmetric_matrix(const SymmetricMatrix& M, double zero_tol) {
  SignedGraph G;
  G.n = M.n();
  for (int i = 0; i < G.n; ++i) {
    for (int j = i + 1; j < G.n; ++j) {
      if (std::abs(M(i, j)) > zero_tol) {
        G.edges.push_back({i, j, M(i, j) > 0 ? -1 : +1});
      }
    }
  }
  finalize_graph(G);
  return G;
}

SignedGraph make_signed_graph(int n, std::vector<Edge> edges) {
  if (n < 1) throw std::invalid_argument("make_signed_graph: n must be >= 1");
  SignedGraph G;
  G.n = n;
  for (Edge e : edges) {
    if (e.u == e.v) throw std::invalid_argument("make_signed_graph: loops are not allowed");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n) throw std::invalid_argument("make_signed_graph: vertex out of range");
    if (e.sign != 1 && e.sign != -1) {
      throw std::invalid_argument("make_signed_graph: edge sign must be +1 or -1");
    }
    G.edges.push_back(e);
  }
  finalize_graph(G);
  for (std::size_t i = 1; i < G.edges.size(); ++i) {
    if (G.edges[i - 1].u == G.edges[i].u && G.edges[i - 1].v == G.edges[i].v) {
      throw std::invalid_argument("make_signed_graph: duplicate edge");
    }
  }
  return G;
}

SymmetricMatrix canonical_matrix(const SignedGraph& G) {
  Matrix m = Matrix::Zero(G.n, G.n);
  for (const Edge& e : G.edges) {
    m(e.u, e.v) = -e.sign;
    m(e.v, e.u) = -e.sign;
  }
  return SymmetricMatrix(std::move(m));
}

std::vector<std::vector<int>> connected_components(const SignedGraph& G) {
  std::vector<int> all(G.n);
  std::iota(all.begin(), all.end(), 0);
  return connected_components(G, all);
}

std::vector<std::vector<int>> connected_components(const SignedGraph& G,
                                                   const std::vector<int>& subset) {
  std::vector<char> in(G.n, 0), seen(G.n, 0);
  for (int v : subset) {
    if (v < 0 || v >= G.n) throw std::invalid_argument("connected_components: vertex out of range");
    in[v] = 1;
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> order(subset);
  std::sort(order.begin(), order.end());
  for (int s : order) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.push_back(v);
      for (const auto& [nb, sg] : G.adj[v]) {
        (void)sg;
        if (in[nb] && !seen[nb]) {
          seen[nb] = 1;
          q.push(nb);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

GraphInvariants graph_invariants(const SignedGraph& G) {
  GraphInvariants inv;
  inv.n = G.n;
  inv.e = static_cast<int>(G.edges.size());
  inv.kappa = static_cast<int>(connected_components(G).size());
  inv.nu = inv.e - inv.n + inv.kappa;
  for (const Edge& e : G.edges) {
    (e.sign > 0 ? inv.e_pos : inv.e_neg)++;
  }
  return inv;
}

int frustrated_edge_count(const SignedGraph& G, const State& state) {
  check_state(G, state);
  int f = 0;
  for (const Edge& e : G.edges) {
    if (e.sign * state[e.u] * state[e.v] < 0) ++f;
  }
  return f;
}

namespace {

// Branch-and-bound worker for the exact frustration index. Vertices are
// explored in BFS order; the admissible lower bound adds, per unassigned
// vertex, the cheaper of its two sign choices against already-assigned
// neighbors.
struct FrustrationBnB {
  const SignedGraph& G;
  std::vector<int> order;     // BFS order over components
  std::vector<int> pos;      // vertex -> position in order
  std::vector<int> assign;   // +1/-1/0 in vertex indexing
  std::vector<int> cnt_plus;  // frustrated edges to assigned vertices if v=+1
  std::vector<int> cnt_minus;
  long long slack_sum = 0;  // sum over unassigned of min(cnt_plus, cnt_minus)
  int current = 0;          // frustrated edges among assigned pairs
  int best = std::numeric_limits<int>::max();
  State best_state;

  explicit FrustrationBnB(const SignedGraph& g) : G(g) {
    // Natural vertex order: the +1-first depth-first search then reaches the
    // lexicographically smallest optimal state before any other optimum.
    order.resize(G.n);
    std::iota(order.begin(), order.end(), 0);
    pos = order;
    assign.assign(G.n, 0);
    cnt_plus.assign(G.n, 0);
    cnt_minus.assign(G.n, 0);
  }

  void place(int v, int s) {
    slack_sum -= std::min(cnt_plus[v], cnt_minus[v]);
    assign[v] = s;
    current += (s > 0) ? cnt_plus[v] : cnt_minus[v];
    for (const auto& [nb, sg] : G.adj[v]) {
      if (assign[nb] != 0) continue;
      slack_sum -= std::min(cnt_plus[nb], cnt_minus[nb]);
      // Edge (v, nb) frustrated iff sg * s * s_nb < 0.
      if (sg * s > 0) {
        cnt_minus[nb]++;
      } else {
        cnt_plus[nb]++;
      }
      slack_sum += std::min(cnt_plus[nb], cnt_minus[nb]);
    }
  }

  void unplace(int v, int s) {
    for (const auto& [nb, sg] : G.adj[v]) {
      if (assign[nb] != 0) continue;
      slack_sum -= std::min(cnt_plus[nb], cnt_minus[nb]);
      if (sg * s > 0) {
        cnt_minus[nb]--;
      } else {
        cnt_plus[nb]--;
      }
      slack_sum += std::min(cnt_plus[nb], cnt_minus[nb]);
    }
    current -= (s > 0) ? cnt_plus[v] : cnt_minus[v];
    assign[v] = 0;
    slack_sum += std::min(cnt_plus[v], cnt_minus[v]);
  }

  void dfs(int depth) {
    if (current + slack_sum >= best) return;
    if (depth == G.n) {
      best = current;
      best_state.assign(assign.begin(), assign.end());
      return;
    }
    int v = order[depth];
    for (int s : {+1, -1}) {
      if (depth == 0 && s < 0) continue;  // fix the first vertex by symmetry
      place(v, s);
      dfs(depth + 1);
      unplace(v, s);
    }
  }
};

}  // namespace

FrustrationResult frustration_index_exact(const SignedGraph& G, int cap) {
  if (G.n > cap) {
    throw std::invalid_argument("frustration_index_exact: n = " + std::to_string(G.n) +
                                " exceeds cap " + std::to_string(cap));
  }
  FrustrationBnB bnb(G);
  bnb.dfs(0);
  FrustrationResult res;
  res.f = bnb.best;
  res.state = bnb.best_state;
  res.certified = true;
  return res;
}

FrustrationResult frustration_index_heuristic(const SignedGraph& G, std::uint64_t seed,
                                              int restarts) {
  std::mt19937_64 rng(seed);
  FrustrationResult best;
  best.f = std::numeric_limits<int>::max();
  for (int t = 0; t < std::max(1, restarts); ++t) {
    State s(G.n, +1);
    if (t > 0) {
      for (int v = 1; v < G.n; ++v) s[v] = (rng() & 1) ? +1 : -1;
    }
    // Greedy descent: flip the vertex with the largest frustration reduction.
    std::vector<int> gain(G.n, 0);
    auto recompute_gain = [&](int v) {
      int g = 0;
      for (const auto& [nb, sg] : G.adj[v]) {
        g += (sg * s[v] * s[nb] < 0) ? 1 : -1;  // flipping v repairs or breaks this edge
      }
      gain[v] = g;
    };
    for (int v = 0; v < G.n; ++v) recompute_gain(v);
    while (true) {
      int bv = -1, bg = 0;
      for (int v = 0; v < G.n; ++v) {
        if (gain[v] > bg) {
          bg = gain[v];
          bv = v;
        }
      }
      if (bv < 0) break;
      s[bv] = -s[bv];
      recompute_gain(bv);
      for (const auto& [nb, sg] : G.adj[bv]) {
        (void)sg;
        recompute_gain(nb);
      }
    }
    if (s[0] < 0) {
      for (int v = 0; v < G.n; ++v) s[v] = -s[v];
    }
    int f = frustrated_edge_count(G, s);
    if (f < best.f) {
      best.f = f;
      best.state = s;
    }
  }
  best.certified = false;
  return best;
}

SignedGraph switch_graph(const SignedGraph& G, const State& state) {
  check_state(G, state);
  SignedGraph H;
  H.n = G.n;
  for (Edge e : G.edges) {
    e.sign = e.sign * state[e.u] * state[e.v];
    H.edges.push_back(e);
  }
  finalize_graph(H);
  return H;
}

SymmetricMatrix switch_matrix(const SymmetricMatrix& M, const State& state) {
  if (static_cast<int>(state.size()) != M.n()) {
    throw std::invalid_argument("switch_matrix: state length mismatch");
  }
  Matrix m = M.mat();
  for (int i = 0; i < M.n(); ++i) {
    for (int j = 0; j < M.n(); ++j) {
      m(i, j) *= static_cast<double>(state[i] * state[j]);
    }
  }
  return SymmetricMatrix(std::move(m));
}

}  // namespace nodalkit
