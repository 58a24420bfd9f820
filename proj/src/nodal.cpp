#include "nodalkit/nodal.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

namespace nodalkit {

State sign_pattern(const Vector& x, double zero_tol) {
  if (zero_tol < 0) zero_tol = default_zero_tol(x);
  State s(x.size());
  for (int i = 0; i < x.size(); ++i) {
    s[i] = (std::abs(x[i]) <= zero_tol) ? 0 : (x[i] > 0 ? +1 : -1);
  }
  return s;
}

namespace {

// Sign of M_ij x_i x_j in terms of the signed graph (sigma_ij = -sgn(M_ij)),
// 0 when either endpoint vanishes.
inline int product_sign(const Edge& e, const State& pattern) {
  return -e.sign * pattern[e.u] * pattern[e.v];
}

int count_components(int n, const std::vector<char>& in_vertex,
                     const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(n, 0);
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (!in_vertex[s] || seen[s]) continue;
    ++comps;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int nb : adj[v]) {
        if (in_vertex[nb] && !seen[nb]) {
          seen[nb] = 1;
          q.push(nb);
        }
      }
    }
  }
  return comps;
}

}  // namespace

PathDomainCounts path_domain_counts(const SignedGraph& G, const Vector& x, SignConvention conv,
                                    double zero_tol) {
  if (static_cast<int>(x.size()) != G.n) {
    throw std::invalid_argument("path_domain_counts: vector length mismatch");
  }
  State pattern = sign_pattern(x, zero_tol);
  const int flip = (conv == SignConvention::adjacency_like) ? -1 : +1;
  std::vector<std::vector<int>> adj_lt(G.n), adj_gt(G.n);
  for (const Edge& e : G.edges) {
    int p = flip * product_sign(e, pattern);
    if (p < 0) {
      adj_lt[e.u].push_back(e.v);
      adj_lt[e.v].push_back(e.u);
    } else if (p > 0) {
      adj_gt[e.u].push_back(e.v);
      adj_gt[e.v].push_back(e.u);
    }
  }
  std::vector<char> all(G.n, 1), support(G.n);
  for (int i = 0; i < G.n; ++i) support[i] = pattern[i] != 0;
  PathDomainCounts c;
  c.kappa_lt = count_components(G.n, all, adj_lt);
  c.kappa_gt = count_components(G.n, all, adj_gt);
  // Between two support vertices the product is strictly signed, so on
  // [n] \ i0(x) the <= / >= graphs coincide with the strict ones.
  c.kappa_le = count_components(G.n, support, adj_lt);
  c.kappa_ge = count_components(G.n, support, adj_gt);
  return c;
}

std::vector<std::int8_t> classify_edges(const SignedGraph& G, const State& pattern,
                                        SignConvention conv) {
  if (static_cast<int>(pattern.size()) != G.n) {
    throw std::invalid_argument("classify_edges: pattern length mismatch");
  }
  std::vector<std::int8_t> cls(G.edges.size(), 0);
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    int p = product_sign(G.edges[e], pattern);
    if (p == 0) continue;  // an endpoint vanishes; edge ignored by partition search
    bool good = (conv == SignConvention::laplacian_like) ? (p < 0) : (p > 0);
    cls[e] = good ? +1 : -1;
  }
  return cls;
}

namespace {

struct LocalGraph {
  int m = 0;
  std::vector<int> verts;                 // local -> global
  std::vector<std::uint32_t> good_adj;    // local masks
  std::vector<std::uint32_t> bad_adj;
  std::vector<std::vector<int>> good_list;
};

// Branch and bound over one good-component. Vertices are assigned in BFS
// order over good edges; parts are indexed by first use, so the first optimum
// reached is the lexicographically smallest one in that canonical form.
struct PartitionBnB {
  const LocalGraph& L;
  std::vector<int> order;
  std::uint32_t full = 0;
  std::uint32_t assigned = 0;
  int best;
  bool found = false;
  std::vector<std::uint32_t> best_parts;
  std::chrono::steady_clock::time_point deadline;
  bool timed_out = false;
  long long nodes = 0;

  PartitionBnB(const LocalGraph& lg, int incumbent, std::chrono::steady_clock::time_point dl)
      : L(lg), best(incumbent), deadline(dl) {
    full = (L.m == 32) ? ~0u : ((1u << L.m) - 1);
    // BFS over good edges from local vertex 0 (smallest global id first).
    std::vector<char> seen(L.m, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      for (int nb : L.good_list[v]) {
        if (!seen[nb]) {
          seen[nb] = 1;
          q.push(nb);
        }
      }
    }
  }

  // Connectivity of `mask` through good edges restricted to `allowed`.
  bool reaches_all(std::uint32_t mask, std::uint32_t allowed) const {
    std::uint32_t start = mask & (~mask + 1);
    std::uint32_t reach = start, frontier = start;
    while (frontier) {
      int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      std::uint32_t nxt = L.good_adj[v] & allowed & ~reach;
      reach |= nxt;
      frontier |= nxt;
    }
    return (mask & ~reach) == 0;
  }

  bool part_feasible(std::uint32_t pmask) const {
    std::uint32_t conflict = 0;
    for (std::uint32_t t = pmask; t;) {
      int v = std::countr_zero(t);
      t &= t - 1;
      conflict |= L.bad_adj[v];
    }
    std::uint32_t allowed = pmask | (full & ~assigned & ~conflict);
    return reaches_all(pmask, allowed);
  }

  // Greedy clique in the bad graph among unassigned vertices that conflict
  // with every open part; each such vertex needs a fresh part.
  int forced_clique_lb(const std::vector<std::uint32_t>& parts) const {
    std::uint32_t clique = 0;
    int size = 0;
    std::uint32_t un = full & ~assigned;
    while (un) {
      int v = std::countr_zero(un);
      un &= un - 1;
      bool conflicts_all = true;
      for (std::uint32_t p : parts) {
        if ((L.bad_adj[v] & p) == 0) {
          conflicts_all = false;
          break;
        }
      }
      if (!conflicts_all) continue;
      if ((clique & ~L.bad_adj[v]) == 0) {
        clique |= (1u << v);
        ++size;
      }
    }
    return size;
  }

  void dfs(std::size_t depth, std::vector<std::uint32_t>& parts, std::vector<char>& connected) {
    if (timed_out) return;
    if ((++nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (static_cast<int>(parts.size()) + forced_clique_lb(parts) >= best) return;
    if (depth == order.size()) {
      best = static_cast<int>(parts.size());
      best_parts = parts;
      found = true;
      return;
    }
    int v = order[depth];
    std::uint32_t bit = 1u << v;
    for (std::size_t p = 0; p <= parts.size(); ++p) {
      bool fresh = (p == parts.size());
      if (!fresh && (L.bad_adj[v] & parts[p])) continue;
      std::vector<std::uint32_t> nparts = parts;
      std::vector<char> nconn = connected;
      if (fresh) {
        if (static_cast<int>(parts.size()) + 1 >= best) break;  // a new part busts the bound
        nparts.push_back(bit);
        nconn.push_back(1);
      } else {
        nparts[p] |= bit;
        nconn[p] = reaches_all(nparts[p], nparts[p]) ? 1 : 0;
      }
      assigned |= bit;
      bool ok = true;
      for (std::size_t q = 0; q < nparts.size(); ++q) {
        if (!nconn[q] && !part_feasible(nparts[q])) {
          ok = false;
          break;
        }
      }
      if (ok) dfs(depth + 1, nparts, nconn);
      assigned &= ~bit;
      if (timed_out) return;
    }
  }
};

LocalGraph build_local(const SignedGraph& G, const std::vector<int>& comp,
                       const std::vector<std::int8_t>& edge_good) {
  LocalGraph L;
  L.m = static_cast<int>(comp.size());
  L.verts = comp;
  std::vector<int> local(G.n, -1);
  for (int i = 0; i < L.m; ++i) local[comp[i]] = i;
  L.good_adj.assign(L.m, 0);
  L.bad_adj.assign(L.m, 0);
  L.good_list.assign(L.m, {});
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    int a = local[G.edges[e].u], b = local[G.edges[e].v];
    if (a < 0 || b < 0 || edge_good[e] == 0) continue;
    if (edge_good[e] > 0) {
      L.good_adj[a] |= (1u << b);
      L.good_adj[b] |= (1u << a);
      L.good_list[a].push_back(b);
      L.good_list[b].push_back(a);
    } else {
      L.bad_adj[a] |= (1u << b);
      L.bad_adj[b] |= (1u << a);
    }
  }
  for (auto& lst : L.good_list) std::sort(lst.begin(), lst.end());
  return L;
}

// Components of `subset` under good edges only.
std::vector<std::vector<int>> good_components(const SignedGraph& G, const std::vector<int>& subset,
                                              const std::vector<std::int8_t>& edge_good) {
  std::vector<std::vector<int>> gadj(G.n);
  std::vector<char> in(G.n, 0);
  for (int v : subset) in[v] = 1;
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    if (edge_good[e] > 0 && in[G.edges[e].u] && in[G.edges[e].v]) {
      gadj[G.edges[e].u].push_back(G.edges[e].v);
      gadj[G.edges[e].v].push_back(G.edges[e].u);
    }
  }
  std::vector<char> seen(G.n, 0);
  std::vector<std::vector<int>> comps;
  std::vector<int> sorted(subset);
  std::sort(sorted.begin(), sorted.end());
  for (int s : sorted) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.push_back(v);
      for (int nb : gadj[v]) {
        if (!seen[nb]) {
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

void sort_parts(std::vector<std::vector<int>>& parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

NodalDecomposition min_partition_heuristic(const SignedGraph& G, const std::vector<int>& subset,
                                           const std::vector<std::int8_t>& edge_good,
                                           std::uint64_t seed, int restarts) {
  std::vector<char> in(G.n, 0);
  for (int v : subset) in[v] = 1;
  std::vector<std::vector<std::pair<int, int>>> cls_adj(G.n);  // (neighbor, class)
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    if (edge_good[e] == 0) continue;
    cls_adj[G.edges[e].u].push_back({G.edges[e].v, edge_good[e]});
    cls_adj[G.edges[e].v].push_back({G.edges[e].u, edge_good[e]});
  }
  std::mt19937_64 rng(seed);
  NodalDecomposition best;
  best.N = std::numeric_limits<int>::max();
  std::vector<int> order(subset);
  std::sort(order.begin(), order.end());
  for (int t = 0; t < std::max(1, restarts); ++t) {
    if (t > 0) std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> used(G.n, 0);
    std::vector<int> bad_hits(G.n, 0);
    std::vector<std::vector<int>> parts;
    for (int s : order) {
      if (used[s]) continue;
      std::vector<int> part{s};
      std::vector<int> touched;
      used[s] = 1;
      std::queue<int> q;
      q.push(s);
      auto mark_bad = [&](int v) {
        for (const auto& [nb, c] : cls_adj[v]) {
          if (c < 0 && in[nb]) {
            bad_hits[nb]++;
            touched.push_back(nb);
          }
        }
      };
      mark_bad(s);
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& [nb, c] : cls_adj[v]) {
          if (c > 0 && in[nb] && !used[nb] && bad_hits[nb] == 0) {
            used[nb] = 1;
            part.push_back(nb);
            mark_bad(nb);
            q.push(nb);
          }
        }
      }
      for (int v : touched) bad_hits[v] = 0;
      parts.push_back(std::move(part));
    }
    if (static_cast<int>(parts.size()) < best.N) {
      best.N = static_cast<int>(parts.size());
      best.parts = std::move(parts);
    }
  }
  sort_parts(best.parts);
  best.certified_minimal = false;
  return best;
}

NodalDecomposition min_partition_exact(const SignedGraph& G, const std::vector<int>& subset,
                                       const std::vector<std::int8_t>& edge_good, int cap,
                                       double budget_sec) {
  if (static_cast<int>(subset.size()) > cap) {
    throw std::invalid_argument("min_partition_exact: subset size " +
                                std::to_string(subset.size()) + " exceeds cap " +
                                std::to_string(cap));
  }
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::microseconds(static_cast<long long>(budget_sec * 1e6));
  NodalDecomposition out;
  out.certified_minimal = true;
  for (const auto& comp : good_components(G, subset, edge_good)) {
    LocalGraph L = build_local(G, comp, edge_good);
    NodalDecomposition heur = min_partition_heuristic(G, comp, edge_good, 0, 4);
    PartitionBnB bnb(L, heur.N + 1, deadline);
    std::vector<std::uint32_t> parts;
    std::vector<char> connected;
    bnb.dfs(0, parts, connected);
    if (bnb.found && bnb.best <= heur.N) {
      for (std::uint32_t mask : bnb.best_parts) {
        std::vector<int> part;
        while (mask) {
          int v = std::countr_zero(mask);
          mask &= mask - 1;
          part.push_back(L.verts[v]);
        }
        out.parts.push_back(std::move(part));
      }
    } else {
      for (auto& p : heur.parts) out.parts.push_back(std::move(p));
    }
    if (bnb.timed_out) out.certified_minimal = false;
  }
  sort_parts(out.parts);
  out.N = static_cast<int>(out.parts.size());
  return out;
}

namespace {

NodalDecomposition decomposition_over(const SignedGraph& G, const Vector& x, SignConvention conv,
                                      bool support_only, bool exact, int cap, double budget_sec,
                                      std::uint64_t seed, double zero_tol) {
  if (static_cast<int>(x.size()) != G.n) {
    throw std::invalid_argument("nodal decomposition: vector length mismatch");
  }
  State pattern = sign_pattern(x, zero_tol);
  std::vector<int> subset;
  for (int i = 0; i < G.n; ++i) {
    if (pattern[i] != 0) subset.push_back(i);
  }
  if (!support_only && static_cast<int>(subset.size()) != G.n) {
    throw std::invalid_argument(
        "minimal nodal decomposition requires a non-vanishing vector; use support_nodal_count");
  }
  if (subset.empty()) throw std::invalid_argument("nodal decomposition: empty support");
  auto cls = classify_edges(G, pattern, conv);
  if (exact) return min_partition_exact(G, subset, cls, cap, budget_sec);
  return min_partition_heuristic(G, subset, cls, seed);
}

}  // namespace

NodalDecomposition minimal_nodal_decomposition_exact(const SignedGraph& G, const Vector& x,
                                                     SignConvention conv, int cap,
                                                     double budget_sec, double zero_tol) {
  return decomposition_over(G, x, conv, false, true, cap, budget_sec, 0, zero_tol);
}

NodalDecomposition minimal_nodal_decomposition_heuristic(const SignedGraph& G, const Vector& x,
                                                         SignConvention conv, std::uint64_t seed,
                                                         double zero_tol) {
  return decomposition_over(G, x, conv, false, false, 0, 0, seed, zero_tol);
}

NodalDecomposition support_nodal_count(const SignedGraph& G, const Vector& x, SignConvention conv,
                                       int cap, double budget_sec, double zero_tol) {
  State pattern = sign_pattern(x, zero_tol);
  int support = 0;
  for (int s : pattern) support += (s != 0);
  if (support == 0) throw std::invalid_argument("support_nodal_count: empty support");
  bool exact = support <= cap;
  return decomposition_over(G, x, conv, true, exact, cap, budget_sec, 0, zero_tol);
}

BoundReport verify_generic_bounds(const SymmetricMatrix& M, const SignedGraph& G,
                                  const EigenGroup& group, const Vector& phi, SignConvention conv,
                                  int frustration_cap, int nodal_cap, double budget_sec,
                                  double zero_tol) {
  (void)M;
  BoundReport rep;
  rep.k = group.k;
  rep.r = group.r;
  GraphInvariants inv = graph_invariants(G);
  rep.nu = inv.nu;
  bool f_exact = G.n <= frustration_cap;
  FrustrationResult fr = f_exact ? frustration_index_exact(G, frustration_cap)
                                 : frustration_index_heuristic(G, 0);
  rep.f = fr.f;
  bool n_exact = G.n <= nodal_cap;
  NodalDecomposition dec =
      n_exact ? minimal_nodal_decomposition_exact(G, phi, conv, nodal_cap, budget_sec, zero_tol)
              : minimal_nodal_decomposition_heuristic(G, phi, conv, 0, zero_tol);
  rep.N = dec.N;
  rep.exactN = f_exact && n_exact && dec.certified_minimal;
  rep.lower = rep.k + (rep.r - 1) - rep.nu;
  rep.upper = rep.k + rep.f;
  rep.satisfied = rep.lower <= rep.N && rep.N <= rep.upper;
  return rep;
}

RefinedLowerBound refined_lower_bound(const SignedGraph& G, const EigenGroup& group,
                                      const Vector& phi, double zero_tol) {
  State pattern = sign_pattern(phi, zero_tol);
  for (int s : pattern) {
    if (s == 0) throw std::invalid_argument("refined_lower_bound: vector vanishes");
  }
  std::vector<std::vector<int>> adj_pos(G.n), adj_neg(G.n);
  int e_pos = 0, e_neg = 0;
  for (const Edge& e : G.edges) {
    int p = product_sign(e, pattern);
    if (p > 0) {
      ++e_pos;
      adj_pos[e.u].push_back(e.v);
      adj_pos[e.v].push_back(e.u);
    } else if (p < 0) {
      ++e_neg;
      adj_neg[e.u].push_back(e.v);
      adj_neg[e.v].push_back(e.u);
    }
  }
  std::vector<char> all(G.n, 1);
  RefinedLowerBound out;
  GraphInvariants inv = graph_invariants(G);
  out.nu_pos = e_pos - G.n + count_components(G.n, all, adj_pos);
  out.nu_neg = e_neg - G.n + count_components(G.n, all, adj_neg);
  out.lower = group.k + (group.r - 1) - inv.nu + out.nu_pos + out.nu_neg;
  return out;
}

InertiaCheckResult inertia_check(const SymmetricMatrix& M, const EigenGroup& group,
                                 const Vector& phi, double zero_tol) {
  const int n = M.n();
  if (static_cast<int>(phi.size()) != n) {
    throw std::invalid_argument("inertia_check: vector length mismatch");
  }
  State pattern = sign_pattern(phi, zero_tol);
  for (int s : pattern) {
    if (s == 0) throw std::invalid_argument("inertia_check: vector vanishes");
  }
  std::vector<std::vector<int>> adj_pos(n), adj_neg(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (M(i, j) == 0.0) continue;
      double b = M(i, j) * phi[i] * phi[j];
      if (b > 0) {
        adj_pos[i].push_back(j);
        adj_pos[j].push_back(i);
      } else if (b < 0) {
        adj_neg[i].push_back(j);
        adj_neg[j].push_back(i);
      }
    }
  }
  std::vector<char> all(n, 1);
  InertiaCheckResult out;
  out.kappa_pos = count_components(n, all, adj_pos);
  out.kappa_neg = count_components(n, all, adj_neg);
  out.bound_pos = n - group.k - group.r + 1;
  out.bound_neg = group.k - 1;
  out.ok = (out.kappa_pos - 1 <= out.bound_pos) && (out.kappa_neg - 1 <= out.bound_neg);
  return out;
}

}  // namespace nodalkit
