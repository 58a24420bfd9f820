#pragma once

#include "nodalkit/graph.hpp"
#include "nodalkit/nodal.hpp"

#include <algorithm>
#include <queue>
#include <vector>

// Independent brute-force reference implementations. These deliberately use
// the literal definitions (full enumeration) rather than sharing code with
// the library's search routines.
namespace oracles {

// Exhaustive frustration index over all 2^(n-1) states with state[0] = +1;
// returns the lexicographically smallest witness (+1 ordered before -1).
inline nodalkit::FrustrationResult frustration(const nodalkit::SignedGraph& G) {
  nodalkit::FrustrationResult best;
  best.f = static_cast<int>(G.edges.size()) + 1;
  const int n = G.n;
  for (long long mask = 0; mask < (1LL << (n - 1)); ++mask) {
    nodalkit::State s(n, +1);
    // Vertex 1 on the most significant bit: ascending masks enumerate states
    // in lexicographic order with +1 before -1.
    for (int v = 1; v < n; ++v) {
      if (mask & (1LL << (n - 1 - v))) s[v] = -1;
    }
    int f = nodalkit::frustrated_edge_count(G, s);
    if (f < best.f) {
      best.f = f;
      best.state = s;
    }
  }
  best.certified = true;
  return best;
}

// Validity of one part under the literal definition: the induced subgraph
// G[part] (all of its edges) is connected, and every internal edge is good.
inline bool part_valid(const nodalkit::SignedGraph& G, const std::vector<int>& part,
                       const std::vector<std::int8_t>& edge_good) {
  std::vector<char> in(G.n, 0);
  for (int v : part) in[v] = 1;
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    if (in[G.edges[e].u] && in[G.edges[e].v] && edge_good[e] < 0) return false;
  }
  std::vector<char> seen(G.n, 0);
  std::queue<int> q;
  q.push(part[0]);
  seen[part[0]] = 1;
  int reached = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++reached;
    for (const auto& [nb, sg] : G.adj[v]) {
      (void)sg;
      if (in[nb] && !seen[nb]) {
        seen[nb] = 1;
        q.push(nb);
      }
    }
  }
  return reached == static_cast<int>(part.size());
}

// Minimum valid partition size over all set partitions of `subset`
// (restricted growth string enumeration); practical for |subset| <= 9.
inline int min_nodal_partition(const nodalkit::SignedGraph& G, const std::vector<int>& subset,
                               const std::vector<std::int8_t>& edge_good) {
  const int m = static_cast<int>(subset.size());
  std::vector<int> rgs(m, 0);
  int best = m + 1;
  auto eval = [&]() {
    int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    if (blocks >= best) return;
    std::vector<std::vector<int>> parts(blocks);
    for (int i = 0; i < m; ++i) parts[rgs[i]].push_back(subset[i]);
    for (const auto& p : parts) {
      if (!part_valid(G, p, edge_good)) return;
    }
    best = blocks;
  };
  // Iterate restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(prefix).
  while (true) {
    eval();
    int i = m - 1;
    for (; i >= 1; --i) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
      if (rgs[i] <= mx) {
        rgs[i]++;
        for (int j = i + 1; j < m; ++j) rgs[j] = 0;
        break;
      }
      // reset handled by the fill above when an earlier digit increments
    }
    if (i < 1) break;
  }
  return best;
}

// Does any k-subset of `cand` induce an all-good clique? Literal subset scan.
inline bool clique_domain_subset_scan(const std::vector<int>& cand, int k,
                                      const std::vector<std::vector<char>>& good_pair) {
  const int m = static_cast<int>(cand.size());
  if (k > m) return false;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    bool ok = true;
    for (int a = 0; a < k && ok; ++a) {
      for (int b = a + 1; b < k && ok; ++b) {
        if (!good_pair[cand[idx[a]]][cand[idx[b]]]) ok = false;
      }
    }
    if (ok) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace oracles
