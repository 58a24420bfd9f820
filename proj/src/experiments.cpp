#include "nodalkit/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nodalkit {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit_double(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

void validate_params(const GnpqParams& params) {
  if (params.n <= 0) throw std::invalid_argument("gnpq: n must be positive");
  if (!(params.p > 0) || !(params.q > 0) || !(params.p + params.q <= 1.0)) {
    throw std::invalid_argument("gnpq: need p > 0, q > 0, p + q <= 1");
  }
}

// Goodness of an existing edge (u, v) under `conv`: the sign of
// M_uv x_u x_v is -sigma_uv pat_u pat_v; adjacency wants it positive.
inline int edge_class(int sigma, int pu, int pv, SignConvention conv) {
  int p = -sigma * pu * pv;
  if (p == 0) return 0;
  bool good = (conv == SignConvention::adjacency_like) ? (p > 0) : (p < 0);
  return good ? +1 : -1;
}

inline bool good_pair(const SignedGraph& G, const State& pattern, int u, int v) {
  int sigma = G.sign(u, v);
  return sigma != 0 && edge_class(sigma, pattern[u], pattern[v], SignConvention::adjacency_like) > 0;
}

int env_thread_cap() {
  const char* env = std::getenv("NODALKIT_THREADS");
  if (env == nullptr) return 0;
  int v = std::atoi(env);
  return v > 0 ? v : 1;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the purpose tag
  for (char c : purpose) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ h);
}

std::pair<SignedGraph, SymmetricMatrix> sample_gnpq(const GnpqParams& params) {
  validate_params(params);
  const int n = params.n;
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::uint64_t key = splitmix64(params.seed ^ splitmix64((static_cast<std::uint64_t>(i) << 32) |
                                                              static_cast<std::uint64_t>(j)));
      double u = unit_double(key);
      double v = (u < params.p) ? 1.0 : (u < params.p + params.q ? -1.0 : 0.0);
      A(i, j) = A(j, i) = v;
    }
  }
  SymmetricMatrix M(std::move(A));
  return {from_symmetric_matrix(M), std::move(M)};
}

std::optional<std::vector<int>> find_clique_domain(const SignedGraph& G, const Vector& phi,
                                                   const std::vector<int>& S, int k,
                                                   double zero_tol) {
  if (k < 2) throw std::invalid_argument("clique domain: k must be at least 2");
  State pattern = sign_pattern(phi, zero_tol);
  std::vector<int> cand;
  for (int v : S) {
    if (v < 0 || v >= G.n) throw std::invalid_argument("clique domain: vertex out of range");
    if (pattern[v] != 0) cand.push_back(v);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const int m = static_cast<int>(cand.size());
  if (m < k) return std::nullopt;
  // Depth-first extension in ascending vertex order: the first completed
  // clique is the lexicographically smallest witness.
  std::vector<int> chosen;
  chosen.reserve(k);
  auto extend = [&](auto&& self, int from) -> bool {
    if (static_cast<int>(chosen.size()) == k) return true;
    int need = k - static_cast<int>(chosen.size());
    for (int idx = from; idx + need <= m; ++idx) {
      int v = cand[idx];
      bool ok = true;
      for (int u : chosen) {
        if (!good_pair(G, pattern, u, v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(v);
      if (self(self, idx + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(extend, 0)) return chosen;
  return std::nullopt;
}

bool clique_domain_present(const SignedGraph& G, const Vector& phi, const std::vector<int>& S,
                           int k, double zero_tol) {
  return find_clique_domain(G, phi, S, k, zero_tol).has_value();
}

bool validate_clique_domains(const SignedGraph& G, const Vector& phi,
                             const std::vector<std::vector<int>>& domains, int k,
                             double zero_tol) {
  State pattern = sign_pattern(phi, zero_tol);
  std::vector<char> used(G.n, 0);
  for (const std::vector<int>& dom : domains) {
    if (static_cast<int>(dom.size()) != k) return false;
    for (int v : dom) {
      if (v < 0 || v >= G.n || used[v] || pattern[v] == 0) return false;
      used[v] = 1;
    }
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = a + 1; b < dom.size(); ++b) {
        if (!good_pair(G, pattern, dom[a], dom[b])) return false;
      }
    }
  }
  return true;
}

int resolve_scan_size(const GnpqParams& params, const CliqueDomainConfig& config) {
  if (config.k < 2) throw std::invalid_argument("clique domain: k must be at least 2");
  int s = config.s;
  if (s <= 0) {
    validate_params(params);
    double paq = std::min(params.p, params.q);
    double raw = std::ceil(std::pow(paq, -static_cast<double>(config.k)));
    int cap = std::max(config.k, std::min(params.n / 4, config.s_cap));
    s = static_cast<int>(std::min<double>(raw, cap));
  }
  return std::max(s, config.k);
}

GreedyCliqueStats greedy_clique_partition(const SignedGraph& G, const Vector& phi,
                                          const GnpqParams& params,
                                          const CliqueDomainConfig& config) {
  GreedyCliqueStats out;
  out.s_used = resolve_scan_size(params, config);
  const int k = config.k;
  long long budget = config.budget;
  if (budget < 0) budget = 200LL * G.n / std::max(1, out.s_used);
  State pattern = sign_pattern(phi, config.zero_tol);

  // Pool of not-yet-removed vertices that can appear in a clique at all;
  // vertices with a vanishing entry stay leftover by construction.
  std::vector<int> pool;
  std::vector<int> pos(G.n, -1);
  for (int v = 0; v < G.n; ++v) {
    if (pattern[v] != 0) {
      pos[v] = static_cast<int>(pool.size());
      pool.push_back(v);
    }
  }
  std::mt19937_64 rng(config.seed);
  long long fails = 0;
  std::vector<int> scan;
  while (static_cast<int>(pool.size()) >= k && fails < budget) {
    scan.clear();
    if (static_cast<int>(pool.size()) <= out.s_used) {
      scan = pool;
    } else {
      for (int i = 0; i < out.s_used; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
        int j = pick(rng);
        std::swap(pool[i], pool[j]);
        pos[pool[i]] = i;
        pos[pool[j]] = j;
        scan.push_back(pool[i]);
      }
    }
    std::optional<std::vector<int>> dom = find_clique_domain(G, phi, scan, k, config.zero_tol);
    if (!dom) {
      ++fails;
      out.budget_used = std::max(out.budget_used, fails);
      continue;
    }
    fails = 0;
    for (int v : *dom) {
      int at = pos[v];
      int last = static_cast<int>(pool.size()) - 1;
      std::swap(pool[at], pool[last]);
      pos[pool[at]] = at;
      pos[v] = -1;
      pool.pop_back();
    }
    out.domains.push_back(std::move(*dom));
  }
  out.removed = static_cast<int>(out.domains.size());
  out.leftover = G.n - out.removed * k;
  return out;
}

MaxDomainCheck max_domain_size_bound_check(const SignedGraph& G, const Vector& phi,
                                           double p_and_q, SignConvention conv,
                                           double zero_tol) {
  if (!(p_and_q > 0) || !(p_and_q < 1)) {
    throw std::invalid_argument("max domain bound: p_and_q must lie in (0, 1)");
  }
  MaxDomainCheck out;
  out.bound = static_cast<int>(
      std::ceil(3.0 * std::log(static_cast<double>(std::max(2, G.n))) / std::log(1.0 / (1.0 - p_and_q))));
  State pattern = sign_pattern(phi, zero_tol);
  std::vector<int> support;
  for (int v = 0; v < G.n; ++v) {
    if (pattern[v] != 0) support.push_back(v);
  }
  if (support.empty()) {
    out.ok = true;
    return out;
  }
  std::vector<std::int8_t> cls = classify_edges(G, pattern, conv);
  NodalDecomposition dec =
      min_partition_heuristic(G, support, cls, derive_seed(1, "max-domain"), 4);

  // Local growth: absorb neighbors all of whose edges into the part are good.
  // good_into / bad_into only grow, so a vertex that ever gains a bad edge
  // into the part is dead for good and the pass is a single linear sweep.
  auto grow = [&](const std::vector<int>& seed_part) -> int {
    std::vector<int> good_into(G.n, 0), bad_into(G.n, 0);
    std::vector<char> in_part(G.n, 0);
    std::vector<int> queue;
    int size = 0;
    auto absorb = [&](int v) {
      in_part[v] = 1;
      ++size;
      for (const auto& [nb, sg] : G.adj[v]) {
        int c = edge_class(sg, pattern[v], pattern[nb], conv);
        if (c > 0) {
          if (++good_into[nb] == 1 && !in_part[nb] && bad_into[nb] == 0 && pattern[nb] != 0) {
            queue.push_back(nb);
          }
        } else if (c < 0) {
          ++bad_into[nb];
        }
      }
    };
    for (int v : seed_part) absorb(v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      if (in_part[v] || bad_into[v] > 0) continue;
      absorb(v);
    }
    return size;
  };

  std::vector<const std::vector<int>*> order;
  for (const auto& p : dec.parts) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->size() != b->size()) return a->size() > b->size();
    return a->front() < b->front();
  });
  int largest = order.empty() ? 0 : static_cast<int>(order.front()->size());
  int threshold = std::max(1, largest / 2);
  int grown = 0;
  for (const auto* p : order) {
    if (static_cast<int>(p->size()) < threshold || grown >= 8) break;
    out.max_size = std::max(out.max_size, grow(*p));
    ++grown;
  }
  out.max_size = std::max(out.max_size, largest);
  out.ok = out.max_size <= out.bound;
  return out;
}

std::vector<bool> path_triviality_scan(const SignedGraph& G, const Spectrum& spectrum,
                                       double zero_tol) {
  std::vector<bool> trivial;
  trivial.reserve(spectrum.eigenvectors.cols());
  for (int i = 0; i < spectrum.eigenvectors.cols(); ++i) {
    PathDomainCounts c =
        path_domain_counts(G, spectrum.eigenvectors.col(i), SignConvention::laplacian_like,
                           zero_tol);
    trivial.push_back(c.kappa_gt == 1);
  }
  return trivial;
}

namespace {

EigenvectorStats eigenvector_stats(const SignedGraph& G, const Vector& phi, int index,
                                   const GnpqParams& trial_params, const ExperimentConfig& config,
                                   int s_resolved, long long budget_resolved) {
  EigenvectorStats st;
  st.index = index;
  double ztol = config.clique.zero_tol;
  st.paths = path_domain_counts(G, phi, SignConvention::laplacian_like, ztol);
  st.path_trivial = (st.paths.kappa_gt == 1);

  State pattern = sign_pattern(phi, ztol);
  std::vector<int> support;
  for (int v = 0; v < G.n; ++v) {
    if (pattern[v] != 0) support.push_back(v);
  }
  if (!support.empty()) {
    std::vector<std::int8_t> cls = classify_edges(G, pattern, SignConvention::adjacency_like);
    std::uint64_t nodal_seed =
        splitmix64(derive_seed(trial_params.seed, "nodal") ^ static_cast<std::uint64_t>(index));
    NodalDecomposition dec =
        min_partition_heuristic(G, support, cls, nodal_seed, config.nodal_restarts);
    st.N_heur = dec.N;
  }

  CliqueDomainConfig cc = config.clique;
  cc.s = s_resolved;
  cc.budget = budget_resolved;
  cc.seed =
      splitmix64(derive_seed(trial_params.seed, "greedy") ^ static_cast<std::uint64_t>(index));
  GreedyCliqueStats gs = greedy_clique_partition(G, phi, trial_params, cc);
  st.clique_count = gs.removed;
  st.leftover = gs.leftover;

  MaxDomainCheck mdc = max_domain_size_bound_check(
      G, phi, std::min(trial_params.p, trial_params.q), SignConvention::adjacency_like, ztol);
  st.max_size = mdc.max_size;
  st.bound = mdc.bound;
  st.bound_ok = mdc.ok;
  return st;
}

}  // namespace

ExperimentResult run_experiment(const GnpqParams& params, const ExperimentConfig& config) {
  validate_params(params);
  if (config.trials < 1) throw std::invalid_argument("experiment: trials must be at least 1");
  ExperimentResult out;
  out.params = params;
  out.k = config.clique.k;
  out.s = resolve_scan_size(params, config.clique);
  out.budget = config.clique.budget >= 0 ? config.clique.budget
                                         : 200LL * params.n / std::max(1, out.s);
  out.trials = config.trials;
  out.records.resize(static_cast<std::size_t>(config.trials) * params.n);

  int threads = config.threads;
  if (threads <= 0) threads = env_thread_cap();
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, config.trials));

  std::atomic<int> next_trial{0};
  auto worker = [&]() {
    for (int t = next_trial.fetch_add(1); t < config.trials; t = next_trial.fetch_add(1)) {
      GnpqParams tp = params;
      tp.seed = params.seed + static_cast<std::uint64_t>(t);
      auto [G, A] = sample_gnpq(tp);
      Spectrum spectrum = eigendecompose(A);
      for (int i = 0; i < params.n; ++i) {
        ExperimentRecord rec;
        rec.seed = tp.seed;
        rec.stats = eigenvector_stats(G, spectrum.eigenvectors.col(i), i, tp, config, out.s,
                                      out.budget);
        out.records[static_cast<std::size_t>(t) * params.n + i] = std::move(rec);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> crew;
    for (int w = 0; w < threads; ++w) crew.emplace_back(worker);
    for (std::thread& th : crew) th.join();
  }

  double n_records = static_cast<double>(out.records.size());
  double trivial = 0, ok = 0, cliq = 0, left = 0, nheur = 0;
  for (const ExperimentRecord& rec : out.records) {
    trivial += rec.stats.path_trivial;
    ok += rec.stats.bound_ok;
    cliq += rec.stats.clique_count;
    left += rec.stats.leftover;
    nheur += rec.stats.N_heur;
  }
  out.path_trivial_rate = trivial / n_records;
  out.bound_ok_rate = ok / n_records;
  out.mean_clique_over_n = cliq / n_records / params.n;
  out.mean_leftover_over_n = left / n_records / params.n;
  double nlogn = params.n / std::log(std::max(2.0, static_cast<double>(params.n)));
  out.mean_N_over_n_log_n = nheur / n_records / nlogn;
  return out;
}

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "seed,i,kappa_gt,N_heur,clique_count,leftover,max_size,bound_ok\n";
  for (const ExperimentRecord& rec : result.records) {
    os << rec.seed << ',' << rec.stats.index << ',' << rec.stats.paths.kappa_gt << ','
       << rec.stats.N_heur << ',' << rec.stats.clique_count << ',' << rec.stats.leftover << ','
       << rec.stats.max_size << ',' << (rec.stats.bound_ok ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string experiment_json(const ExperimentResult& result) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"n", result.params.n},
                   {"p", result.params.p},
                   {"q", result.params.q},
                   {"seed", result.params.seed}};
  doc["k"] = result.k;
  doc["s"] = result.s;
  doc["budget"] = result.budget;
  doc["trials"] = result.trials;
  doc["summary"] = {{"path_trivial_rate", result.path_trivial_rate},
                    {"bound_ok_rate", result.bound_ok_rate},
                    {"mean_clique_over_n", result.mean_clique_over_n},
                    {"mean_leftover_over_n", result.mean_leftover_over_n},
                    {"mean_N_over_n_log_n", result.mean_N_over_n_log_n}};
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const ExperimentRecord& rec : result.records) {
    records.push_back({{"seed", rec.seed},
                       {"i", rec.stats.index},
                       {"kappa_lt", rec.stats.paths.kappa_lt},
                       {"kappa_le", rec.stats.paths.kappa_le},
                       {"kappa_gt", rec.stats.paths.kappa_gt},
                       {"kappa_ge", rec.stats.paths.kappa_ge},
                       {"N_heur", rec.stats.N_heur},
                       {"clique_count", rec.stats.clique_count},
                       {"leftover", rec.stats.leftover},
                       {"max_size", rec.stats.max_size},
                       {"bound", rec.stats.bound},
                       {"bound_ok", rec.stats.bound_ok},
                       {"path_trivial", rec.stats.path_trivial}});
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

}  // namespace nodalkit
