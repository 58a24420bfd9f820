#include "nodalkit/io.hpp"

#include "nodalkit/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nodalkit {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

// Next content line (blank lines and '#' comments skipped); false at EOF.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t at = line.find_first_not_of(" \t\r");
    if (at == std::string::npos || line[at] == '#') continue;
    return true;
  }
  return false;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SignedGraph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) parse_fail(line_no + 1, "missing 'n m' header");
  int n = 0;
  long long m = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra)) parse_fail(line_no, "header must be 'n m'");
    if (n <= 0) parse_fail(line_no, "vertex count must be positive");
    if (m < 0) parse_fail(line_no, "edge count must be nonnegative");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<std::pair<int, int>> seen;
  for (long long e = 0; e < m; ++e) {
    if (!next_content_line(in, line, line_no)) {
      parse_fail(line_no + 1, "expected " + std::to_string(m) + " edges, got " +
                                  std::to_string(e));
    }
    std::istringstream es(line);
    int u = 0, v = 0, s = 0;
    std::string extra;
    if (!(es >> u >> v >> s) || (es >> extra)) parse_fail(line_no, "edge line must be 'i j s'");
    if (u < 0 || u >= n || v < 0 || v >= n) parse_fail(line_no, "vertex id out of range");
    if (u == v) parse_fail(line_no, "self-loops are not allowed");
    if (s != 1 && s != -1) parse_fail(line_no, "sign must be +1 or -1");
    if (u > v) std::swap(u, v);
    seen.push_back({u, v});
    edges.push_back({u, v, s});
  }
  if (next_content_line(in, line, line_no)) parse_fail(line_no, "trailing content after edges");
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::runtime_error("parse error: duplicate edge in list");
  }
  return make_signed_graph(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const SignedGraph& G) {
  out << G.n << ' ' << G.edges.size() << '\n';
  for (const Edge& e : G.edges) {
    out << e.u << ' ' << e.v << ' ' << (e.sign > 0 ? "1" : "-1") << '\n';
  }
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) parse_fail(1, "empty file");
  ++line_no;
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    for (std::string* t : {&object, &fmt, &field, &symmetry}) {
      std::transform(t->begin(), t->end(), t->begin(),
                     [](unsigned char c) { return std::tolower(c); });
    }
    if (banner != "%%MatrixMarket") parse_fail(line_no, "missing %%MatrixMarket banner");
    if (object != "matrix" || fmt != "coordinate") {
      parse_fail(line_no, "only 'matrix coordinate' inputs are supported");
    }
    if (field != "real" && field != "integer") {
      parse_fail(line_no, "only real or integer values are supported");
    }
    if (symmetry != "symmetric") parse_fail(line_no, "only symmetric matrices are supported");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    std::size_t at = line.find_first_not_of(" \t\r");
    if (at == std::string::npos) continue;
    break;
  }
  int rows = 0, cols = 0;
  long long nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) parse_fail(line_no, "size line must be 'rows cols nnz'");
    if (rows != cols) parse_fail(line_no, "matrix must be square");
    if (rows <= 0 || nnz < 0) parse_fail(line_no, "invalid dimensions");
  }
  Matrix M = Matrix::Zero(rows, cols);
  std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
  for (long long e = 0; e < nnz; ++e) {
    if (!next_content_line(in, line, line_no)) {
      parse_fail(line_no + 1, "expected " + std::to_string(nnz) + " entries, got " +
                                  std::to_string(e));
    }
    std::istringstream es(line);
    int i = 0, j = 0;
    double v = 0;
    if (!(es >> i >> j >> v)) parse_fail(line_no, "entry line must be 'i j value'");
    if (i < 1 || i > rows || j < 1 || j > cols) parse_fail(line_no, "entry index out of range");
    --i;
    --j;
    if (seen[static_cast<std::size_t>(i) * cols + j]) parse_fail(line_no, "duplicate entry");
    seen[static_cast<std::size_t>(i) * cols + j] = 1;
    seen[static_cast<std::size_t>(j) * cols + i] = 1;
    M(i, j) = M(j, i) = v;
  }
  return M;
}

void write_matrix_market(std::ostream& out, const SymmetricMatrix& M) {
  const int n = M.n();
  long long nnz = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (M(i, j) != 0.0) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << ' ' << n << ' ' << nnz << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (M(i, j) != 0.0) out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(M(i, j)) << '\n';
    }
  }
}

SymmetricMatrix read_input_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();
  if (content.rfind("%%MatrixMarket", 0) == 0) {
    std::istringstream ss(content);
    return SymmetricMatrix(read_matrix_market(ss));
  }
  std::istringstream ss(content);
  return canonical_matrix(read_edge_list(ss));
}

namespace {

ordered_json bound_report_fields(const BoundReport& rep) {
  return ordered_json{{"k", rep.k},         {"r", rep.r},         {"nu", rep.nu},
                      {"f", rep.f},         {"N", rep.N},         {"exactN", rep.exactN},
                      {"lower", rep.lower}, {"upper", rep.upper}, {"satisfied", rep.satisfied}};
}

ordered_json signed_basis_fields(const SignedBasisResult& res) {
  ordered_json vectors = ordered_json::array();
  for (const SignedBasisVector& v : res.vectors) {
    ordered_json phi = ordered_json::array();
    for (int i = 0; i < v.phi.size(); ++i) phi.push_back(v.phi[i]);
    vectors.push_back({{"phi", std::move(phi)},
                       {"eps", v.eps},
                       {"partition", v.partition},
                       {"bound", v.bound},
                       {"N", v.N}});
  }
  return ordered_json{{"eigenvalue", res.lambda},
                      {"k", res.k},
                      {"r", res.r},
                      {"f", res.f},
                      {"vectors", std::move(vectors)}};
}

}  // namespace

std::string bound_report_json(const BoundReport& rep) { return bound_report_fields(rep).dump(); }

std::string signed_basis_result_json(const SignedBasisResult& res) {
  return signed_basis_fields(res).dump();
}

namespace {

struct AnalyzedVector {
  double lambda = 0;
  int index = 0;
  BoundReport report;
  PathDomainCounts paths;
};

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + cfg.out_path);
  f << text;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SymmetricMatrix M = read_input_matrix(cfg.input_path);
  SignedGraph G = from_symmetric_matrix(M);
  auto comps = connected_components(G);
  if (comps.size() > 1) {
    err << "warning: matrix is reducible; components:";
    for (const auto& c : comps) {
      err << " {";
      for (std::size_t i = 0; i < c.size(); ++i) err << (i ? "," : "") << c[i];
      err << "}";
    }
    err << "\n";
  }
  Spectrum spec = eigendecompose(M);
  std::vector<EigenGroup> groups = group_eigenvalues(spec, cfg.group_tol);
  GraphInvariants inv = graph_invariants(G);
  bool f_exact = G.n <= cfg.exact_cap_frustration;
  FrustrationResult fr = f_exact ? frustration_index_exact(G, cfg.exact_cap_frustration)
                                 : frustration_index_heuristic(G, cfg.seed);

  bool all_satisfied = true;
  ordered_json jgroups = ordered_json::array();
  std::vector<AnalyzedVector> rows;
  for (const EigenGroup& g : groups) {
    ordered_json jg;
    jg["lambda"] = g.lambda;
    jg["k"] = g.k;
    jg["r"] = g.r;
    jg["i0"] = eigenspace_common_zeros(spec, g, cfg.zero_tol);
    ordered_json jreports = ordered_json::array();
    for (int c = g.first; c < g.first + g.r; ++c) {
      Vector phi = spec.eigenvectors.col(c);
      State pattern = sign_pattern(phi, cfg.zero_tol);
      if (std::find(pattern.begin(), pattern.end(), 0) != pattern.end()) continue;
      AnalyzedVector av;
      av.lambda = g.lambda;
      av.index = c;
      av.paths = path_domain_counts(G, phi, cfg.convention, cfg.zero_tol);
      BoundReport& rep = av.report;
      rep.k = g.k;
      rep.r = g.r;
      rep.nu = inv.nu;
      rep.f = fr.f;
      NodalDecomposition dec =
          G.n <= cfg.exact_cap_nodal
              ? minimal_nodal_decomposition_exact(G, phi, cfg.convention, cfg.exact_cap_nodal,
                                                  10.0, cfg.zero_tol)
              : minimal_nodal_decomposition_heuristic(G, phi, cfg.convention, cfg.seed,
                                                      cfg.zero_tol);
      rep.N = dec.N;
      rep.exactN = f_exact && dec.certified_minimal;
      rep.lower = rep.k + (rep.r - 1) - rep.nu;
      rep.upper = rep.k + rep.f;
      rep.satisfied = rep.lower <= rep.N && rep.N <= rep.upper;
      all_satisfied = all_satisfied && rep.satisfied;
      ordered_json jr = bound_report_fields(rep);
      jr["index"] = c;
      jr["paths"] = {{"kappa_lt", av.paths.kappa_lt},
                     {"kappa_le", av.paths.kappa_le},
                     {"kappa_gt", av.paths.kappa_gt},
                     {"kappa_ge", av.paths.kappa_ge}};
      jreports.push_back(std::move(jr));
      rows.push_back(std::move(av));
    }
    jg["reports"] = std::move(jreports);
    jgroups.push_back(std::move(jg));
  }

  if (cfg.format == "json") {
    ordered_json doc;
    doc["n"] = G.n;
    doc["e"] = inv.e;
    doc["kappa"] = inv.kappa;
    doc["nu"] = inv.nu;
    doc["f"] = fr.f;
    doc["frustration_certified"] = fr.certified;
    doc["groups"] = std::move(jgroups);
    emit(cfg, out, doc.dump(2) + "\n");
  } else if (cfg.format == "csv") {
    std::ostringstream os;
    os << "lambda,index,k,r,nu,f,N,exactN,lower,upper,satisfied\n";
    for (const AnalyzedVector& av : rows) {
      const BoundReport& r = av.report;
      os << format_double(av.lambda) << ',' << av.index << ',' << r.k << ',' << r.r << ','
         << r.nu << ',' << r.f << ',' << r.N << ',' << (r.exactN ? 1 : 0) << ',' << r.lower << ','
         << r.upper << ',' << (r.satisfied ? 1 : 0) << '\n';
    }
    emit(cfg, out, os.str());
  } else {
    std::ostringstream os;
    os << "n=" << G.n << " e=" << inv.e << " kappa=" << inv.kappa << " nu=" << inv.nu
       << " f=" << fr.f << (fr.certified ? " (exact)" : " (heuristic)") << "\n";
    for (const EigenGroup& g : groups) {
      os << "group lambda=" << format_double(g.lambda) << " k=" << g.k << " r=" << g.r << "\n";
      for (const AnalyzedVector& av : rows) {
        if (av.report.k != g.k || av.lambda != g.lambda) continue;
        const BoundReport& r = av.report;
        os << "  vector " << av.index << ": N=" << r.N << (r.exactN ? "" : "~") << " in ["
           << r.lower << ", " << r.upper << "] " << (r.satisfied ? "ok" : "VIOLATED")
           << " kappa_gt=" << av.paths.kappa_gt << "\n";
      }
    }
    emit(cfg, out, os.str());
  }
  return all_satisfied ? 0 : 1;
}

int cmd_construct_basis(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SymmetricMatrix M = read_input_matrix(cfg.input_path);
  Spectrum spec = eigendecompose(M);
  std::vector<EigenGroup> groups = group_eigenvalues(spec, cfg.group_tol);

  ConstructionConfig cc;
  cc.analyze.zero_tol = cfg.zero_tol;
  cc.frustration_cap = cfg.exact_cap_frustration;
  cc.nodal_cap = cfg.exact_cap_nodal;
  cc.seed = cfg.seed;

  ValidationOptions vo;
  vo.zero_tol = cfg.zero_tol;
  vo.frustration_cap = cfg.exact_cap_frustration;
  vo.nodal_cap = cfg.exact_cap_nodal;
  vo.seed = cfg.seed;

  bool all_ok = true;
  bool any_error = false;
  ordered_json results = ordered_json::array();
  std::ostringstream text;
  for (const EigenGroup& g : groups) {
    try {
      SignedBasisResult res = construct_signed_basis(M, spec, g, cc);
      ValidationReport rep = validate_signed_basis(M, g, res, vo);
      all_ok = all_ok && rep.all_ok;
      ordered_json item = signed_basis_fields(res);
      item["exact_backend"] = res.exact_backend;
      item["validation"] = {{"orthonormal", rep.orthonormal},
                            {"residual_ok", rep.residual_ok},
                            {"sign_compatible", rep.sign_compatible},
                            {"partitions_valid", rep.partitions_valid},
                            {"bounds_hold", rep.bounds_hold},
                            {"all_ok", rep.all_ok},
                            {"max_orth_residual", rep.max_orth_residual},
                            {"max_eigen_residual", rep.max_eigen_residual}};
      if (cfg.perturb_trials > 0) {
        PerturbationReport pr =
            perturbation_stability_test(res, 1.0, cfg.perturb_trials, cfg.seed, cfg.zero_tol);
        item["perturbation"] = {{"trials", pr.trials},
                                {"passed", pr.passed},
                                {"fraction", pr.fraction},
                                {"upsilon", pr.upsilon}};
      }
      results.push_back(std::move(item));
      text << "lambda=" << format_double(res.lambda) << " k=" << res.k << " r=" << res.r
           << " f=" << res.f << (res.exact_backend ? " backend=exact" : " backend=float")
           << (rep.all_ok ? " ok" : " FAILED") << "\n";
      for (std::size_t s = 0; s < res.vectors.size(); ++s) {
        text << "  vector " << (s + 1) << ": N=" << res.vectors[s].N
             << " bound=" << res.vectors[s].bound << "\n";
      }
    } catch (const std::exception& ex) {
      any_error = true;
      err << "error: group lambda=" << format_double(g.lambda) << ": " << ex.what() << "\n";
      results.push_back(ordered_json{{"eigenvalue", g.lambda}, {"error", ex.what()}});
      text << "lambda=" << format_double(g.lambda) << " ERROR: " << ex.what() << "\n";
    }
  }
  if (cfg.format == "json") {
    ordered_json doc;
    doc["results"] = std::move(results);
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    emit(cfg, out, text.str());
  }
  if (any_error) return 2;
  return all_ok ? 0 : 1;
}

int cmd_frustration(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  SymmetricMatrix M = read_input_matrix(cfg.input_path);
  SignedGraph G = from_symmetric_matrix(M);
  FrustrationResult fr = G.n <= cfg.exact_cap_frustration
                             ? frustration_index_exact(G, cfg.exact_cap_frustration)
                             : frustration_index_heuristic(G, cfg.seed);
  if (cfg.format == "json") {
    ordered_json doc{{"n", G.n},
                     {"e", static_cast<long long>(G.edges.size())},
                     {"f", fr.f},
                     {"certified", fr.certified},
                     {"state", fr.state}};
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "f=" << fr.f << (fr.certified ? " (exact)" : " (heuristic)") << " state=";
    for (int s : fr.state) os << (s > 0 ? '+' : '-');
    os << "\n";
    emit(cfg, out, os.str());
  }
  return 0;
}

int cmd_nodal(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  SymmetricMatrix M = read_input_matrix(cfg.input_path);
  SignedGraph G = from_symmetric_matrix(M);
  Spectrum spec = eigendecompose(M);
  if (cfg.index < 0 || cfg.index >= G.n) {
    throw std::invalid_argument("nodal: --index must select an eigenvector column in [0, n)");
  }
  Vector phi = spec.eigenvectors.col(cfg.index);
  NodalDecomposition dec = support_nodal_count(G, phi, cfg.convention, cfg.exact_cap_nodal, 10.0,
                                               cfg.zero_tol);
  int support = 0;
  State pattern = sign_pattern(phi, cfg.zero_tol);
  for (int s : pattern) support += (s != 0);
  if (cfg.format == "json") {
    ordered_json doc{{"index", cfg.index},
                     {"lambda", spec.eigenvalues[cfg.index]},
                     {"support", support},
                     {"N", dec.N},
                     {"certified_minimal", dec.certified_minimal},
                     {"parts", dec.parts}};
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "index=" << cfg.index << " lambda=" << format_double(spec.eigenvalues[cfg.index])
       << " support=" << support << " N=" << dec.N
       << (dec.certified_minimal ? " (exact)" : " (heuristic)") << "\n";
    for (const auto& part : dec.parts) {
      os << " ";
      for (int v : part) os << ' ' << v;
      os << "\n";
    }
    emit(cfg, out, os.str());
  }
  return 0;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  ExperimentConfig ec;
  ec.clique.k = cfg.clique_k;
  ec.clique.s = cfg.scan_s;
  ec.clique.zero_tol = cfg.zero_tol;
  ec.trials = cfg.trials;
  ExperimentResult res = run_experiment(cfg.gnpq, ec);
  if (cfg.format == "csv") {
    emit(cfg, out, experiment_csv(res));
  } else if (cfg.format == "json") {
    emit(cfg, out, experiment_json(res));
  } else {
    std::ostringstream os;
    os << "n=" << res.params.n << " p=" << format_double(res.params.p)
       << " q=" << format_double(res.params.q) << " trials=" << res.trials << " k=" << res.k
       << " s=" << res.s << " budget=" << res.budget << "\n"
       << "path_trivial_rate=" << format_double(res.path_trivial_rate) << "\n"
       << "bound_ok_rate=" << format_double(res.bound_ok_rate) << "\n"
       << "mean_clique_over_n=" << format_double(res.mean_clique_over_n) << "\n"
       << "mean_leftover_over_n=" << format_double(res.mean_leftover_over_n) << "\n"
       << "mean_N_over_n_log_n=" << format_double(res.mean_N_over_n_log_n) << "\n";
    emit(cfg, out, os.str());
  }
  return 0;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.exact_cap_frustration < 1 || config.exact_cap_nodal < 1) {
      throw std::invalid_argument("exact caps must be at least 1");
    }
    if (config.format != "json" && config.format != "csv" && config.format != "text") {
      throw std::invalid_argument("format must be json, csv, or text");
    }
    const bool wants_gnpq = (config.command == "experiment");
    if (wants_gnpq) {
      if (!config.has_gnpq || !config.input_path.empty()) {
        throw std::invalid_argument("experiment takes --n/--p/--q, not --input");
      }
    } else {
      if (config.input_path.empty() || config.has_gnpq) {
        throw std::invalid_argument(config.command + " takes exactly one input source (--input)");
      }
    }
    if (config.command == "analyze") return cmd_analyze(config, out, err);
    if (config.command == "construct-basis") return cmd_construct_basis(config, out, err);
    if (config.command == "frustration") return cmd_frustration(config, out, err);
    if (config.command == "nodal") return cmd_nodal(config, out, err);
    if (config.command == "experiment") return cmd_experiment(config, out, err);
    throw std::invalid_argument("unknown command: " + config.command);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace nodalkit
