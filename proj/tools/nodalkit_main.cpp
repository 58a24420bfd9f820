#include "nodalkit/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Nodal structure of symmetric matrices viewed as signed graphs"};
  app.require_subcommand(1);

  nodalkit::RunConfig cfg;
  std::string convention = "laplacian";
  int exact_cap = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "Per-eigenvector nodal bounds for a matrix");
  CLI::App* basis = app.add_subcommand(
      "construct-basis", "Construct sign-compatible eigenbases achieving the nodal bounds");
  CLI::App* frustration =
      app.add_subcommand("frustration", "Frustration index of the signed graph of a matrix");
  CLI::App* nodal =
      app.add_subcommand("nodal", "Minimal nodal decomposition of a single eigenvector");
  CLI::App* experiment =
      app.add_subcommand("experiment", "Eigenvector statistics over random signed graphs G(n,p,q)");

  for (CLI::App* sub : {analyze, basis, frustration, nodal}) {
    sub->add_option("--input", cfg.input_path,
                    "input file: Matrix Market (symmetric coordinate) or signed edge list")
        ->required();
    sub->add_option("--group-tol", cfg.group_tol, "tolerance for grouping repeated eigenvalues");
    sub->add_option("--exact-cap", exact_cap,
                    "size cap below which frustration/nodal searches run exactly");
  }
  for (CLI::App* sub : {analyze, nodal}) {
    sub->add_option("--convention", convention,
                    "edge goodness convention (laplacian: M_ij x_i x_j < 0 is good)")
        ->check(CLI::IsMember({"laplacian", "adjacency"}));
  }
  basis->add_option("--perturb", cfg.perturb_trials,
                    "run a perturbation stability test with this many trials");
  nodal->add_option("--index", cfg.index, "eigenvector column to decompose (ascending order)")
      ->required();

  experiment->add_option("--n", cfg.gnpq.n, "number of vertices")->required();
  experiment->add_option("--p", cfg.gnpq.p, "positive edge probability")->required();
  experiment->add_option("--q", cfg.gnpq.q, "negative edge probability")->required();
  experiment->add_option("--trials", cfg.trials, "number of sampled graphs (consecutive seeds)");
  experiment->add_option("--k", cfg.clique_k, "negative clique order for the greedy partition");
  experiment->add_option("--s", cfg.scan_s, "candidate scan size (0: automatic)");

  for (CLI::App* sub : {analyze, basis, frustration, nodal, experiment}) {
    sub->add_option("--zero-tol", cfg.zero_tol,
                    "threshold below which entries count as zero (negative: automatic)");
    sub->add_option("--seed", cfg.seed, "seed for heuristics and sampling");
    sub->add_option("--format", cfg.format, "output format: json, csv, or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out_path, "write the result to this file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.convention = convention == "adjacency" ? nodalkit::SignConvention::adjacency_like
                                             : nodalkit::SignConvention::laplacian_like;
  if (exact_cap >= 1) {
    cfg.exact_cap_frustration = exact_cap;
    cfg.exact_cap_nodal = exact_cap;
  }
  if (cfg.command == "experiment") {
    cfg.has_gnpq = true;
    cfg.gnpq.seed = cfg.seed;
  }
  return nodalkit::run_command(cfg, std::cout, std::cerr);
}
