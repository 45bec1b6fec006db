// Command-line front end. Builds a JSON configuration and hands it to the
// shared library.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mblab/mblab.h"

namespace {

struct Options {
  std::string model = "heisenberg";
  int n = 8;
  double h = 1.0;
  int realizations = 1;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string cache;
  std::size_t max_dim = 0;
  int threads = 1;
  std::optional<bool> mintfactor;
  std::vector<double> t_grid;
  double t_max = 100.0;
  std::vector<int> l_grid;
  std::vector<double> alpha;
  double beta = 1.0;
  std::vector<double> kappa;
  int bins = 60;
  int site_a = 0;
  int site_b = -1;
  std::string axis_a = "X";
  std::string axis_b = "Z";
  std::vector<int> region_a;
  int l = 2;
  std::optional<double> e_mob;
  std::vector<int> max_bond;
  double delta = 0.1;
  bool export_mps = false;
  std::string input;
  std::string group_by;
  std::string value_column = "value";
  std::string filter;
  bool print_manifest = false;
};

nlohmann::json to_json(const std::string& experiment, const Options& o) {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["model"] = o.model;
  j["n"] = o.n;
  j["h"] = o.h;
  j["realizations"] = o.realizations;
  j["seed"] = o.seed;
  j["out"] = o.out;
  j["cache"] = o.cache;
  if (o.max_dim > 0) j["max_dim"] = o.max_dim;
  j["threads"] = o.threads;
  if (o.mintfactor) j["mintfactor"] = *o.mintfactor;
  if (!o.t_grid.empty()) j["t_grid"] = o.t_grid;
  j["t_max"] = o.t_max;
  if (!o.l_grid.empty()) j["l_grid"] = o.l_grid;
  if (!o.alpha.empty()) j["alpha"] = o.alpha;
  j["beta"] = o.beta;
  if (!o.kappa.empty()) j["kappa"] = o.kappa;
  j["bins"] = o.bins;
  j["site_a"] = o.site_a;
  j["site_b"] = o.site_b;
  j["axis_a"] = o.axis_a;
  j["axis_b"] = o.axis_b;
  if (!o.region_a.empty()) j["region_a"] = o.region_a;
  j["l"] = o.l;
  if (o.e_mob) j["e_mob"] = *o.e_mob;
  if (!o.max_bond.empty()) j["max_bond"] = o.max_bond;
  j["delta"] = o.delta;
  j["export_mps"] = o.export_mps;
  if (experiment == "plotdata") {
    j["input"] = o.input;
    j["group_by"] = o.group_by;
    j["value_column"] = o.value_column;
    j["filter"] = o.filter;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disordered spin-chain localization toolkit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(mbl_version()));

  Options o;
  app.add_option("--model", o.model, "heisenberg or ising")->check(CLI::IsMember({"heisenberg", "ising"}));
  app.add_option("--n", o.n, "number of sites");
  app.add_option("--h", o.h, "disorder strength");
  app.add_option("--realizations", o.realizations, "disorder realizations");
  app.add_option("--seed", o.seed, "seed of realization 0");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--cache", o.cache, "eigensystem cache directory (empty: off)");
  app.add_option("--max-dim", o.max_dim, "Hilbert-space dimension cap");
  app.add_option("--threads", o.threads, "worker threads");
  app.add_option("--mintfactor", o.mintfactor, "divide probes by min(t,1) before fitting");
  app.add_option("--t", o.t_grid, "explicit time grid");
  app.add_option("--t-max", o.t_max, "largest time of the default grid");
  app.add_option("--l", o.l_grid, "truncation radii / distances");
  app.add_option("--alpha", o.alpha, "filter widths");
  app.add_option("--beta", o.beta, "inverse temperature");
  app.add_option("--kappa", o.kappa, "explicit kappa grid");
  app.add_option("--bins", o.bins, "histogram bins");
  app.add_option("--site-a", o.site_a, "site of observable A");
  app.add_option("--site-b", o.site_b, "site of observable B (-1: last)");
  app.add_option("--axis-a", o.axis_a, "Pauli axis of A");
  app.add_option("--axis-b", o.axis_b, "Pauli axis of B");
  app.add_option("--region-a", o.region_a, "sites of region A (thermalize)");
  app.add_option("--radius", o.l, "region padding l (thermalize)");
  app.add_option("--e-mob", o.e_mob, "mobility edge (default: median energy)");
  app.add_option("--max-bond", o.max_bond, "MPS bond caps");
  app.add_option("--delta", o.delta, "smoothing of the max entropy");
  app.add_flag("--export-mps", o.export_mps, "write MPS tensors");
  app.add_flag("--print-manifest", o.print_manifest, "print the run manifest");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"spectrum", "eigenvalues per realization"},
      {"assumptions", "gap assumptions"},
      {"lr-probe", "truncation, commutator and subspace probes with fits"},
      {"filter-check", "filter factorization and error-function bounds"},
      {"cluster-a", "eigenstate clustering under dynamical localization"},
      {"cluster-b", "clustering below a mobility edge"},
      {"mps", "MPS compression of eigenstates"},
      {"liom", "local integrals of motion"},
      {"thermalize", "absence-of-thermalization probe"},
      {"reproduce-fig1a", "density of states"},
      {"reproduce-fig1b", "integrated density of states"},
      {"reproduce-fig1c", "eigenstate entanglement versus energy"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  auto* plot = app.add_subcommand("plotdata", "aggregate a CSV column into mean/variance");
  plot->add_option("input", o.input, "CSV file")->required();
  plot->add_option("--group-by", o.group_by, "grouping column")->required();
  plot->add_option("--value", o.value_column, "value column");
  plot->add_option("--filter", o.filter, "column=value row filter");

  CLI11_PARSE(app, argc, argv);

  const std::string experiment = app.get_subcommands().front()->get_name();
  const std::string config = to_json(experiment, o).dump();
  char* manifest = nullptr;
  const mbl_status st = mbl_run_experiment(config.c_str(), &manifest);
  if (st != MBL_OK) {
    std::cerr << "mblab: " << mbl_status_string(st) << ": " << mbl_last_error() << "\n";
    return static_cast<int>(st) + 1;
  }
  if (o.print_manifest) {
    std::cout << manifest << "\n";
  } else {
    const auto j = nlohmann::json::parse(manifest);
    for (const auto& f : j["files"]) std::cout << f.get<std::string>() << "\n";
  }
  mbl_string_free(manifest);
  return 0;
}
