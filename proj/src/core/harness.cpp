#include "harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cache.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "pipelines.hpp"

extern "C" void openblas_set_num_threads(int);

namespace mbl {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> ExperimentConfig::times() const {
  return t_grid.empty() ? geometric_time_grid(t_max) : t_grid;
}

std::vector<int> ExperimentConfig::distances() const {
  if (!l_grid.empty()) return l_grid;
  std::vector<int> ls;
  for (int l = 0; l < n_sites; ++l) ls.push_back(l);
  return ls;
}

ExperimentConfig config_from_json(const json& j) {
  require(j.is_object(), ErrorCode::InvalidArgument, "configuration must be a JSON object");
  ExperimentConfig c;
  try {
    c.experiment = j.value("experiment", c.experiment);
    c.model = j.value("model", c.model);
    c.n_sites = j.value("n", c.n_sites);
    c.h = j.value("h", c.h);
    c.realizations = j.value("realizations", c.realizations);
    c.seed_base = j.value("seed", c.seed_base);
    c.t_grid = j.value("t_grid", c.t_grid);
    c.t_max = j.value("t_max", c.t_max);
    c.l_grid = j.value("l_grid", c.l_grid);
    c.alpha_grid = j.value("alpha", c.alpha_grid);
    c.beta = j.value("beta", c.beta);
    c.kappa_grid = j.value("kappa", c.kappa_grid);
    c.bins = j.value("bins", c.bins);
    c.out_dir = j.value("out", c.out_dir);
    c.cache_dir = j.value("cache", c.cache_dir);
    c.max_dim = j.value("max_dim", c.max_dim);
    c.threads = j.value("threads", c.threads);
    if (j.contains("mintfactor") && !j["mintfactor"].is_null()) c.mintfactor = j["mintfactor"].get<bool>();
    c.site_a = j.value("site_a", c.site_a);
    c.site_b = j.value("site_b", c.site_b);
    c.axis_a = j.value("axis_a", c.axis_a);
    c.axis_b = j.value("axis_b", c.axis_b);
    c.region_a = j.value("region_a", c.region_a);
    c.l = j.value("l", c.l);
    if (j.contains("e_mob") && !j["e_mob"].is_null()) {
      c.e_mob = j["e_mob"].get<double>();
      c.e_mob_set = true;
    }
    c.max_bonds = j.value("max_bond", c.max_bonds);
    c.delta = j.value("delta", c.delta);
    c.export_mps = j.value("export_mps", c.export_mps);
    c.input = j.value("input", c.input);
    c.group_by = j.value("group_by", c.group_by);
    c.value_column = j.value("value_column", c.value_column);
    c.filter = j.value("filter", c.filter);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad configuration field: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["model"] = c.model;
  j["n"] = c.n_sites;
  j["h"] = c.h;
  j["realizations"] = c.realizations;
  j["seed"] = c.seed_base;
  j["t_grid"] = c.times();
  j["l_grid"] = c.distances();
  j["alpha"] = c.alpha_grid;
  j["beta"] = c.beta;
  j["kappa"] = c.kappa_grid;
  j["bins"] = c.bins;
  j["out"] = c.out_dir;
  j["cache"] = c.cache_dir;
  j["max_dim"] = c.max_dim;
  j["threads"] = c.threads;
  j["mintfactor"] = c.mintfactor ? json(*c.mintfactor) : json(nullptr);
  j["site_a"] = c.site_a;
  j["site_b"] = c.resolved_site_b();
  j["axis_a"] = c.axis_a;
  j["axis_b"] = c.axis_b;
  j["region_a"] = c.region_a;
  j["l"] = c.l;
  j["e_mob"] = c.e_mob_set ? json(c.e_mob) : json(nullptr);
  j["max_bond"] = c.max_bonds;
  j["delta"] = c.delta;
  j["export_mps"] = c.export_mps;
  if (c.experiment == "plotdata") {
    j["input"] = c.input;
    j["group_by"] = c.group_by;
    j["value_column"] = c.value_column;
    j["filter"] = c.filter;
  }
  return j;
}

void validate(const ExperimentConfig& c) {
  const auto names = experiment_names();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(),
          ErrorCode::InvalidArgument, "unknown experiment: '" + c.experiment + "'");
  require(c.model == "heisenberg" || c.model == "ising", ErrorCode::InvalidArgument,
          "unknown model: " + c.model);
  require(c.n_sites >= 2, ErrorCode::InvalidArgument, "n must be at least 2");
  require(c.h >= 0.0 && std::isfinite(c.h), ErrorCode::InvalidArgument, "h must be >= 0");
  require(c.realizations >= 1, ErrorCode::InvalidArgument, "realizations must be >= 1");
  require(c.threads >= 1, ErrorCode::InvalidArgument, "threads must be >= 1");
  require(c.bins >= 1, ErrorCode::InvalidArgument, "bins must be >= 1");
  require(c.beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  require(c.t_max >= 0.0, ErrorCode::InvalidArgument, "t_max must be >= 0");
  require(c.site_a >= 0 && c.site_a < c.n_sites, ErrorCode::OutOfRange, "site_a out of range");
  require(c.resolved_site_b() >= 0 && c.resolved_site_b() < c.n_sites, ErrorCode::OutOfRange,
          "site_b out of range");
  for (int s : c.region_a)
    require(s >= 0 && s < c.n_sites, ErrorCode::OutOfRange, "region_a site out of range");
  for (int l : c.l_grid) require(l >= 0, ErrorCode::InvalidArgument, "l grid must be >= 0");
  for (double t : c.t_grid) require(t >= 0.0, ErrorCode::InvalidArgument, "times must be >= 0");
  for (int b : c.max_bonds) require(b >= 1, ErrorCode::InvalidArgument, "max_bond must be >= 1");
  for (double k : c.kappa_grid) require(k > 0.0, ErrorCode::InvalidArgument, "kappa must be > 0");
  require(c.axis_a.size() == 1 && c.axis_b.size() == 1, ErrorCode::InvalidArgument,
          "axes are single letters X, Y or Z");
  parse_axis(c.axis_a[0]);
  parse_axis(c.axis_b[0]);
  if (c.experiment != "plotdata")
    space_dim(2, static_cast<std::size_t>(c.n_sites), c.max_dim);
}

ChainModel RunContext::model(std::uint64_t seed) const {
  return build_model(config_.model, config_.n_sites, config_.h, seed);
}

std::string RunContext::cache_path(const ChainModel& model) const {
  return (fs::path(config_.cache_dir) /
          (model.kind + "_n" + std::to_string(model.n_sites) + "_h" +
           format_double(model.disorder_strength) + "_s" + std::to_string(model.seed) + ".mblc"))
      .string();
}

EigenSystem RunContext::eigensystem(const ChainModel& model) {
  const CacheKey key{static_cast<std::uint32_t>(model.n_sites), model.seed, model.disorder_strength};
  if (!config_.cache_dir.empty()) {
    const std::string path = cache_path(model);
    if (auto cached = try_load_eigensystem(path, key)) {
      ++cache_hits_;
      return std::move(*cached);
    }
    EigenSystem eig = diagonalize(assemble(model, config_.max_dim));
    fs::create_directories(config_.cache_dir);
    save_eigensystem(path, eig, key);
    return eig;
  }
  return diagonalize(assemble(model, config_.max_dim));
}

RealVec RunContext::energies(const ChainModel& model) {
  if (!config_.cache_dir.empty()) {
    const CacheKey key{static_cast<std::uint32_t>(model.n_sites), model.seed,
                       model.disorder_strength};
    if (auto cached = try_load_energies(cache_path(model), key)) {
      ++cache_hits_;
      return std::move(*cached);
    }
  }
  return eigenvalues(assemble(model, config_.max_dim));
}

void RunContext::record_timing(const std::string& stage, double seconds) {
  std::lock_guard<std::mutex> lock(mutex_);
  timings_[stage] += seconds;
}

json RunContext::timings() const {
  std::lock_guard<std::mutex> lock(mutex_);
  json j = json::object();
  for (const auto& [k, v] : timings_) j[k] = v;
  return j;
}

std::vector<std::string> experiment_names() {
  return {"spectrum",        "assumptions",     "lr-probe",        "filter-check",
          "cluster-a",       "cluster-b",       "mps",             "liom",
          "thermalize",      "reproduce-fig1a", "reproduce-fig1b", "reproduce-fig1c",
          "plotdata"};
}

PipelineResult run_pipeline(const ExperimentConfig& config, RunContext& ctx) {
  validate(config);
  if (config.threads > 1) openblas_set_num_threads(1);
  const std::string& e = config.experiment;
  if (e == "spectrum") return pipelines::spectrum(config, ctx);
  if (e == "assumptions") return pipelines::assumptions(config, ctx);
  if (e == "lr-probe") return pipelines::lr_probe(config, ctx);
  if (e == "filter-check") return pipelines::filter_check(config, ctx);
  if (e == "cluster-a") return pipelines::cluster_a(config, ctx);
  if (e == "cluster-b") return pipelines::cluster_b(config, ctx);
  if (e == "mps") return pipelines::mps(config, ctx);
  if (e == "liom") return pipelines::liom(config, ctx);
  if (e == "thermalize") return pipelines::thermalize(config, ctx);
  if (e == "reproduce-fig1a") return pipelines::fig1a(config, ctx);
  if (e == "reproduce-fig1b") return pipelines::fig1b(config, ctx);
  if (e == "reproduce-fig1c") return pipelines::fig1c(config, ctx);
  if (e == "plotdata") {
    PipelineResult r;
    r.tables.emplace_back("plotdata", emit_plotdata(config.input, config.group_by,
                                                    config.value_column, config.filter, ""));
    return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment: " + e);
}

RunOutput run_experiment(const ExperimentConfig& config) {
  RunContext ctx(config);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.result = run_pipeline(config, ctx);
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ctx.record_timing("total", total);

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  require(!ec, ErrorCode::Io, "cannot create output directory " + config.out_dir);
  for (const auto& [stem, table] : out.result.tables) {
    const std::string path = (fs::path(config.out_dir) / (stem + ".csv")).string();
    write_csv(path, table);
    out.files.push_back(path);
  }
  out.manifest["config"] = config_to_json(config);
  out.manifest["version"] = kVersion;
  out.manifest["timings"] = ctx.timings();
  out.manifest["cache_hits"] = ctx.cache_hits();
  out.manifest["summary"] = out.result.summary;
  out.manifest["files"] = out.files;
  const std::string manifest_path = (fs::path(config.out_dir) / "manifest.json").string();
  std::ofstream mf(manifest_path, std::ios::trunc);
  require(mf.good(), ErrorCode::Io, "cannot write " + manifest_path);
  mf << out.manifest.dump(2) << '\n';
  out.files.push_back(manifest_path);
  return out;
}

CsvTable emit_plotdata(const std::string& csv_path, const std::string& group_by,
                       const std::string& value_column, const std::string& filter,
                       const std::string& out_path) {
  require(!csv_path.empty(), ErrorCode::InvalidArgument, "plotdata needs an input CSV");
  require(fs::exists(csv_path), ErrorCode::Io, "input CSV does not exist: " + csv_path);
  const CsvTable in = read_csv(csv_path);
  const std::size_t vcol = in.column(value_column);
  const std::size_t gcol = group_by.empty() ? vcol : in.column(group_by);
  std::size_t fcol = 0;
  std::string fvalue;
  const bool filtered = !filter.empty();
  if (filtered) {
    const auto eq = filter.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "filter must look like column=value");
    fcol = in.column(filter.substr(0, eq));
    fvalue = filter.substr(eq + 1);
  }

  // Groups keep first-appearance order so the output follows the input.
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t r = 0; r < in.rows.size(); ++r) {
    if (filtered && in.rows[r][fcol] != fvalue) continue;
    const std::string& key = group_by.empty() ? std::string("all") : in.rows[r][gcol];
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(in.number(r, value_column));
  }

  CsvTable out;
  out.header = {group_by.empty() ? std::string("group") : group_by, "count", "mean", "variance",
                "stddev"};
  for (const auto& key : order) {
    const auto& v = groups[key];
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    out.add(key, static_cast<unsigned long>(v.size()), mean, var, std::sqrt(var));
  }
  if (!out_path.empty()) write_csv(out_path, out);
  return out;
}

}  // namespace mbl
