#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string experiment;
  std::string model = "heisenberg";
  int n_sites = 8;
  double h = 1.0;
  int realizations = 1;
  std::uint64_t seed_base = 1;
  std::vector<double> t_grid;  // empty: {0} U 0.25 * 2^k up to t_max
  double t_max = 100.0;
  std::vector<int> l_grid;     // empty: 0 .. n-1
  std::vector<double> alpha_grid;
  double beta = 1.0;
  std::vector<double> kappa_grid;  // empty: 40 log-spaced points per level
  int bins = 60;
  std::string out_dir = "out";
  std::string cache_dir;  // empty: caching off
  std::size_t max_dim = kDefaultMaxDim;
  int threads = 1;
  // Divide probe values by min(t, 1) before fitting. Unset: off for the
  // truncation fits, on for the subspace (mobility-edge) fits.
  std::optional<bool> mintfactor;
  int site_a = 0;
  int site_b = -1;  // -1: last site
  std::string axis_a = "Z";
  std::string axis_b = "Z";
  std::vector<int> region_a;  // empty: {site_a}
  int l = 2;
  double e_mob = 0.0;
  bool e_mob_set = false;  // unset: median energy
  std::vector<int> max_bonds{1, 2, 4, 8, 16};
  double delta = 0.1;
  bool export_mps = false;
  // plotdata
  std::string input;
  std::string group_by;
  std::string value_column = "value";
  std::string filter;  // "column=value" or empty

  std::uint64_t seed(int realization) const {
    return seed_base + static_cast<std::uint64_t>(realization);
  }
  int resolved_site_b() const { return site_b < 0 ? n_sites - 1 : site_b; }
  std::vector<double> times() const;
  std::vector<int> distances() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

// Shared state of one run. Eigensystems are cached on disk (when enabled)
// under a name built from (model, n, h, seed).
class RunContext {
 public:
  explicit RunContext(const ExperimentConfig& config) : config_(config) {}

  const ExperimentConfig& config() const { return config_; }
  ChainModel model(std::uint64_t seed) const;
  EigenSystem eigensystem(const ChainModel& model);
  // Reads a full cache file when present but never writes one.
  RealVec energies(const ChainModel& model);

  void record_timing(const std::string& stage, double seconds);
  nlohmann::json timings() const;
  int cache_hits() const { return cache_hits_.load(); }
  std::string cache_path(const ChainModel& model) const;

 private:
  ExperimentConfig config_;
  std::atomic<int> cache_hits_{0};
  mutable std::mutex mutex_;
  std::map<std::string, double> timings_;
};

// Runs f(0 .. count-1) on up to `threads` workers; results come back in index
// order. The first exception is rethrown after all workers stop.
template <typename F>
auto parallel_map(int count, int threads, F&& f) -> std::vector<decltype(f(0))> {
  using R = decltype(f(0));
  std::vector<R> results(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const int n = std::max(1, std::min(threads, count));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct PipelineResult {
  std::vector<std::pair<std::string, CsvTable>> tables;  // file stem -> table
  nlohmann::json summary = nlohmann::json::object();
};

// Names accepted by run_experiment.
std::vector<std::string> experiment_names();

// Runs the pipeline without touching the file system (except the cache).
PipelineResult run_pipeline(const ExperimentConfig& config, RunContext& ctx);

struct RunOutput {
  PipelineResult result;
  std::vector<std::string> files;
  nlohmann::json manifest;
};

// Runs the pipeline, writes <out>/<stem>.csv per table and <out>/manifest.json.
RunOutput run_experiment(const ExperimentConfig& config);

// Groups `value_column` by `group_by` (optionally after a column=value filter)
// and writes group,count,mean,variance,stddev. Returns the table.
CsvTable emit_plotdata(const std::string& csv_path, const std::string& group_by,
                       const std::string& value_column, const std::string& filter,
                       const std::string& out_path);

}  // namespace mbl
