#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ligen/augment/gan.hpp"
#include "ligen/augment/synthesis.hpp"
#include "ligen/eval/metrics.hpp"
#include "ligen/locmodel/hyper_search.hpp"
#include "ligen/simenv/world_config.hpp"

namespace ligen {

enum class Method { mlp, mlp_pointgan, mlp_freegan };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

// Training budgets; defaults are the full protocol values.
struct Budget {
  LocConfig localizer;                  // used as-is when search is off, as the base when on
  std::size_t search_trials = 3;        // 0 disables the search
  GanConfig gan;
  std::size_t pointgan_per_point = 100;
  std::size_t freegan_samples = 50000;
  std::size_t wlm_epochs = 700;
  Selection selection = Selection::all_samples();
};

Json to_json(const Budget& b);
Budget budget_from_json(const Json& doc, const std::string& path);

enum class SplitUnit { percent, count };

struct ExperimentConfig {
  std::string id = "exp1";
  WorldConfig world;
  std::vector<Modality> modalities{Modality::spectral, Modality::rssi};
  std::vector<std::string> environments{"default"};  // "clean" / "cluttered" for exp2
  std::size_t clutter_occluders = 6;                 // applied to the "cluttered" environment
  std::uint64_t clutter_seed = 11;
  std::vector<double> x_values{50, 60, 70};
  SplitUnit x_unit = SplitUnit::percent;
  std::vector<Method> methods{Method::mlp, Method::mlp_pointgan, Method::mlp_freegan};
  std::vector<std::uint64_t> seeds;  // defaults to 0..19
  std::uint64_t master_seed = 2025;
  Budget budget;
};

ExperimentConfig experiment1_defaults();
ExperimentConfig experiment2_defaults();
Json to_json(const ExperimentConfig& cfg);
// Keys missing from `doc` keep the values of `base`.
ExperimentConfig experiment_config_from_json(const Json& doc, const ExperimentConfig& base);

std::size_t training_coordinates(double x, SplitUnit unit, std::size_t grid_points);

struct RunResult {
  std::string experiment;
  std::string environment;
  Modality modality = Modality::spectral;
  Method method = Method::mlp;
  double x = 0.0;
  std::size_t n_train_coords = 0;
  std::uint64_t seed = 0;
  double rmse_m = 0.0;
  std::size_t n_real = 0;
  std::size_t n_synthetic = 0;
  double out_of_extent_fraction = 0.0;
  double train_seconds = 0.0;
  std::string error;  // empty on success
  bool ok() const noexcept { return error.empty(); }
};

struct CellKey {
  std::string environment;
  Modality modality;
  Method method;
  double x;
  auto operator<=>(const CellKey&) const = default;
};

struct SearchRecord {
  std::string environment;
  Modality modality;
  SearchResult result;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunResult> results;  // ordered by (environment, modality, x, method, seed)
  std::map<CellKey, QuartileSummary> summaries;
  std::vector<SearchRecord> searches;
  std::size_t isolation_checks = 0;  // jobs whose provenance check passed
};

// Runs every (environment, modality, x, seed) job on up to `jobs` threads.
// Failures are recorded per result and do not stop the run.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);
inline ExperimentReport run_experiment1(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  return run_experiment(cfg, jobs);
}
inline ExperimentReport run_experiment2(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  return run_experiment(cfg, jobs);
}

// Room of one experiment environment.
RoomModel environment_room(const ExperimentConfig& cfg, const std::string& environment);

// Content hash of one fingerprint row, used for train/test provenance checks.
std::string fingerprint_hash(std::span<const double> features);

}  // namespace ligen
