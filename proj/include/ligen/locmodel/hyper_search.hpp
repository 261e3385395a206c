#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ligen/locmodel/localizer.hpp"

namespace ligen {

struct SearchSpace {
  std::size_t hidden_min = 64, hidden_max = 1024;   // log-uniform, rounded
  double lr_min = 1e-4, lr_max = 1e-2;              // log-uniform
  double dropout_min = 0.1, dropout_max = 0.5;      // uniform
};

// Draws hidden_size, learning_rate and dropout_rate; everything else comes from `base`.
LocConfig sample_loc_config(Rng& rng, const LocConfig& base = {}, const SearchSpace& space = {});

struct TrialResult {
  LocConfig config;
  std::optional<double> validation_rmse;  // empty when the trial failed
  std::string error;
};

struct SearchResult {
  LocConfig best;
  std::size_t best_trial = 0;
  std::vector<TrialResult> trials;
};

// Random search scored on an internal 80/20 coordinate-level split of `data`.
// Lowest validation RMSE wins, earliest trial on ties. A failing trial is
// recorded and skipped; SearchError when every trial fails.
SearchResult hyper_search(const Dataset& data, std::size_t trials, std::uint64_t seed, const LocConfig& base = {},
                          const SearchSpace& space = {});

}  // namespace ligen
