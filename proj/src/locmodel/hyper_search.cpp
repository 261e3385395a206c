#include "ligen/locmodel/hyper_search.hpp"

#include <cmath>
#include <random>

#include "ligen/common/errors.hpp"
#include "ligen/datamodel/grid.hpp"
#include "ligen/eval/metrics.hpp"

namespace ligen {

LocConfig sample_loc_config(Rng& rng, const LocConfig& base, const SearchSpace& space) {
  std::uniform_real_distribution<double> log_hidden(std::log(static_cast<double>(space.hidden_min)),
                                                    std::log(static_cast<double>(space.hidden_max)));
  std::uniform_real_distribution<double> log_lr(std::log(space.lr_min), std::log(space.lr_max));
  std::uniform_real_distribution<double> dropout(space.dropout_min, space.dropout_max);
  LocConfig cfg = base;
  cfg.hidden_size = static_cast<std::size_t>(std::llround(std::exp(log_hidden(rng))));
  cfg.hidden_size = std::clamp(cfg.hidden_size, space.hidden_min, space.hidden_max);
  cfg.learning_rate = std::clamp(std::exp(log_lr(rng)), space.lr_min, space.lr_max);
  cfg.dropout_rate = dropout(rng);
  return cfg;
}

SearchResult hyper_search(const Dataset& data, std::size_t trials, std::uint64_t seed, const LocConfig& base,
                          const SearchSpace& space) {
  if (trials == 0) throw ContractViolation("hyper_search: trials must be >= 1");
  const auto coords = data.distinct_locations();
  if (coords.size() < 2) throw ContractViolation("hyper_search: needs at least 2 distinct coordinates");
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(coords.size()))), 1, coords.size() - 1);
  const DatasetSplit split =
      split_by_coordinates(data, coordinate_split(coords, n_train, derive_seed(seed, "search/split")));

  Rng sampler = make_rng(seed, "search/sample");
  SearchResult result;
  std::optional<double> best;
  for (std::size_t t = 0; t < trials; ++t) {
    TrialResult trial{sample_loc_config(sampler, base, space), std::nullopt, {}};
    try {
      const TrainedLocalizer model = train_localizer(split.train, trial.config, derive_seed(seed, "search/trial", t));
      const auto truths = split.test.locations();
      trial.validation_rmse = rmse(predict_dataset(model, split.test), truths);
      if (!best || *trial.validation_rmse < *best) {
        best = trial.validation_rmse;
        result.best = trial.config;
        result.best_trial = t;
      }
    } catch (const Error& e) {
      trial.error = e.what();
    }
    result.trials.push_back(trial);
  }
  if (!best) throw SearchError("hyper_search: all " + std::to_string(trials) + " trials failed");
  return result;
}

}  // namespace ligen
