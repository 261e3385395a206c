#include "ligen/eval/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "ligen/common/digest.hpp"
#include "ligen/common/errors.hpp"
#include "ligen/datamodel/grid.hpp"
#include "ligen/simenv/sampling.hpp"

namespace ligen {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> s(20);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

// Stream seeds ignore the environment so that an unperturbed "cluttered"
// environment reproduces "clean" exactly.
std::uint64_t stream(const ExperimentConfig& cfg, std::string_view stage, std::size_t x_index, std::uint64_t seed) {
  return derive_seed(derive_seed(cfg.master_seed, stage, x_index), "replicate", seed);
}

void require_isolated(const Dataset& training_input, const std::unordered_set<std::string>& test_hashes,
                      const char* stage) {
  for (const auto& s : training_input.samples())
    if (test_hashes.count(fingerprint_hash(s.features)))
      throw Error(std::string("isolation violated: a test fingerprint reached ") + stage);
}

struct Prepared {
  std::string environment;
  Modality modality;
  Dataset data;
  std::vector<Coordinate> grid;
  LocConfig localizer;
};

struct Job {
  std::size_t prepared;
  std::size_t x_index;
  std::uint64_t seed;
};

std::vector<RunResult> run_job(const ExperimentConfig& cfg, const Prepared& p, std::size_t x_index,
                               std::uint64_t seed, std::size_t& isolation_ok) {
  const double x = cfg.x_values[x_index];
  const std::size_t n_train = training_coordinates(x, cfg.x_unit, p.grid.size());
  const Budget& budget = cfg.budget;

  RunResult base;
  base.experiment = cfg.id;
  base.environment = p.environment;
  base.modality = p.modality;
  base.x = x;
  base.n_train_coords = n_train;
  base.seed = seed;

  const CoordinateSplit split = coordinate_split(p.grid, n_train, stream(cfg, "split", x_index, seed));
  const DatasetSplit ds = split_by_coordinates(p.data, split);
  std::unordered_set<std::string> test_hashes;
  for (const auto& s : ds.test.samples()) test_hashes.insert(fingerprint_hash(s.features));
  const auto truths = ds.test.locations();
  const std::uint64_t strong_seed = stream(cfg, "strong", x_index, seed);

  bool isolated = true;
  std::vector<RunResult> out;
  for (Method method : cfg.methods) {
    RunResult r = base;
    r.method = method;
    r.n_real = ds.train.size();
    const auto t0 = Clock::now();
    try {
      require_isolated(ds.train, test_hashes, "the training split");
      Dataset training = ds.train;
      if (method == Method::mlp_pointgan) {
        const auto gan = train_pointgan(ds.train, budget.gan, stream(cfg, "pointgan/train", x_index, seed));
        const SyntheticBatch batch = pointgan_generate(gan.bundle, split.train, budget.pointgan_per_point,
                                                       stream(cfg, "pointgan/generate", x_index, seed));
        training = build_augmented(ds.train, {batch}, budget.selection);
        r.out_of_extent_fraction = batch.out_of_extent_fraction();
      } else if (method == Method::mlp_freegan) {
        const auto gan = train_freegan(ds.train, budget.gan, stream(cfg, "freegan/train", x_index, seed));
        const SyntheticBatch batch =
            freegan_generate(gan.bundle, budget.freegan_samples, stream(cfg, "freegan/generate", x_index, seed));
        const TrainedLocalizer wlm =
            train_weak_model(ds.train, stream(cfg, "wlm", x_index, seed), budget.wlm_epochs);
        const SyntheticBatch labeled = pseudo_label(wlm, batch);
        r.out_of_extent_fraction = labeled.out_of_extent_fraction();
        training = build_augmented(ds.train, {labeled}, budget.selection);
      }
      require_isolated(training, test_hashes, "the localizer training set");
      r.n_synthetic = training.size() - ds.train.size();
      const TrainedLocalizer model = train_localizer(training, p.localizer, strong_seed);
      r.rmse_m = rmse(predict_dataset(model, ds.test), truths);
    } catch (const std::exception& e) {
      r.error = e.what();
      if (std::string_view(r.error).starts_with("isolation violated")) isolated = false;
    }
    r.train_seconds = seconds_since(t0);
    out.push_back(std::move(r));
  }
  isolation_ok += isolated ? 1 : 0;
  return out;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::mlp: return "mlp";
    case Method::mlp_pointgan: return "mlp+pointgan";
    case Method::mlp_freegan: return "mlp+freegan";
  }
  return "mlp";
}

Method parse_method(std::string_view s) {
  if (s == "mlp") return Method::mlp;
  if (s == "mlp+pointgan") return Method::mlp_pointgan;
  if (s == "mlp+freegan") return Method::mlp_freegan;
  throw ContractViolation("unknown method '" + std::string(s) + "'");
}

std::size_t training_coordinates(double x, SplitUnit unit, std::size_t grid_points) {
  if (!(x > 0.0)) throw ContractViolation("training_coordinates: x must be positive");
  const double n = unit == SplitUnit::percent ? std::round(x / 100.0 * static_cast<double>(grid_points)) : x;
  if (n < 1.0 || n > static_cast<double>(grid_points) || (unit == SplitUnit::count && n != std::floor(n)))
    throw ContractViolation("training_coordinates: x = " + std::to_string(x) + " is not a valid split of " +
                            std::to_string(grid_points) + " points");
  return static_cast<std::size_t>(n);
}

std::string fingerprint_hash(std::span<const double> features) { return sha256_hex(features); }

RoomModel environment_room(const ExperimentConfig& cfg, const std::string& environment) {
  if (environment == "default") return cfg.world.resolved_room();
  if (environment == "clean") return cfg.world.room;
  if (environment == "cluttered") return apply_clutter(cfg.world.room, cfg.clutter_seed, cfg.clutter_occluders);
  throw ContractViolation("unknown environment '" + environment + "'");
}

ExperimentConfig experiment1_defaults() {
  ExperimentConfig cfg;
  cfg.seeds = default_seeds();
  return cfg;
}

ExperimentConfig experiment2_defaults() {
  ExperimentConfig cfg;
  cfg.id = "exp2";
  cfg.world.room = default_room({5.0, 5.0});
  cfg.world.grid_spacing = 0.5;
  cfg.world.samples_per_point = 10;
  cfg.world.modalities = {Modality::spectral};
  cfg.modalities = {Modality::spectral};
  cfg.environments = {"clean", "cluttered"};
  cfg.x_values = {70};
  cfg.seeds = default_seeds();
  return cfg;
}

Json to_json(const Budget& b) {
  Json j;
  j["localizer"] = to_json(b.localizer);
  j["search_trials"] = b.search_trials;
  j["gan"] = to_json(b.gan);
  j["pointgan_per_point"] = b.pointgan_per_point;
  j["freegan_samples"] = b.freegan_samples;
  j["wlm_epochs"] = b.wlm_epochs;
  if (b.selection.mode == Selection::Mode::all)
    j["selection"] = "all";
  else
    j["selection"] = {{"top_k", b.selection.k}};
  return j;
}

Budget budget_from_json(const Json& doc, const std::string& path) {
  const auto at = [&](const char* key) { return path.empty() ? std::string(key) : path + "." + key; };
  json_reject_unknown(doc,
                      {"localizer", "search_trials", "gan", "pointgan_per_point", "freegan_samples", "wlm_epochs",
                       "selection"},
                      path);
  Budget b;
  if (doc.contains("localizer")) b.localizer = loc_config_from_json(doc["localizer"], at("localizer"));
  b.search_trials = json_get_or(doc, "search_trials", b.search_trials, path);
  if (doc.contains("gan")) b.gan = gan_config_from_json(doc["gan"], at("gan"));
  b.pointgan_per_point = json_get_or(doc, "pointgan_per_point", b.pointgan_per_point, path);
  b.freegan_samples = json_get_or(doc, "freegan_samples", b.freegan_samples, path);
  b.wlm_epochs = json_get_or(doc, "wlm_epochs", b.wlm_epochs, path);
  if (b.wlm_epochs == 0) throw ConfigError("field '" + at("wlm_epochs") + "': must be >= 1");
  if (doc.contains("selection")) {
    const Json& sel = doc["selection"];
    if (sel.is_string() && sel.get<std::string>() == "all") {
      b.selection = Selection::all_samples();
    } else if (sel.is_object()) {
      json_reject_unknown(sel, {"top_k"}, at("selection"));
      b.selection = Selection::top_k(json_get<std::size_t>(sel, "top_k", at("selection")));
    } else {
      throw ConfigError("field '" + at("selection") + "': expected \"all\" or {\"top_k\": k}");
    }
  }
  return b;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["id"] = cfg.id;
  j["world"] = to_json(cfg.world);
  j["modalities"] = Json::array();
  for (Modality m : cfg.modalities) j["modalities"].push_back(std::string(to_string(m)));
  j["environments"] = cfg.environments;
  j["clutter_occluders"] = cfg.clutter_occluders;
  j["clutter_seed"] = cfg.clutter_seed;
  j["x_values"] = cfg.x_values;
  j["x_unit"] = cfg.x_unit == SplitUnit::percent ? "percent" : "count";
  j["methods"] = Json::array();
  for (Method m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
  j["seeds"] = cfg.seeds;
  j["master_seed"] = cfg.master_seed;
  j["budget"] = to_json(cfg.budget);
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& doc, const ExperimentConfig& base) {
  json_reject_unknown(doc,
                      {"id", "world", "modalities", "environments", "clutter_occluders", "clutter_seed", "x_values",
                       "x_unit", "methods", "seeds", "master_seed", "budget"},
                      "");
  ExperimentConfig cfg = base;
  cfg.id = json_get_or(doc, "id", cfg.id, "");
  if (doc.contains("world")) cfg.world = world_config_from_json(doc["world"], cfg.world, "world");
  if (doc.contains("modalities")) {
    cfg.modalities.clear();
    for (const auto& m : json_get<std::vector<std::string>>(doc, "modalities", "")) {
      try {
        cfg.modalities.push_back(parse_modality(m));
      } catch (const Error&) {
        throw ConfigError("field 'modalities': unknown modality '" + m + "'");
      }
    }
  }
  cfg.environments = json_get_or(doc, "environments", cfg.environments, "");
  for (const auto& env : cfg.environments)
    if (env != "default" && env != "clean" && env != "cluttered")
      throw ConfigError("field 'environments': unknown environment '" + env + "'");
  cfg.clutter_occluders = json_get_or(doc, "clutter_occluders", cfg.clutter_occluders, "");
  cfg.clutter_seed = json_get_or(doc, "clutter_seed", cfg.clutter_seed, "");
  cfg.x_values = json_get_or(doc, "x_values", cfg.x_values, "");
  if (doc.contains("x_unit")) {
    const auto unit = json_get<std::string>(doc, "x_unit", "");
    if (unit == "percent")
      cfg.x_unit = SplitUnit::percent;
    else if (unit == "count")
      cfg.x_unit = SplitUnit::count;
    else
      throw ConfigError("field 'x_unit': expected \"percent\" or \"count\"");
  }
  if (doc.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : json_get<std::vector<std::string>>(doc, "methods", "")) {
      try {
        cfg.methods.push_back(parse_method(m));
      } catch (const Error&) {
        throw ConfigError("field 'methods': unknown method '" + m + "'");
      }
    }
  }
  cfg.seeds = json_get_or(doc, "seeds", cfg.seeds, "");
  cfg.master_seed = json_get_or(doc, "master_seed", cfg.master_seed, "");
  if (doc.contains("budget")) cfg.budget = budget_from_json(doc["budget"], "budget");

  if (cfg.modalities.empty()) throw ConfigError("field 'modalities': must not be empty");
  if (cfg.environments.empty()) throw ConfigError("field 'environments': must not be empty");
  if (cfg.methods.empty()) throw ConfigError("field 'methods': must not be empty");
  if (cfg.seeds.empty()) throw ConfigError("field 'seeds': must not be empty");
  if (cfg.x_values.empty()) throw ConfigError("field 'x_values': must not be empty");
  for (Modality m : cfg.modalities)
    if (std::find(cfg.world.modalities.begin(), cfg.world.modalities.end(), m) == cfg.world.modalities.end())
      throw ConfigError("field 'modalities': '" + std::string(to_string(m)) + "' is not enabled in 'world'");
  const std::size_t grid_points = make_grid(cfg.world.room.extent, cfg.world.grid_spacing).size();
  for (double x : cfg.x_values) {
    try {
      training_coordinates(x, cfg.x_unit, grid_points);
    } catch (const ContractViolation& e) {
      throw ConfigError(std::string("field 'x_values': ") + e.what());
    }
  }
  return cfg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  if (cfg.seeds.empty() || cfg.x_values.empty() || cfg.methods.empty() || cfg.modalities.empty() ||
      cfg.environments.empty())
    throw ContractViolation("run_experiment: empty protocol dimension");
  ExperimentReport report;
  report.config = cfg;

  // One dataset and one hyperparameter search per (environment, modality).
  std::vector<Prepared> prepared;
  for (const auto& env : cfg.environments) {
    const RoomModel room = environment_room(cfg, env);
    const auto grid = make_grid(room.extent, cfg.world.grid_spacing);
    for (Modality m : cfg.modalities) {
      Prepared p{env, m,
                 generate_dataset(room, cfg.world.noise, grid, cfg.world.samples_per_point, m,
                                  derive_seed(cfg.master_seed, "world")),
                 grid, cfg.budget.localizer};
      if (cfg.budget.search_trials > 0) {
        const std::size_t n_train = training_coordinates(cfg.x_values.front(), cfg.x_unit, grid.size());
        const auto split = coordinate_split(grid, n_train, stream(cfg, "split", 0, cfg.seeds.front()));
        const Dataset train = split_by_coordinates(p.data, split).train;
        SearchResult sr = hyper_search(train, cfg.budget.search_trials,
                                       derive_seed(cfg.master_seed, "search", static_cast<std::uint64_t>(m)),
                                       cfg.budget.localizer);
        p.localizer = sr.best;
        report.searches.push_back({env, m, std::move(sr)});
      }
      prepared.push_back(std::move(p));
    }
  }

  std::vector<Job> work;
  for (std::size_t pi = 0; pi < prepared.size(); ++pi)
    for (std::size_t xi = 0; xi < cfg.x_values.size(); ++xi)
      for (std::uint64_t seed : cfg.seeds) work.push_back({pi, xi, seed});

  std::vector<std::vector<RunResult>> slots(work.size());
  std::vector<std::size_t> isolation(work.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++)
      slots[i] = run_job(cfg, prepared[work[i].prepared], work[i].x_index, work[i].seed, isolation[i]);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, work.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Slots are in (environment, modality, x, seed) order; regroup methods
  // inside each (environment, modality, x) block so seeds run fastest.
  for (std::size_t start = 0; start < work.size(); start += cfg.seeds.size())
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
      for (std::size_t k = 0; k < cfg.seeds.size(); ++k) report.results.push_back(slots[start + k][mi]);
  for (std::size_t v : isolation) report.isolation_checks += v;

  std::map<CellKey, std::vector<double>> cells;
  for (const auto& r : report.results)
    if (r.ok()) cells[{r.environment, r.modality, r.method, r.x}].push_back(r.rmse_m);
  for (const auto& [key, values] : cells) report.summaries[key] = summarize(values);
  return report;
}

}  // namespace ligen
