#include "ligen/cli/commands.hpp"

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ligen/augment/persistence.hpp"
#include "ligen/common/digest.hpp"
#include "ligen/common/errors.hpp"
#include "ligen/common/seeding.hpp"
#include "ligen/datamodel/csv.hpp"
#include "ligen/datamodel/grid.hpp"
#include "ligen/eval/report.hpp"
#include "ligen/locmodel/persistence.hpp"
#include "ligen/simenv/sampling.hpp"

namespace ligen::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 2025;

class Recorder {
 public:
  Recorder(std::string command, const Json& config, std::uint64_t seed, fs::path dir) : dir_(std::move(dir)) {
    manifest_.tool_version = LIGEN_VERSION;
    manifest_.command = std::move(command);
    manifest_.config = config;
    manifest_.seed = seed;
    fs::create_directories(dir_);
  }

  void input(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("input file '" + path + "' does not exist");
    manifest_.inputs[path] = sha256_file(path);
  }

  fs::path output(const std::string& name) const { return dir_ / name; }

  template <typename F>
  auto stage(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      manifest_.stages.push_back(
          {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    };
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      finish();
    } else {
      auto result = body();
      finish();
      return result;
    }
  }

  RunManifest finish(const std::vector<std::string>& outputs) {
    for (const auto& name : outputs) manifest_.outputs[name] = sha256_file(dir_ / name);
    write_manifest(manifest_, dir_);
    return manifest_;
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

Json read_config_or_empty(const std::string& path) {
  if (path.empty()) return Json::object();
  if (!fs::exists(path)) throw ConfigError("config file '" + path + "' does not exist");
  return read_json_file(path);
}

RunManifest cmd_gen(const Json& config, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  const WorldConfig world = world_config_from_json(config);
  Recorder rec("gen", to_json(world), seed, out);
  const RoomModel room = world.resolved_room();
  const auto grid = make_grid(room.extent, world.grid_spacing);
  std::vector<std::string> names;
  for (Modality m : world.modalities) {
    const std::string name = std::string(to_string(m)) + ".csv";
    const Dataset data = rec.stage("generate_" + std::string(to_string(m)), [&] {
      return generate_dataset(room, world.noise, grid, world.samples_per_point, m, derive_seed(seed, "world"));
    });
    write_dataset(data, rec.output(name));
    log << name << ": " << data.size() << " rows\n";
    names.push_back(name);
  }
  return rec.finish(names);
}

RunManifest cmd_train(const Json& config, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  json_reject_unknown(config, {"data", "weak", "localizer"}, "");
  const auto data_path = json_get<std::string>(config, "data", "");
  const bool weak = json_get_or(config, "weak", false, "");
  const LocConfig loc = weak ? weak_config(json_get_or(config.value("localizer", Json::object()), "epochs",
                                                       std::size_t{700}, "localizer"))
                             : loc_config_from_json(config.value("localizer", Json::object()), "localizer");
  Json resolved = {{"data", data_path}, {"weak", weak}, {"localizer", to_json(loc)}};
  Recorder rec("train", resolved, seed, out);
  rec.input(data_path);
  const Dataset data = read_dataset(data_path);
  const TrainedLocalizer model = rec.stage("train", [&] {
    return weak ? train_weak_model(data, derive_seed(seed, "train"), loc.epochs)
                : train_localizer(data, loc, derive_seed(seed, "train"));
  });
  save_localizer(model, rec.output("model.json"));
  std::ostringstream curve;
  curve << "epoch,mse\n";
  for (const auto& p : model.loss_curve) curve << p.epoch << ',' << format_double(p.mse) << '\n';
  write_text_file(rec.output("loss.csv"), curve.str());
  log << "trained " << (weak ? "weak " : "") << "localizer on " << data.size() << " rows, final mse "
      << (model.loss_curve.empty() ? 0.0 : model.loss_curve.back().mse) << "\nidentity "
      << model_identity(model) << '\n';
  return rec.finish({"model.json", "loss.csv"});
}

RunManifest cmd_augment(const Json& config, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  json_reject_unknown(config, {"data", "method", "gan", "per_point", "samples", "wlm_epochs"}, "");
  const auto data_path = json_get<std::string>(config, "data", "");
  const auto method = json_get<std::string>(config, "method", "");
  if (method != "pointgan" && method != "freegan")
    throw ConfigError("field 'method': expected pointgan or freegan, got '" + method + "'");
  const GanConfig gan = gan_config_from_json(config.value("gan", Json::object()), "gan");
  const auto per_point = json_get_or(config, "per_point", std::size_t{100}, "");
  const auto samples = json_get_or(config, "samples", std::size_t{50000}, "");
  const auto wlm_epochs = json_get_or(config, "wlm_epochs", std::size_t{700}, "");
  Json resolved = {{"data", data_path},         {"method", method},   {"gan", to_json(gan)},
                   {"per_point", per_point},     {"samples", samples}, {"wlm_epochs", wlm_epochs}};
  Recorder rec("augment", resolved, seed, out);
  rec.input(data_path);
  const Dataset data = read_dataset(data_path);

  SyntheticBatch batch;
  if (method == "pointgan") {
    const auto trained = rec.stage("train_gan", [&] { return train_pointgan(data, gan, derive_seed(seed, "gan")); });
    save_bundle(trained.bundle, rec.output("gan.json"));
    batch = rec.stage("generate", [&] {
      return pointgan_generate(trained.bundle, data.distinct_locations(), per_point, derive_seed(seed, "generate"));
    });
  } else {
    const auto trained = rec.stage("train_gan", [&] { return train_freegan(data, gan, derive_seed(seed, "gan")); });
    save_bundle(trained.bundle, rec.output("gan.json"));
    const SyntheticBatch raw =
        rec.stage("generate", [&] { return freegan_generate(trained.bundle, samples, derive_seed(seed, "generate")); });
    const TrainedLocalizer wlm =
        rec.stage("train_wlm", [&] { return train_weak_model(data, derive_seed(seed, "wlm"), wlm_epochs); });
    save_localizer(wlm, rec.output("wlm.json"));
    batch = rec.stage("pseudo_label", [&] { return pseudo_label(wlm, raw); });
  }
  AugmentDiagnostics diag;
  const Dataset augmented = build_augmented(data, {batch}, Selection::all_samples(), &diag);
  write_dataset(synthetic_to_dataset(batch), rec.output("synthetic.csv"));
  write_dataset(augmented, rec.output("augmented.csv"));
  Json d = {{"method", method},
            {"synthetic_samples", batch.size()},
            {"augmented_samples", augmented.size()},
            {"out_of_extent_fraction", batch.out_of_extent_fraction()},
            {"labels_clamped", diag.labels_clamped}};
  if (batch.labeler_identity) d["labeler_identity"] = *batch.labeler_identity;
  write_text_file(rec.output("diagnostics.json"), d.dump(2) + "\n");
  log << "synthetic.csv: " << batch.size() << " rows, augmented.csv: " << augmented.size() << " rows\n";
  if (method == "freegan")
    return rec.finish({"gan.json", "wlm.json", "synthetic.csv", "augmented.csv", "diagnostics.json"});
  return rec.finish({"gan.json", "synthetic.csv", "augmented.csv", "diagnostics.json"});
}

RunManifest cmd_eval(const Json& config, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  json_reject_unknown(config, {"model", "data"}, "");
  const auto model_path = json_get<std::string>(config, "model", "");
  const auto data_path = json_get<std::string>(config, "data", "");
  Recorder rec("eval", config, seed, out);
  rec.input(model_path);
  rec.input(data_path);
  const TrainedLocalizer model = load_localizer(model_path);
  const Dataset data = read_dataset(data_path);
  if (data.modality() != model.modality)
    throw ConfigError("model is " + std::string(to_string(model.modality)) + " but data is " +
                      std::string(to_string(data.modality())));
  const auto preds = rec.stage("predict", [&] { return predict_dataset(model, data); });
  const double err = rmse(preds, data.locations());
  std::ostringstream csv;
  csv << "x,y,pred_x,pred_y\n";
  for (std::size_t i = 0; i < data.size(); ++i)
    csv << format_double(data[i].location.x) << ',' << format_double(data[i].location.y) << ','
        << format_double(preds[i].x) << ',' << format_double(preds[i].y) << '\n';
  write_text_file(rec.output("predictions.csv"), csv.str());
  const Json report = {{"modality", std::string(to_string(data.modality()))},
                       {"samples", data.size()},
                       {"rmse_m", err},
                       {"model_identity", model_identity(model)}};
  write_text_file(rec.output("eval.json"), report.dump(2) + "\n");
  log << "rmse " << format_double(err) << " m over " << data.size() << " samples\n";
  return rec.finish({"predictions.csv", "eval.json"});
}

RunManifest cmd_stability(const Json& config, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  json_reject_unknown(config, {"data"}, "");
  const auto data_path = json_get<std::string>(config, "data", "");
  Recorder rec("stability", config, seed, out);
  rec.input(data_path);
  const Dataset data = read_dataset(data_path);
  const auto per_point = rec.stage("stability", [&] { return stability_by_coordinate(data); });
  std::ostringstream csv;
  csv << "x,y,samples,normalized_std,zero_mean_channels\n";
  std::vector<double> values;
  for (const auto& c : per_point) {
    csv << format_double(c.location.x) << ',' << format_double(c.location.y) << ',' << c.samples << ','
        << format_double(c.stability.value) << ',' << c.stability.zero_mean_channels.size() << '\n';
    values.push_back(c.stability.value);
  }
  write_text_file(rec.output("stability.csv"), csv.str());
  Json summary = to_json(summarize(values));
  summary["modality"] = std::string(to_string(data.modality()));
  write_text_file(rec.output("stability.json"), summary.dump(2) + "\n");
  log << "normalized std mean " << format_double(summary["mean"].get<double>()) << " over " << values.size()
      << " coordinates\n";
  return rec.finish({"stability.csv", "stability.json"});
}

RunManifest cmd_experiment(const Json& config, std::uint64_t seed, std::size_t jobs, const fs::path& out,
                           std::ostream& log) {
  const std::string which = json_get_or<std::string>(config, "id", "exp1", "");
  ExperimentConfig base;
  if (which == "exp1")
    base = experiment1_defaults();
  else if (which == "exp2")
    base = experiment2_defaults();
  else
    throw ConfigError("field 'id': expected exp1 or exp2, got '" + which + "'");
  ExperimentConfig cfg = experiment_config_from_json(config, base);
  cfg.master_seed = seed;
  Recorder rec("experiment", to_json(cfg), seed, out);
  const ExperimentReport report = rec.stage("run", [&] { return run_experiment(cfg, jobs); });
  write_report(report, out);
  std::size_t failed = 0;
  for (const auto& r : report.results) failed += r.ok() ? 0 : 1;
  log << cfg.id << ": " << report.results.size() << " runs, " << failed << " failed\n";
  for (const auto& [key, q] : report.summaries)
    log << "  " << key.environment << ' ' << to_string(key.modality) << ' ' << to_string(key.method) << " x=" << key.x
        << "  median " << q.median << "  mean " << q.mean << '\n';
  return rec.finish({"results.csv", "summary.json"});
}

}  // namespace

RunManifest execute(const std::string& command, const Json& config, std::uint64_t seed, std::size_t jobs,
                    const fs::path& out_dir, std::ostream& log) {
  if (!config.is_object()) throw ConfigError("configuration must be a JSON object");
  if (command == "gen") return cmd_gen(config, seed, out_dir, log);
  if (command == "train") return cmd_train(config, seed, out_dir, log);
  if (command == "augment") return cmd_augment(config, seed, out_dir, log);
  if (command == "eval") return cmd_eval(config, seed, out_dir, log);
  if (command == "stability") return cmd_stability(config, seed, out_dir, log);
  if (command == "experiment") return cmd_experiment(config, seed, jobs, out_dir, log);
  throw ConfigError("unknown command '" + command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fingerprint localization with GAN-based data augmentation", "ligen"};
  app.set_version_flag("--version", LIGEN_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out_dir = ".";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--jobs", jobs, "maximum parallel jobs")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
  };

  std::string data, model, method, which, manifest_path;
  bool weak = false;
  std::optional<std::size_t> per_point, samples, wlm_epochs;

  auto* gen = app.add_subcommand("gen", "simulate fingerprint datasets");
  auto* train = app.add_subcommand("train", "train a localizer on a dataset CSV");
  train->add_option("--data", data, "training CSV")->required();
  train->add_flag("--weak", weak, "train the weak localization model");
  auto* augment = app.add_subcommand("augment", "train a GAN and write synthetic fingerprints");
  augment->add_option("--method", method, "pointgan or freegan")
      ->required()
      ->check(CLI::IsMember({"pointgan", "freegan"}));
  augment->add_option("--data", data, "real training CSV")->required();
  augment->add_option("--per-point", per_point, "PointGAN samples per training coordinate");
  augment->add_option("--samples", samples, "FreeGAN sample count");
  augment->add_option("--wlm-epochs", wlm_epochs, "weak model epochs for pseudo-labeling");
  auto* eval = app.add_subcommand("eval", "RMSE of a saved localizer on a dataset CSV");
  eval->add_option("--model", model, "model JSON")->required();
  eval->add_option("--data", data, "test CSV")->required();
  auto* stability = app.add_subcommand("stability", "normalized standard deviation per coordinate");
  stability->add_option("--data", data, "dataset CSV")->required();
  auto* experiment = app.add_subcommand("experiment", "run a full multi-seed experiment");
  experiment->add_option("which", which, "exp1 or exp2")->required()->check(CLI::IsMember({"exp1", "exp2"}));
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
  rerun->add_option("manifest", manifest_path, "manifest.json of a previous run")->required()->check(CLI::ExistingFile);
  for (auto* sub : {gen, train, augment, eval, stability, experiment, rerun}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (rerun->parsed()) {
      const RunManifest m = read_manifest(manifest_path);
      verify_inputs(m);
      execute(m.command, m.config, seed.value_or(m.seed), jobs, out_dir, out);
      return kOk;
    }
    Json config = read_config_or_empty(config_path);
    if (!config.is_object()) throw ConfigError("configuration must be a JSON object");
    std::string command;
    if (gen->parsed()) {
      command = "gen";
    } else if (train->parsed()) {
      command = "train";
      config["data"] = data;
      if (weak) config["weak"] = true;
    } else if (augment->parsed()) {
      command = "augment";
      config["data"] = data;
      config["method"] = method;
      if (per_point) config["per_point"] = *per_point;
      if (samples) config["samples"] = *samples;
      if (wlm_epochs) config["wlm_epochs"] = *wlm_epochs;
    } else if (eval->parsed()) {
      command = "eval";
      config["model"] = model;
      config["data"] = data;
    } else if (stability->parsed()) {
      command = "stability";
      config["data"] = data;
    } else {
      command = "experiment";
      if (config.contains("id") && config["id"] != which)
        throw ConfigError("field 'id': config is for '" + config["id"].dump() + "' but '" + which + "' was requested");
      config["id"] = which;
      if (!seed && config.contains("master_seed")) seed = json_get<std::uint64_t>(config, "master_seed", "");
    }
    execute(command, config, seed.value_or(kDefaultSeed), jobs, out_dir, out);
    return kOk;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace ligen::cli
