#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ligen/cli/commands.hpp"
#include "ligen/common/digest.hpp"
#include "ligen/datamodel/csv.hpp"
#include "ligen/eval/experiment.hpp"
#include "ligen/locmodel/persistence.hpp"

using namespace ligen;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = LIGEN_CONFIG_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome ligen_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ligen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ligen_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t data_rows(const fs::path& csv) {
  const std::string text = read_file(csv);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
}

}  // namespace

TEST_CASE("gen: default configs produce the protocol dataset sizes") {
  const fs::path wifimix = scratch("gen_wifimix");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectral_wifimix.json").string(), "--out", wifimix.string()}).code == 0);
  CHECK(data_rows(wifimix / "spectral.csv") == 2048);
  CHECK(data_rows(wifimix / "rssi.csv") == 2048);
  CHECK(fs::exists(wifimix / "manifest.json"));

  const fs::path robust = scratch("gen_robust");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectralrobust.json").string(), "--out", robust.string()}).code == 0);
  CHECK(data_rows(robust / "spectral.csv") == 1210);
  CHECK_FALSE(fs::exists(robust / "rssi.csv"));
}

TEST_CASE("rerun from a manifest is byte-identical") {
  const fs::path first = scratch("rerun_a"), second = scratch("rerun_b");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectralrobust.json").string(), "--seed", "9", "--out",
               first.string()})
              .code == 0);
  REQUIRE(ligen_cli({"rerun", (first / "manifest.json").string(), "--out", second.string()}).code == 0);
  CHECK(read_file(first / "spectral.csv") == read_file(second / "spectral.csv"));
  const auto a = cli::read_manifest(first / "manifest.json");
  const auto b = cli::read_manifest(second / "manifest.json");
  CHECK(a.outputs == b.outputs);
  CHECK(a.config == b.config);
  CHECK(a.seed == 9);

  const fs::path third = scratch("rerun_c");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectralrobust.json").string(), "--seed", "10", "--out",
               third.string()})
              .code == 0);
  CHECK(read_file(first / "spectral.csv") != read_file(third / "spectral.csv"));
}

TEST_CASE("usage and configuration errors exit with code 2") {
  const fs::path dir = scratch("errors");
  CHECK(ligen_cli({}).code == 2);
  CHECK(ligen_cli({"fly"}).code == 2);
  CHECK(ligen_cli({"--help"}).code == 0);
  CHECK(ligen_cli({"augment", "--method", "diffusion", "--data", "x.csv"}).code == 2);

  write_file(dir / "bad_field.json", R"({"noise": {"rssi_db": "loud"}})");
  const Outcome field = ligen_cli({"gen", "--config", (dir / "bad_field.json").string(), "--out", dir.string()});
  CHECK(field.code == 2);
  CHECK(field.err.find("noise.rssi_db") != std::string::npos);

  write_file(dir / "bad_syntax.json", "{\n  \"grid_spacing\": 1.0,\n  oops\n}\n");
  const Outcome syntax = ligen_cli({"gen", "--config", (dir / "bad_syntax.json").string(), "--out", dir.string()});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("line 3") != std::string::npos);

  CHECK(ligen_cli({"gen", "--config", (dir / "missing.json").string()}).code == 2);
  CHECK(ligen_cli({"stability", "--data", (dir / "missing.csv").string(), "--out", dir.string()}).code == 2);
  CHECK(ligen_cli({"eval", "--model", (dir / "missing.json").string(), "--data", (dir / "missing.csv").string()}).code == 2);
}

TEST_CASE("stability: zero-noise dataset gives 0 at every coordinate") {
  const fs::path dir = scratch("stability");
  write_file(dir / "quiet.json", R"({"noise": {"spectral_relative": 0, "rssi_db": 0}, "samples_per_point": 4})");
  REQUIRE(ligen_cli({"gen", "--config", (dir / "quiet.json").string(), "--out", dir.string()}).code == 0);
  for (const std::string m : {"spectral", "rssi"}) {
    const fs::path out = dir / ("stability_" + m);
    REQUIRE(ligen_cli({"stability", "--data", (dir / (m + ".csv")).string(), "--out", out.string()}).code == 0);
    std::istringstream lines(read_file(out / "stability.csv"));
    std::string line;
    std::getline(lines, line);
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      ++rows;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
      REQUIRE(cells.size() == 5);
      CHECK(std::stod(cells[3]) == 0.0);
    }
    CHECK(rows == 64);
  }
}

TEST_CASE("train then eval: the saved model reproduces in-memory predictions") {
  const fs::path dir = scratch("train_eval");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectral_wifimix.json").string(), "--out", dir.string()}).code == 0);
  write_file(dir / "small.json", R"({"localizer": {"hidden_size": 32, "n_hidden": 2, "epochs": 20}})");
  const fs::path model_dir = dir / "model";
  REQUIRE(ligen_cli({"train", "--data", (dir / "spectral.csv").string(), "--config", (dir / "small.json").string(),
               "--out", model_dir.string()})
              .code == 0);
  CHECK(data_rows(model_dir / "loss.csv") == 20);
  const fs::path eval_dir = dir / "eval";
  REQUIRE(ligen_cli({"eval", "--model", (model_dir / "model.json").string(), "--data", (dir / "spectral.csv").string(),
               "--out", eval_dir.string()})
              .code == 0);

  const Dataset data = read_dataset(dir / "spectral.csv");
  LocConfig cfg;
  cfg.hidden_size = 32;
  cfg.n_hidden = 2;
  cfg.epochs = 20;
  const TrainedLocalizer direct = train_localizer(data, cfg, derive_seed(2025, "train"));
  CHECK(model_identity(direct) == model_identity(load_localizer(model_dir / "model.json")));
  const auto preds = predict_dataset(direct, data);
  std::istringstream lines(read_file(eval_dir / "predictions.csv"));
  std::string line;
  std::getline(lines, line);
  for (std::size_t i = 0; std::getline(lines, line); ++i) {
    double x, y, px, py;
    char c;
    std::istringstream(line) >> x >> c >> y >> c >> px >> c >> py;
    CHECK(std::abs(px - preds[i].x) <= 1e-12);
    CHECK(std::abs(py - preds[i].y) <= 1e-12);
  }
  const Json report = read_json_file((eval_dir / "eval.json").string());
  CHECK(report["rmse_m"].get<double>() == doctest::Approx(rmse(preds, data.locations())).epsilon(1e-12));

  CHECK(ligen_cli({"eval", "--model", (model_dir / "model.json").string(), "--data", (dir / "rssi.csv").string(),
             "--out", eval_dir.string()})
            .code == 2);

  write_file(dir / "diverge.json", R"({"localizer": {"learning_rate": 1e150, "epochs": 50}})");
  const Outcome diverged = ligen_cli({"train", "--data", (dir / "spectral.csv").string(), "--config",
                                (dir / "diverge.json").string(), "--out", (dir / "bad").string()});
  CHECK(diverged.code == 3);
  CHECK(diverged.err.find("epoch") != std::string::npos);
}

TEST_CASE("augment: synthetic CSV sizes and diagnostics") {
  const fs::path dir = scratch("augment");
  REQUIRE(ligen_cli({"gen", "--config", (kConfigs / "spectral_wifimix.json").string(), "--out", dir.string()}).code == 0);
  write_file(dir / "quick.json", R"({"gan": {"epochs": 2}, "wlm_epochs": 2})");
  const fs::path point = dir / "pointgan";
  REQUIRE(ligen_cli({"augment", "--method", "pointgan", "--data", (dir / "spectral.csv").string(), "--config",
               (dir / "quick.json").string(), "--out", point.string()})
              .code == 0);
  CHECK(data_rows(point / "synthetic.csv") == 6400);
  CHECK(data_rows(point / "augmented.csv") == 8448);

  const fs::path free = dir / "freegan";
  REQUIRE(ligen_cli({"augment", "--method", "freegan", "--samples", "300", "--data", (dir / "rssi.csv").string(),
               "--config", (dir / "quick.json").string(), "--out", free.string()})
              .code == 0);
  CHECK(data_rows(free / "synthetic.csv") == 300);
  const Json diag = read_json_file((free / "diagnostics.json").string());
  CHECK(diag["synthetic_samples"] == 300);
  CHECK(diag.contains("labeler_identity"));
  CHECK(diag["out_of_extent_fraction"].get<double>() >= 0.0);
  CHECK(fs::exists(free / "wlm.json"));
}

TEST_CASE("experiment exp1 writes a 360-row results table") {
  const fs::path dir = scratch("experiment");
  write_file(dir / "smoke.json", R"({
    "budget": {
      "localizer": {"hidden_size": 8, "n_hidden": 1, "epochs": 1},
      "search_trials": 0,
      "gan": {"epochs": 1, "gen_hidden": [4, 4], "disc_hidden": [4, 4]},
      "pointgan_per_point": 1,
      "freegan_samples": 10,
      "wlm_epochs": 1
    }
  })");
  const Outcome run = ligen_cli({"experiment", "exp1", "--config", (dir / "smoke.json").string(), "--jobs", "2", "--out",
                           (dir / "a").string()});
  REQUIRE(run.code == 0);
  CHECK(data_rows(dir / "a" / "results.csv") == 360);
  const Json summary = read_json_file((dir / "a" / "summary.json").string());
  CHECK(summary["cells"].size() == 18);
  CHECK(summary["failed_runs"] == 0);

  REQUIRE(ligen_cli({"rerun", (dir / "a" / "manifest.json").string(), "--out", (dir / "b").string()}).code == 0);
  CHECK(sha256_file(dir / "a" / "results.csv") == sha256_file(dir / "b" / "results.csv"));
  CHECK(ligen_cli({"experiment", "exp2", "--config", (kConfigs / "experiment1.json").string()}).code == 2);
}

TEST_CASE("shipped configs parse and match the built-in defaults") {
  const Json exp1 = read_json_file((kConfigs / "experiment1.json").string());
  CHECK(to_json(experiment_config_from_json(exp1, experiment1_defaults())) == to_json(experiment1_defaults()));
  const Json exp2 = read_json_file((kConfigs / "experiment2.json").string());
  CHECK(to_json(experiment_config_from_json(exp2, experiment2_defaults())) == to_json(experiment2_defaults()));
  const Json loc = read_json_file((kConfigs / "localizer.json").string());
  CHECK(loc_config_from_json(loc["localizer"], "localizer") == LocConfig{});
  const Json aug = read_json_file((kConfigs / "augment.json").string());
  CHECK(to_json(gan_config_from_json(aug["gan"], "gan")) == to_json(GanConfig{}));
}
