#include "ligen/eval/report.hpp"

#include <cstdio>
#include <sstream>

#include "ligen/locmodel/persistence.hpp"

namespace ligen {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string results_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "experiment,environment,modality,method,x,n_train_coords,seed,rmse_m,n_real,n_synthetic,"
        "out_of_extent_fraction,error\n";
  for (const auto& r : report.results) {
    os << r.experiment << ',' << r.environment << ',' << to_string(r.modality) << ',' << to_string(r.method) << ','
       << fmt(r.x) << ',' << r.n_train_coords << ',' << r.seed << ',' << (r.ok() ? fmt(r.rmse_m) : "") << ','
       << r.n_real << ',' << r.n_synthetic << ',' << fmt(r.out_of_extent_fraction) << ',' << csv_field(r.error)
       << '\n';
  }
  return os.str();
}

Json to_json(const QuartileSummary& q) {
  return {{"min", q.min},       {"q1", q.q1},     {"median", q.median}, {"q3", q.q3},
          {"max", q.max},       {"mean", q.mean}, {"count", q.count}};
}

Json summary_json(const ExperimentReport& report) {
  Json j;
  j["experiment"] = report.config.id;
  j["runs"] = report.results.size();
  std::size_t failed = 0;
  for (const auto& r : report.results) failed += r.ok() ? 0 : 1;
  j["failed_runs"] = failed;
  j["isolation_checks_passed"] = report.isolation_checks;

  j["cells"] = Json::array();
  for (const auto& [key, q] : report.summaries) {
    Json cell = to_json(q);
    cell["environment"] = key.environment;
    cell["modality"] = std::string(to_string(key.modality));
    cell["method"] = std::string(to_string(key.method));
    cell["x"] = key.x;
    j["cells"].push_back(std::move(cell));
  }

  j["searches"] = Json::array();
  for (const auto& s : report.searches) {
    Json trials = Json::array();
    for (const auto& t : s.result.trials) {
      Json tj = {{"config", to_json(t.config)}};
      tj["validation_rmse"] = t.validation_rmse ? Json(*t.validation_rmse) : Json();
      if (!t.error.empty()) tj["error"] = t.error;
      trials.push_back(std::move(tj));
    }
    j["searches"].push_back({{"environment", s.environment},
                             {"modality", std::string(to_string(s.modality))},
                             {"best_trial", s.result.best_trial},
                             {"best", to_json(s.result.best)},
                             {"trials", std::move(trials)}});
  }

  j["environment_deltas"] = Json::array();
  const auto& envs = report.config.environments;
  for (std::size_t e = 1; e < envs.size(); ++e)
    for (const auto& [key, q] : report.summaries) {
      if (key.environment != envs[e]) continue;
      CellKey ref = key;
      ref.environment = envs.front();
      const auto it = report.summaries.find(ref);
      if (it == report.summaries.end()) continue;
      j["environment_deltas"].push_back({{"environment", envs[e]},
                                         {"reference", envs.front()},
                                         {"modality", std::string(to_string(key.modality))},
                                         {"method", std::string(to_string(key.method))},
                                         {"x", key.x},
                                         {"mean_delta", q.mean - it->second.mean},
                                         {"median_delta", q.median - it->second.median},
                                         {"min_delta", q.min - it->second.min}});
    }
  return j;
}

std::pair<std::filesystem::path, std::filesystem::path> write_report(const ExperimentReport& report,
                                                                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto csv = dir / "results.csv";
  const auto summary = dir / "summary.json";
  write_text_file(csv, results_csv(report));
  write_text_file(summary, summary_json(report).dump(2) + "\n");
  return {csv, summary};
}

}  // namespace ligen
