#include "ligen/locmodel/persistence.hpp"

#include <fstream>

#include "ligen/common/digest.hpp"
#include "ligen/common/errors.hpp"

namespace ligen {
namespace {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation parse_activation(const std::string& s, const std::string& path) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "leaky_relu") return Activation::leaky_relu;
  if (s == "sigmoid") return Activation::sigmoid;
  throw ConfigError("field '" + path + "': unknown activation '" + s + "'");
}

}  // namespace

Json net_to_json(const MlpNet& net) {
  Json layers = Json::array();
  for (const DenseLayer& l : net.layers()) {
    Json j{{"in_dim", l.spec.in_dim},
           {"out_dim", l.spec.out_dim},
           {"activation", activation_name(l.spec.activation)},
           {"leaky_slope", l.spec.leaky_slope},
           {"dropout_rate", l.spec.dropout_rate},
           {"batch_norm", l.spec.batch_norm},
           {"weight", std::vector<double>(l.weight.values().begin(), l.weight.values().end())},
           {"bias", l.bias}};
    if (l.bn)
      j["bn"] = {{"gamma", l.bn->gamma},
                 {"beta", l.bn->beta},
                 {"running_mean", l.bn->running_mean},
                 {"running_var", l.bn->running_var},
                 {"momentum", l.bn->momentum},
                 {"epsilon", l.bn->epsilon}};
    layers.push_back(std::move(j));
  }
  return layers;
}

MlpNet net_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_array() || doc.empty()) throw ConfigError("field '" + path + "': expected a non-empty layer array");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& j = doc[i];
    DenseLayer l;
    l.spec.in_dim = json_get<std::size_t>(j, "in_dim", p);
    l.spec.out_dim = json_get<std::size_t>(j, "out_dim", p);
    l.spec.activation = parse_activation(json_get<std::string>(j, "activation", p), p + ".activation");
    l.spec.leaky_slope = json_get<double>(j, "leaky_slope", p);
    l.spec.dropout_rate = json_get<double>(j, "dropout_rate", p);
    l.spec.batch_norm = json_get<bool>(j, "batch_norm", p);
    auto w = json_get<std::vector<double>>(j, "weight", p);
    if (w.size() != l.spec.in_dim * l.spec.out_dim) throw ConfigError("field '" + p + ".weight': wrong length");
    l.weight = Matrix(l.spec.out_dim, l.spec.in_dim, std::move(w));
    l.bias = json_get<std::vector<double>>(j, "bias", p);
    if (j.contains("bn")) {
      const std::string bp = p + ".bn";
      BatchNormState bn;
      bn.gamma = json_get<std::vector<double>>(j["bn"], "gamma", bp);
      bn.beta = json_get<std::vector<double>>(j["bn"], "beta", bp);
      bn.running_mean = json_get<std::vector<double>>(j["bn"], "running_mean", bp);
      bn.running_var = json_get<std::vector<double>>(j["bn"], "running_var", bp);
      bn.momentum = json_get<double>(j["bn"], "momentum", bp);
      bn.epsilon = json_get<double>(j["bn"], "epsilon", bp);
      l.bn = std::move(bn);
    }
    layers.push_back(std::move(l));
  }
  try {
    return MlpNet(std::move(layers));
  } catch (const ContractViolation& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
}

Json norm_to_json(const NormStats& norm) {
  return {{"feature_min", norm.feature_min},
          {"feature_max", norm.feature_max},
          {"coord_min", norm.coord_min},
          {"coord_max", norm.coord_max}};
}

NormStats norm_from_json(const Json& doc, const std::string& path) {
  NormStats n;
  n.feature_min = json_get<std::vector<double>>(doc, "feature_min", path);
  n.feature_max = json_get<std::vector<double>>(doc, "feature_max", path);
  n.coord_min = json_get<std::array<double, 2>>(doc, "coord_min", path);
  n.coord_max = json_get<std::array<double, 2>>(doc, "coord_max", path);
  if (n.feature_min.size() != n.feature_max.size())
    throw ConfigError("field '" + path + "': feature_min/feature_max length mismatch");
  return n;
}

Json localizer_to_json(const TrainedLocalizer& model) {
  Json curve = Json::array();
  for (const LossPoint& p : model.loss_curve) curve.push_back({p.epoch, p.mse});
  return {{"version", kModelFormatVersion},
          {"kind", "localizer"},
          {"modality", std::string(to_string(model.modality))},
          {"config", to_json(model.config)},
          {"norm", norm_to_json(model.norm)},
          {"net", net_to_json(model.net)},
          {"loss_curve", curve},
          {"optimizer_steps", model.optimizer_steps}};
}

TrainedLocalizer localizer_from_json(const Json& doc) {
  const int version = json_get<int>(doc, "version", "");
  if (version != kModelFormatVersion)
    throw ConfigError("field 'version': unsupported model format " + std::to_string(version));
  if (json_get<std::string>(doc, "kind", "") != "localizer")
    throw ConfigError("field 'kind': expected 'localizer'");
  TrainedLocalizer m;
  try {
    m.modality = parse_modality(json_get<std::string>(doc, "modality", ""));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("field 'modality': ") + e.what());
  }
  m.config = loc_config_from_json(json_get<Json>(doc, "config", ""), "config");
  m.norm = norm_from_json(json_get<Json>(doc, "norm", ""), "norm");
  m.net = net_from_json(json_get<Json>(doc, "net", ""), "net");
  if (m.net.in_dim() != feature_dim(m.modality) || m.net.out_dim() != 2 ||
      m.norm.feature_min.size() != feature_dim(m.modality))
    throw ConfigError("field 'net': shape does not match modality " + std::string(to_string(m.modality)));
  for (const auto& p : json_get_or(doc, "loss_curve", Json::array(), ""))
    m.loss_curve.push_back({p.at(0).get<std::size_t>(), p.at(1).get<double>()});
  m.optimizer_steps = json_get_or<std::size_t>(doc, "optimizer_steps", 0, "");
  m.net.set_mode(Mode::eval);
  return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

void save_localizer(const TrainedLocalizer& model, const std::filesystem::path& path) {
  write_text_file(path, localizer_to_json(model).dump() + "\n");
}

TrainedLocalizer load_localizer(const std::filesystem::path& path) {
  return localizer_from_json(read_json_file(path.string()));
}

std::string model_identity(const TrainedLocalizer& model) {
  const Json j{{"modality", std::string(to_string(model.modality))},
               {"norm", norm_to_json(model.norm)},
               {"net", net_to_json(model.net)}};
  return sha256_hex(j.dump());
}

}  // namespace ligen
