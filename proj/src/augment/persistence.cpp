#include "ligen/augment/persistence.hpp"

#include "ligen/locmodel/persistence.hpp"

namespace ligen {

Json bundle_to_json(const GanBundle& bundle) {
  return {{"version", kModelFormatVersion},
          {"kind", std::string(to_string(bundle.kind))},
          {"modality", std::string(to_string(bundle.modality))},
          {"extent", {bundle.extent.width, bundle.extent.height}},
          {"config", to_json(bundle.config)},
          {"norm", norm_to_json(bundle.norm)},
          {"generator", net_to_json(bundle.generator)},
          {"discriminator", net_to_json(bundle.discriminator)}};
}

GanBundle bundle_from_json(const Json& doc) {
  const int version = json_get<int>(doc, "version", "");
  if (version != kModelFormatVersion)
    throw ConfigError("field 'version': unsupported model format " + std::to_string(version));
  GanBundle b;
  const auto kind = json_get<std::string>(doc, "kind", "");
  if (kind != "pointgan" && kind != "freegan") throw ConfigError("field 'kind': expected 'pointgan' or 'freegan'");
  b.kind = parse_gan_kind(kind);
  const auto modality = json_get<std::string>(doc, "modality", "");
  if (modality != "spectral" && modality != "rssi") throw ConfigError("field 'modality': unknown modality");
  b.modality = parse_modality(modality);
  const auto extent = json_get<std::array<double, 2>>(doc, "extent", "");
  b.extent = {extent[0], extent[1]};
  b.config = gan_config_from_json(json_get<Json>(doc, "config", ""), "config");
  b.norm = norm_from_json(json_get<Json>(doc, "norm", ""), "norm");
  b.generator = net_from_json(json_get<Json>(doc, "generator", ""), "generator");
  b.discriminator = net_from_json(json_get<Json>(doc, "discriminator", ""), "discriminator");
  const std::size_t d = feature_dim(b.modality);
  const std::size_t cond = b.kind == GanKind::pointgan ? 2 : 0;
  if (b.generator.in_dim() != b.config.noise_dim + cond || b.generator.out_dim() != d ||
      b.discriminator.in_dim() != d + cond || b.discriminator.out_dim() != 1)
    throw ConfigError("field 'generator': network shapes do not match kind/modality");
  b.generator.set_mode(Mode::eval);
  b.discriminator.set_mode(Mode::eval);
  return b;
}

void save_bundle(const GanBundle& bundle, const std::filesystem::path& path) {
  write_text_file(path, bundle_to_json(bundle).dump() + "\n");
}

GanBundle load_bundle(const std::filesystem::path& path) { return bundle_from_json(read_json_file(path.string())); }

}  // namespace ligen
