#include "ligen/augment/synthesis.hpp"

#include <algorithm>
#include <numeric>

#include "ligen/common/errors.hpp"
#include "ligen/locmodel/persistence.hpp"

namespace ligen {
namespace {

std::vector<double> score(const GanBundle& bundle, const Matrix& disc_input) {
  const Matrix p = bundle.discriminator.predict(disc_input);
  return std::vector<double>(p.values().begin(), p.values().end());
}

SyntheticBatch empty_batch(const GanBundle& bundle) {
  SyntheticBatch b;
  b.origin = origin_of(bundle.kind);
  b.modality = bundle.modality;
  b.extent = bundle.extent;
  b.norm = bundle.norm;
  b.fingerprints = Matrix(0, feature_dim(bundle.modality));
  return b;
}

Coordinate clamp_to(const Extent& e, Coordinate c) {
  return {std::clamp(c.x, 0.0, e.width), std::clamp(c.y, 0.0, e.height)};
}

}  // namespace

const std::vector<Coordinate>& SyntheticBatch::labels() const {
  if (conditions) return *conditions;
  if (pseudo_labels) return *pseudo_labels;
  throw ContractViolation("SyntheticBatch: batch is unlabeled");
}

double SyntheticBatch::out_of_extent_fraction() const {
  if (!labeled() || size() == 0) return 0.0;
  const auto& l = labels();
  const auto outside = std::count_if(l.begin(), l.end(), [&](const Coordinate& c) { return !extent.contains(c); });
  return static_cast<double>(outside) / static_cast<double>(l.size());
}

Matrix SyntheticBatch::raw_fingerprints() const { return denormalize_features(norm, fingerprints); }

SyntheticBatch pointgan_generate(const GanBundle& bundle, const std::vector<Coordinate>& points,
                                 std::size_t per_point, std::uint64_t seed) {
  if (bundle.kind != GanKind::pointgan) throw ContractViolation("pointgan_generate: bundle is not a PointGAN");
  for (const auto& c : points)
    if (!bundle.extent.contains(c)) throw ContractViolation("pointgan_generate: point outside the room");
  SyntheticBatch batch = empty_batch(bundle);
  batch.conditions.emplace();
  const std::size_t n = points.size() * per_point;
  if (n == 0) {
    batch.scores.emplace();
    return batch;
  }
  Matrix cond(n, 2);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Coordinate c = normalize(bundle.norm, points[p]);
    for (std::size_t k = 0; k < per_point; ++k) {
      cond(p * per_point + k, 0) = c.x;
      cond(p * per_point + k, 1) = c.y;
      batch.conditions->push_back(points[p]);
    }
  }
  Rng rng = make_rng(seed, "pointgan/generate");
  const Matrix z = standard_normal(n, bundle.config.noise_dim, rng);
  batch.fingerprints = bundle.generator.predict(hstack(z, cond));
  batch.scores = score(bundle, hstack(cond, batch.fingerprints));
  return batch;
}

SyntheticBatch freegan_generate(const GanBundle& bundle, std::size_t n, std::uint64_t seed) {
  if (bundle.kind != GanKind::freegan) throw ContractViolation("freegan_generate: bundle is not a FreeGAN");
  SyntheticBatch batch = empty_batch(bundle);
  if (n == 0) {
    batch.scores.emplace();
    return batch;
  }
  Rng rng = make_rng(seed, "freegan/generate");
  batch.fingerprints = bundle.generator.predict(standard_normal(n, bundle.config.noise_dim, rng));
  batch.scores = score(bundle, batch.fingerprints);
  return batch;
}

SyntheticBatch pseudo_label(const TrainedLocalizer& wlm, const SyntheticBatch& batch) {
  if (batch.labeled()) throw ContractViolation("pseudo_label: batch already carries labels");
  if (wlm.modality != batch.modality) throw ContractViolation("pseudo_label: WLM modality differs from the batch");
  SyntheticBatch out = batch;
  out.pseudo_labels = predict_batch(wlm, batch.raw_fingerprints());
  out.labeler_identity = model_identity(wlm);
  return out;
}

Dataset build_augmented(const Dataset& real, const std::vector<SyntheticBatch>& synthetic, const Selection& selection,
                        AugmentDiagnostics* diagnostics) {
  struct Pick {
    std::size_t batch, row;
    double score;
  };
  std::vector<Pick> picks;
  for (std::size_t b = 0; b < synthetic.size(); ++b) {
    const SyntheticBatch& s = synthetic[b];
    if (s.modality != real.modality()) throw ContractViolation("build_augmented: modality mismatch");
    if (!s.labeled()) throw ContractViolation("build_augmented: synthetic batch is unlabeled");
    if (selection.mode == Selection::Mode::top_k_discriminator && (!s.scores || s.scores->size() != s.size()))
      throw ContractViolation("build_augmented: top-k selection needs discriminator scores");
    for (std::size_t i = 0; i < s.size(); ++i) picks.push_back({b, i, s.scores ? (*s.scores)[i] : 0.0});
  }
  if (selection.mode == Selection::Mode::top_k_discriminator) {
    std::stable_sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return a.score > b.score; });
    picks.resize(std::min(selection.k, picks.size()));
    std::sort(picks.begin(), picks.end(),
              [](const Pick& a, const Pick& b) { return a.batch != b.batch ? a.batch < b.batch : a.row < b.row; });
  }

  Dataset out = real;
  std::vector<Matrix> raw;
  for (const auto& s : synthetic) raw.push_back(s.raw_fingerprints());
  AugmentDiagnostics diag;
  for (const Pick& p : picks) {
    const SyntheticBatch& s = synthetic[p.batch];
    const Coordinate label = s.labels()[p.row];
    const Coordinate kept = clamp_to(real.extent(), label);
    diag.labels_clamped += !(kept == label);
    out.add(raw[p.batch].row(p.row), kept, s.origin);
  }
  diag.synthetic_kept = picks.size();
  if (diagnostics) *diagnostics = diag;
  return out;
}

Dataset synthetic_to_dataset(const SyntheticBatch& batch) {
  Dataset out(batch.modality, batch.extent);
  const Matrix raw = batch.raw_fingerprints();
  const auto& labels = batch.labels();
  for (std::size_t i = 0; i < batch.size(); ++i) out.add(raw.row(i), clamp_to(batch.extent, labels[i]), batch.origin);
  return out;
}

}  // namespace ligen
