#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ligen/augment/gan.hpp"
#include "ligen/locmodel/localizer.hpp"

namespace ligen {

struct SyntheticBatch {
  Origin origin = Origin::pointgan;
  Modality modality = Modality::spectral;
  Extent extent;
  NormStats norm;        // maps `fingerprints` back to sensor units
  Matrix fingerprints;   // normalized, rows in [0, 1]^d
  std::optional<std::vector<Coordinate>> conditions;     // PointGAN labels, meters
  std::optional<std::vector<Coordinate>> pseudo_labels;  // WLM outputs, meters
  std::optional<std::vector<double>> scores;             // discriminator realism
  std::optional<std::string> labeler_identity;           // WLM model_identity
  std::size_t size() const noexcept { return fingerprints.rows(); }
  bool labeled() const noexcept { return conditions.has_value() || pseudo_labels.has_value(); }
  const std::vector<Coordinate>& labels() const;
  // Fraction of labels outside the room extent (0 for unlabeled batches).
  double out_of_extent_fraction() const;
  Matrix raw_fingerprints() const;
};

// per_point samples for every point, labelled with their condition.
SyntheticBatch pointgan_generate(const GanBundle& bundle, const std::vector<Coordinate>& points,
                                 std::size_t per_point, std::uint64_t seed);
// n unlabeled samples in one eval-mode batch, with discriminator scores.
SyntheticBatch freegan_generate(const GanBundle& bundle, std::size_t n, std::uint64_t seed);

SyntheticBatch pseudo_label(const TrainedLocalizer& wlm, const SyntheticBatch& batch);

struct Selection {
  enum class Mode { all, top_k_discriminator } mode = Mode::all;
  std::size_t k = 0;  // across all synthetic batches together
  static Selection all_samples() { return {}; }
  static Selection top_k(std::size_t k) { return {Mode::top_k_discriminator, k}; }
};

struct AugmentDiagnostics {
  std::size_t synthetic_kept = 0;
  std::size_t labels_clamped = 0;  // pseudo-labels moved onto the room boundary
};

// Real samples followed by synthetic ones (denormalized to sensor units).
// Labels outside the room are clamped to its extent.
Dataset build_augmented(const Dataset& real, const std::vector<SyntheticBatch>& synthetic, const Selection& selection,
                        AugmentDiagnostics* diagnostics = nullptr);

Dataset synthetic_to_dataset(const SyntheticBatch& batch);

}  // namespace ligen
