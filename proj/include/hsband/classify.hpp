// Classification harness: stratified splits, a brute-force k-nearest-neighbor
// classifier on raw band values, and agreement metrics.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hsband/cube.hpp"

namespace hsband {

// Indices below are positions in the labeled-pixel order, not raw pixel ids.
struct SplitPlan {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// Per class: max(1, round-half-up(fraction * n)) training samples, drawn with
// a seeded shuffle. fraction must lie strictly inside (0, 1).
SplitPlan stratified_split(const GroundTruthMap& gt, double fraction,
                           std::uint64_t seed);

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Raw (unquantized) values of the chosen bands at the chosen labeled
// positions, one row per position.
FeatureMatrix gather_features(const HyperCube& cube, const GroundTruthMap& gt,
                              const std::vector<std::size_t>& band_ids,
                              const std::vector<std::size_t>& positions);

// Euclidean k-NN. Distance ties prefer the lower training row; vote ties
// prefer the smaller class id.
std::vector<std::uint16_t> knn_classify(const FeatureMatrix& train,
                                        const std::vector<std::uint16_t>& train_labels,
                                        const FeatureMatrix& test,
                                        std::size_t k);

struct ConfusionMatrix {
  std::size_t class_count = 0;
  std::vector<std::uint64_t> counts;  // row = true class - 1, col = predicted - 1

  std::uint64_t at(std::size_t t, std::size_t p) const {
    return counts[t * class_count + p];
  }
};

struct MetricsReport {
  double oa = 0.0;                // overall accuracy
  double aa = 0.0;                // mean per-class accuracy over classes seen
  double kappa = 0.0;             // chance-corrected agreement
  std::vector<double> per_class;  // diagonal / row sum, 0 for empty rows
};

std::pair<ConfusionMatrix, MetricsReport> confusion_and_metrics(
    const std::vector<std::uint16_t>& truth,
    const std::vector<std::uint16_t>& predicted, std::size_t class_count);

// Label image: training pixels keep their true label, test pixels get the
// k-NN prediction, unlabeled pixels stay 0.
std::vector<std::uint16_t> full_scene_map(const HyperCube& cube,
                                          const GroundTruthMap& gt,
                                          const std::vector<std::size_t>& band_ids,
                                          const SplitPlan& plan, std::size_t k);

// {"oa":...,"aa":...,"kappa":...,"per_class":[...],"confusion":[[...]]}
// with reals at six decimals.
std::string metrics_to_json(const MetricsReport& report,
                            const ConfusionMatrix& confusion);

}  // namespace hsband
