#include "hsband/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hsband/errors.hpp"
#include "hsband/parallel.hpp"
#include "hsband/rng.hpp"

namespace hsband {

SplitPlan stratified_split(const GroundTruthMap& gt, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw ConfigError("split: train fraction must lie strictly in (0, 1)");

  const auto order = labeled_pixel_order(gt);
  std::vector<std::vector<std::size_t>> per_class(gt.class_count);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    per_class[gt.labels[order[pos]] - 1].push_back(pos);

  SplitPlan plan;
  plan.fraction = fraction;
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  for (auto& members : per_class) {
    if (members.empty()) continue;  // label gaps are allowed
    shuffle(members, rng);
    const double want = fraction * static_cast<double>(members.size());
    std::size_t n_train = static_cast<std::size_t>(std::floor(want + 0.5));
    if (n_train < 1) n_train = 1;
    if (n_train > members.size()) n_train = members.size();
    plan.train_indices.insert(plan.train_indices.end(), members.begin(),
                              members.begin() + n_train);
    plan.test_indices.insert(plan.test_indices.end(),
                             members.begin() + n_train, members.end());
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

FeatureMatrix gather_features(const HyperCube& cube, const GroundTruthMap& gt,
                              const std::vector<std::size_t>& band_ids,
                              const std::vector<std::size_t>& positions) {
  const auto order = labeled_pixel_order(gt);
  FeatureMatrix m;
  m.rows = positions.size();
  m.cols = band_ids.size();
  m.values.resize(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const std::size_t pixel = order[positions[r]];
    for (std::size_t c = 0; c < m.cols; ++c)
      m.values[r * m.cols + c] = cube.value(band_ids[c], pixel);
  }
  return m;
}

std::vector<std::uint16_t> knn_classify(
    const FeatureMatrix& train, const std::vector<std::uint16_t>& train_labels,
    const FeatureMatrix& test, std::size_t k) {
  if (k == 0 || k > train.rows)
    throw ConfigError("knn: k must lie in [1, training size]");
  if (train_labels.size() != train.rows)
    throw ConfigError("knn: label count does not match training rows");
  if (train.cols != test.cols)
    throw ConfigError("knn: train and test dimensionality differ");

  std::vector<std::uint16_t> predicted(test.rows);
  parallel_for(test.rows, [&](std::size_t t) {
    // Squared distances preserve the Euclidean ordering.
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t r = 0; r < train.rows; ++r) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < train.cols; ++c) {
        const double diff = test.at(t, c) - train.at(r, c);
        d2 += diff * diff;
      }
      dist[r] = {d2, r};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());

    std::uint16_t best_label = 0;
    std::size_t best_votes = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint16_t label = train_labels[dist[i].second];
      std::size_t votes = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (train_labels[dist[j].second] == label) ++votes;
      if (votes > best_votes || (votes == best_votes && label < best_label)) {
        best_votes = votes;
        best_label = label;
      }
    }
    predicted[t] = best_label;
  });
  return predicted;
}

std::pair<ConfusionMatrix, MetricsReport> confusion_and_metrics(
    const std::vector<std::uint16_t>& truth,
    const std::vector<std::uint16_t>& predicted, std::size_t class_count) {
  if (truth.size() != predicted.size())
    throw ConfigError("metrics: truth and prediction lengths differ");
  if (truth.empty()) throw ConfigError("metrics: empty evaluation set");
  if (class_count == 0) throw ConfigError("metrics: class_count must be positive");

  ConfusionMatrix cm;
  cm.class_count = class_count;
  cm.counts.assign(class_count * class_count, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0 || truth[i] > class_count || predicted[i] == 0 ||
        predicted[i] > class_count)
      throw ConfigError("metrics: label outside [1, class_count]");
    ++cm.counts[(truth[i] - 1) * class_count + (predicted[i] - 1)];
  }

  const double total = static_cast<double>(truth.size());
  MetricsReport rep;
  rep.per_class.assign(class_count, 0.0);

  double diag = 0.0;
  double pe = 0.0;
  double aa_sum = 0.0;
  std::size_t aa_classes = 0;
  for (std::size_t i = 0; i < class_count; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < class_count; ++j) {
      row += static_cast<double>(cm.at(i, j));
      col += static_cast<double>(cm.at(j, i));
    }
    diag += static_cast<double>(cm.at(i, i));
    pe += row * col;
    if (row > 0.0) {
      rep.per_class[i] = static_cast<double>(cm.at(i, i)) / row;
      aa_sum += rep.per_class[i];
      ++aa_classes;
    }
  }
  rep.oa = diag / total;
  rep.aa = aa_classes > 0 ? aa_sum / static_cast<double>(aa_classes) : 0.0;
  pe /= total * total;
  // Chance-corrected agreement; a matrix whose marginals force pe to 1 can
  // only arise from perfect agreement, which scores 1 by convention.
  rep.kappa = pe < 1.0 ? (rep.oa - pe) / (1.0 - pe) : 1.0;
  return {cm, rep};
}

std::vector<std::uint16_t> full_scene_map(const HyperCube& cube,
                                          const GroundTruthMap& gt,
                                          const std::vector<std::size_t>& band_ids,
                                          const SplitPlan& plan, std::size_t k) {
  const auto order = labeled_pixel_order(gt);
  const auto train = gather_features(cube, gt, band_ids, plan.train_indices);
  const auto test = gather_features(cube, gt, band_ids, plan.test_indices);

  std::vector<std::uint16_t> train_labels(plan.train_indices.size());
  for (std::size_t i = 0; i < plan.train_indices.size(); ++i)
    train_labels[i] = gt.labels[order[plan.train_indices[i]]];

  const auto predicted = knn_classify(train, train_labels, test, k);

  std::vector<std::uint16_t> image(gt.rows * gt.cols, 0);
  for (std::size_t i = 0; i < plan.train_indices.size(); ++i)
    image[order[plan.train_indices[i]]] = train_labels[i];
  for (std::size_t i = 0; i < plan.test_indices.size(); ++i)
    image[order[plan.test_indices[i]]] = predicted[i];
  return image;
}

std::string metrics_to_json(const MetricsReport& report,
                            const ConfusionMatrix& confusion) {
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };

  std::string out = "{\"oa\":" + real(report.oa) + ",\"aa\":" + real(report.aa) +
                    ",\"kappa\":" + real(report.kappa) + ",\"per_class\":[";
  for (std::size_t i = 0; i < report.per_class.size(); ++i) {
    if (i) out += ',';
    out += real(report.per_class[i]);
  }
  out += "],\"confusion\":[";
  for (std::size_t i = 0; i < confusion.class_count; ++i) {
    if (i) out += ',';
    out += '[';
    for (std::size_t j = 0; j < confusion.class_count; ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%llu",
                    static_cast<unsigned long long>(confusion.at(i, j)));
      out += buf;
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

}  // namespace hsband
