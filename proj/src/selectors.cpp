#include "hsband/selectors.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "hsband/errors.hpp"
#include "hsband/parallel.hpp"

namespace hsband {

namespace {

constexpr double kUnset = -std::numeric_limits<double>::infinity();

void check_config(const BandTable& table, const SelectorConfig& cfg) {
  if (cfg.k == 0) throw ConfigError("selector: k must be at least 1");
  if (cfg.k > table.band_count())
    throw ConfigError("selector: k exceeds the band count");
  if (cfg.eps <= 0) throw ConfigError("selector: eps must be positive");
}

std::vector<double> relevance_cache(const BandTable& table) {
  std::vector<double> rel(table.band_count());
  parallel_for(table.band_count(), [&](std::size_t b) {
    rel[b] = mutual_info(table.bands[b], table.class_var);
  });
  return rel;
}

// Highest score wins; exact ties go to the lowest band index. `taken` rows
// are skipped.
std::size_t argmax_score(const std::vector<double>& score,
                         const std::vector<bool>& taken) {
  std::size_t best = score.size();
  for (std::size_t b = 0; b < score.size(); ++b) {
    if (taken[b] || score[b] == kUnset) continue;
    if (best == score.size() || score[b] > score[best]) best = b;
  }
  return best;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::nms: return "nms";
    case Method::mifs: return "mifs";
    case Method::mifs_u: return "mifs_u";
    case Method::mrmr: return "mrmr";
    case Method::jmi: return "jmi";
    case Method::disr: return "disr";
    case Method::mibf: return "mibf";
    case Method::nmi: return "nmi";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::nms, Method::mifs, Method::mifs_u, Method::mrmr,
                   Method::jmi, Method::disr, Method::mibf, Method::nmi}) {
    if (name == method_name(m)) return m;
  }
  throw ConfigError("unknown method \"" + name + "\"");
}

BandTable BandTable::build(const HyperCube& cube, const GroundTruthMap& gt,
                           const QuantizerConfig& cfg) {
  if (cube.rows != gt.rows || cube.cols != gt.cols)
    throw IoError("cube and ground truth dimensions do not match");

  const auto order = labeled_pixel_order(gt);
  BandTable table;
  table.quantizer = cfg;
  table.class_var = label_variable(gt, order);
  table.bands.resize(cube.bands);
  table.raw_bands.resize(cube.bands);
  parallel_for(cube.bands, [&](std::size_t b) {
    table.raw_bands[b] = band_values_at(cube, b, order);
    table.bands[b] = quantize_values(table.raw_bands[b], cfg);
  });
  return table;
}

std::string SelectionResult::to_csv() const {
  std::string out = "rank,band_index,score\n";
  char line[96];
  for (std::size_t i = 0; i < ranked_bands.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%zu,%.6f\n", i + 1, ranked_bands[i],
                  scores[i]);
    out += line;
  }
  return out;
}

SelectionResult select_nms(const BandTable& table, const SelectorConfig& cfg) {
  check_config(table, cfg);
  const std::size_t n = table.band_count();
  const auto rel = relevance_cache(table);

  SelectionResult result;
  result.method = Method::nms;
  result.config = cfg;

  std::vector<bool> taken(n, false);
  std::vector<double> score(n, kUnset);

  // Seed with plain relevance.
  std::size_t seed = argmax_score(rel, taken);
  taken[seed] = true;
  result.ranked_bands.push_back(seed);
  result.scores.push_back(rel[seed]);

  EstimatedGroundTruth gtest;
  gtest.values = table.raw_bands[seed];
  gtest.discretized = quantize_values(gtest.values, table.quantizer);

  while (result.ranked_bands.size() < cfg.k) {
    parallel_for(n, [&](std::size_t b) {
      if (taken[b]) return;
      score[b] = rel[b] + normalized_synergy(table.bands[b], gtest.discretized,
                                             table.class_var, cfg.eps);
    });
    const std::size_t pick = argmax_score(score, taken);
    taken[pick] = true;
    result.ranked_bands.push_back(pick);
    result.scores.push_back(score[pick]);

    // Halve the estimate toward the new pick and re-quantize.
    const auto& raw = table.raw_bands[pick];
    for (std::size_t i = 0; i < gtest.values.size(); ++i)
      gtest.values[i] = (gtest.values[i] + raw[i]) / 2.0;
    gtest.discretized = quantize_values(gtest.values, table.quantizer);
  }

  result.gtest = std::move(gtest);
  return result;
}

SelectionResult select_greedy_classic(Method method, const BandTable& table,
                                      const SelectorConfig& cfg) {
  check_config(table, cfg);
  if (method == Method::nms || method == Method::mibf)
    throw ConfigError("selector: not a classic greedy method");
  const std::size_t n = table.band_count();
  const auto rel = relevance_cache(table);

  SelectionResult result;
  result.method = method;
  result.config = cfg;

  std::vector<bool> taken(n, false);
  std::vector<double> acc(n, 0.0);   // running redundancy / complementarity sum
  std::vector<double> term(n, 0.0);  // this step's new summand per candidate
  std::vector<double> score(n, kUnset);

  std::size_t pick = argmax_score(rel, taken);
  double pick_score = rel[pick];

  while (true) {
    taken[pick] = true;
    result.ranked_bands.push_back(pick);
    result.scores.push_back(pick_score);
    if (result.ranked_bands.size() == cfg.k) break;

    // Each candidate gains one summand involving the band just picked.
    const DiscreteVariable& picked = table.bands[pick];
    double picked_weight = 0.0;  // mifs_u: MI(C, s) / H(s)
    if (method == Method::mifs_u) {
      const double h = entropy(picked);
      picked_weight = h > 0.0 ? mutual_info(table.class_var, picked) / h : 0.0;
    }
    parallel_for(n, [&](std::size_t b) {
      if (taken[b]) return;
      switch (method) {
        case Method::mifs:
        case Method::mrmr:
          term[b] = mutual_info(table.bands[b], picked);
          break;
        case Method::mifs_u:
          term[b] = picked_weight * mutual_info(table.bands[b], picked);
          break;
        case Method::jmi:
          term[b] = joint_mutual_info(table.bands[b], picked, table.class_var);
          break;
        case Method::disr:
          term[b] = symmetrical_relevance(table.bands[b], picked,
                                          table.class_var);
          break;
        case Method::nmi:
          term[b] = normalized_mi(table.bands[b], picked);
          break;
        default:
          break;  // excluded above
      }
    });

    const double selected = static_cast<double>(result.ranked_bands.size());
    for (std::size_t b = 0; b < n; ++b) {
      if (taken[b]) continue;
      acc[b] += term[b];
      switch (method) {
        case Method::mifs:
          score[b] = rel[b] - cfg.beta * acc[b];
          break;
        case Method::mifs_u:
          score[b] = rel[b] - cfg.beta * acc[b];
          break;
        case Method::mrmr:
          score[b] = rel[b] - acc[b] / selected;
          break;
        case Method::jmi:
        case Method::disr:
          score[b] = acc[b];
          break;
        case Method::nmi:
          score[b] = rel[b] - cfg.beta * acc[b];
          break;
        default:
          break;
      }
    }
    pick = argmax_score(score, taken);
    pick_score = score[pick];
  }
  return result;
}

SelectionResult select_mibf(const BandTable& table, const SelectorConfig& cfg) {
  check_config(table, cfg);
  const std::size_t n = table.band_count();
  const auto rel = relevance_cache(table);

  // Relevance-descending walk order; equal relevance keeps index order.
  std::vector<std::size_t> order(n);
  for (std::size_t b = 0; b < n; ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rel[a] > rel[b]; });

  SelectionResult result;
  result.method = Method::mibf;
  result.config = cfg;

  for (std::size_t b : order) {
    if (result.ranked_bands.size() == cfg.k) break;
    double worst = 0.0;
    for (std::size_t s : result.ranked_bands)
      worst = std::max(worst, mutual_info(table.bands[b], table.bands[s]));
    if (result.ranked_bands.empty() || worst <= cfg.threshold) {
      result.ranked_bands.push_back(b);
      result.scores.push_back(rel[b]);
    }
  }
  result.exhausted = result.ranked_bands.size() < cfg.k;
  return result;
}

SelectionResult run_selector(Method method, const BandTable& table,
                             const SelectorConfig& cfg) {
  switch (method) {
    case Method::nms:
      return select_nms(table, cfg);
    case Method::mibf:
      return select_mibf(table, cfg);
    default:
      return select_greedy_classic(method, table, cfg);
  }
}

}  // namespace hsband
