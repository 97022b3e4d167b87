// Greedy band selection. All methods share the same relevance seed (the band
// with the highest mutual information with the class) and the same
// tie-breaking rule: equal scores go to the lowest band index.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsband/cube.hpp"
#include "hsband/discrete.hpp"
#include "hsband/infotheory.hpp"

namespace hsband {

enum class Method { nms, mifs, mifs_u, mrmr, jmi, disr, mibf, nmi };

const char* method_name(Method m);
Method parse_method(const std::string& name);  // throws ConfigError

struct SelectorConfig {
  std::size_t k = 1;          // bands to select
  double beta = 1.0;          // redundancy weight for mifs / mifs_u / nmi
  double threshold = 0.5;     // pairwise MI cutoff for mibf, in bits
  double eps = 1e-12;         // zero-denominator guard for the nms score
};

// Quantized bands plus the raw values they came from. The raw values are kept
// because the nms ground-truth estimate is blended in raw space and then
// re-quantized.
struct BandTable {
  std::vector<DiscreteVariable> bands;
  DiscreteVariable class_var;
  std::vector<std::vector<double>> raw_bands;
  QuantizerConfig quantizer;

  static BandTable build(const HyperCube& cube, const GroundTruthMap& gt,
                         const QuantizerConfig& cfg);

  std::size_t band_count() const { return bands.size(); }
  std::size_t sample_count() const { return class_var.size(); }
};

// Running blend of the already-selected bands, halved toward each new pick:
// values <- (values + pick) / 2, then re-quantized with the table's
// quantizer.
struct EstimatedGroundTruth {
  std::vector<double> values;
  DiscreteVariable discretized;
};

struct SelectionResult {
  Method method = Method::nms;
  std::vector<std::size_t> ranked_bands;  // selection order
  std::vector<double> scores;             // winning objective per step
  SelectorConfig config;
  bool exhausted = false;       // mibf only: the threshold walk ran dry
  EstimatedGroundTruth gtest;   // nms only: final blended estimate

  std::string to_csv() const;   // "rank,band_index,score" rows
};

// Objective per step: MI(band, class) + normalized_synergy(band, estimate,
// class). The estimate starts as the seed band and is halved toward every
// subsequent pick.
SelectionResult select_nms(const BandTable& table, const SelectorConfig& cfg);

// mifs:   MI(b,C) - beta * sum_s MI(b,s)
// mifs_u: MI(b,C) - beta * sum_s (MI(C,s)/H(s)) * MI(b,s)   (H(s)=0 -> 0)
// mrmr:   MI(b,C) - mean_s MI(b,s)
// jmi:    sum_s I((b,s);C)
// disr:   sum_s I((b,s);C) / H(b,s,C)
// nmi:    MI(b,C) - beta * sum_s normalized_mi(b,s)
SelectionResult select_greedy_classic(Method method, const BandTable& table,
                                      const SelectorConfig& cfg);

// Walks bands in MI-descending order, accepting a band iff its highest MI
// with any accepted band is <= cfg.threshold. May return fewer than k bands;
// that is flagged as `exhausted`. Scores are the accepted bands' relevance.
SelectionResult select_mibf(const BandTable& table, const SelectorConfig& cfg);

// Dispatch on method.
SelectionResult run_selector(Method method, const BandTable& table,
                             const SelectorConfig& cfg);

}  // namespace hsband
