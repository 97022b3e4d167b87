// Discrete per-pixel variables and the quantizer that produces them.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hsband {

// A column of bin indices, one per labeled pixel, in a shared pixel order.
struct DiscreteVariable {
  std::vector<std::uint32_t> symbols;
  std::uint32_t cardinality = 0;  // every symbol is < cardinality

  std::size_t size() const { return symbols.size(); }
};

struct QuantizerConfig {
  enum class Strategy { linear_min_max };

  std::uint32_t bins = 64;
  Strategy strategy = Strategy::linear_min_max;
};

// Linear min-max binning: symbol = floor((v - min) * bins / (max - min)),
// clamped to bins - 1. A constant input maps every sample to symbol 0.
// Monotone in v and invariant under positive affine maps of the input.
DiscreteVariable quantize_values(std::span<const double> values,
                                 const QuantizerConfig& cfg);

}  // namespace hsband
