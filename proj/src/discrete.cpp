#include "hsband/discrete.hpp"

#include <cmath>

#include "hsband/errors.hpp"

namespace hsband {

DiscreteVariable quantize_values(std::span<const double> values,
                                 const QuantizerConfig& cfg) {
  if (values.empty()) throw ConfigError("quantize: empty sample");
  if (cfg.bins < 2 || cfg.bins > 65536)
    throw ConfigError("quantize: bins must lie in [2, 65536]");

  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }

  DiscreteVariable var;
  var.cardinality = cfg.bins;
  var.symbols.resize(values.size());
  if (hi == lo) return var;  // constant input: everything lands in bin 0

  const double span = hi - lo;
  const double bins = static_cast<double>(cfg.bins);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double s = std::floor((values[i] - lo) * bins / span);
    if (s >= bins) s = bins - 1;  // v == max tops out in the last bin
    var.symbols[i] = static_cast<std::uint32_t>(s);
  }
  return var;
}

}  // namespace hsband
