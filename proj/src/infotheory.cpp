#include "hsband/infotheory.hpp"

#include <cmath>

#include "hsband/errors.hpp"

namespace hsband {

namespace {

// Guards against runaway dense allocations (e.g. three 65536-bin variables).
constexpr std::size_t kMaxCells = std::size_t{1} << 28;

void require_same_length(std::initializer_list<const DiscreteVariable*> vars) {
  std::size_t len = (*vars.begin())->size();
  for (const DiscreteVariable* v : vars) {
    if (v->size() != len)
      throw ConfigError("information measure: variables differ in length");
  }
  if (len == 0) throw ConfigError("information measure: empty sample");
}

}  // namespace

JointHistogram JointHistogram::of(
    std::initializer_list<const DiscreteVariable*> vars) {
  require_same_length(vars);

  JointHistogram h;
  std::size_t cells = 1;
  for (const DiscreteVariable* v : vars) {
    if (v->cardinality == 0)
      throw ConfigError("information measure: variable with zero cardinality");
    if (cells > kMaxCells / v->cardinality)
      throw ConfigError("information measure: joint histogram too large");
    cells *= v->cardinality;
    h.dims.push_back(v->cardinality);
  }
  h.counts.assign(cells, 0);

  const std::size_t n = (*vars.begin())->size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cell = 0;
    for (const DiscreteVariable* v : vars)
      cell = cell * v->cardinality + v->symbols[i];
    ++h.counts[cell];
  }
  h.total = n;
  return h;
}

Bits JointHistogram::entropy_bits() const {
  // long double accumulation keeps the algebraic identities between measures
  // well inside 1e-12 even for large histograms.
  const long double n = static_cast<long double>(total);
  long double h = 0.0L;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const long double p = static_cast<long double>(c) / n;
    h -= p * std::log2(p);
  }
  return static_cast<Bits>(h);
}

JointHistogram JointHistogram::marginal(std::size_t dropped_axis) const {
  JointHistogram out;
  std::size_t cells = 1;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (a == dropped_axis) continue;
    out.dims.push_back(dims[a]);
    cells *= dims[a];
  }
  out.counts.assign(cells, 0);
  out.total = total;

  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t cell = 0; cell < counts.size(); ++cell) {
    std::size_t reduced = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) {
      if (a == dropped_axis) continue;
      reduced = reduced * dims[a] + idx[a];
    }
    out.counts[reduced] += counts[cell];
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

Bits entropy(const DiscreteVariable& x) {
  return JointHistogram::of({&x}).entropy_bits();
}

Bits joint_entropy(const DiscreteVariable& x, const DiscreteVariable& y) {
  return JointHistogram::of({&x, &y}).entropy_bits();
}

Bits joint_entropy(const DiscreteVariable& x, const DiscreteVariable& y,
                   const DiscreteVariable& z) {
  return JointHistogram::of({&x, &y, &z}).entropy_bits();
}

Bits mutual_info(const DiscreteVariable& x, const DiscreteVariable& y) {
  return entropy(x) + entropy(y) - joint_entropy(x, y);
}

Bits cond_mutual_info(const DiscreteVariable& x, const DiscreteVariable& y,
                      const DiscreteVariable& z) {
  return joint_entropy(x, z) + joint_entropy(y, z) - entropy(z) -
         joint_entropy(x, y, z);
}

Bits joint_mutual_info(const DiscreteVariable& x, const DiscreteVariable& y,
                       const DiscreteVariable& c) {
  return joint_entropy(x, y) + entropy(c) - joint_entropy(x, y, c);
}

Bits interaction_info(const DiscreteVariable& x, const DiscreteVariable& y,
                      const DiscreteVariable& c) {
  return joint_mutual_info(x, y, c) - mutual_info(x, c) - mutual_info(y, c);
}

double normalized_synergy(const DiscreteVariable& x, const DiscreteVariable& y,
                          const DiscreteVariable& c, double eps) {
  const double denom = mutual_info(x, c) + mutual_info(y, c);
  if (denom < eps) return 0.0;
  return 2.0 * interaction_info(x, y, c) / denom;
}

double normalized_mi(const DiscreteVariable& x, const DiscreteVariable& y) {
  const double denom = entropy(x) + entropy(y);
  if (denom <= 0.0) return 0.0;  // both constant
  return 2.0 * mutual_info(x, y) / denom;
}

double symmetrical_relevance(const DiscreteVariable& x,
                             const DiscreteVariable& y,
                             const DiscreteVariable& c) {
  const double denom = joint_entropy(x, y, c);
  if (denom <= 0.0)
    throw ConfigError("symmetrical relevance: zero joint entropy");
  return joint_mutual_info(x, y, c) / denom;
}

}  // namespace hsband
