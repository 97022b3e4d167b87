// Plug-in (maximum likelihood) information measures over discrete variables.
// Probabilities are relative cell frequencies of a shared histogram, with no
// smoothing or bias correction, and all results are in bits.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "hsband/discrete.hpp"

namespace hsband {

using Bits = double;

// Dense joint histogram over one to three variables of equal length.
struct JointHistogram {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint64_t> counts;  // row-major over dims
  std::uint64_t total = 0;

  static JointHistogram of(std::initializer_list<const DiscreteVariable*> vars);

  Bits entropy_bits() const;

  // Sums out one axis; used to check marginal consistency.
  JointHistogram marginal(std::size_t dropped_axis) const;
};

Bits entropy(const DiscreteVariable& x);
Bits joint_entropy(const DiscreteVariable& x, const DiscreteVariable& y);
Bits joint_entropy(const DiscreteVariable& x, const DiscreteVariable& y,
                   const DiscreteVariable& z);

// I(X;Y) = H(X) + H(Y) - H(X,Y)
Bits mutual_info(const DiscreteVariable& x, const DiscreteVariable& y);

// I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(Z) - H(X,Y,Z)
Bits cond_mutual_info(const DiscreteVariable& x, const DiscreteVariable& y,
                      const DiscreteVariable& z);

// I((X,Y);C), the information the pair carries jointly about C.
Bits joint_mutual_info(const DiscreteVariable& x, const DiscreteVariable& y,
                       const DiscreteVariable& c);

// I((X,Y);C) - I(X;C) - I(Y;C). Positive for synergy (an XOR pair scores
// +1 bit), negative for redundancy (a duplicated relevant band scores
// -I(X;C)), and symmetric under any permutation of its three arguments.
Bits interaction_info(const DiscreteVariable& x, const DiscreteVariable& y,
                      const DiscreteVariable& c);

// 2 * interaction_info / (I(X;C) + I(Y;C)), or 0 when the denominator is
// below eps. Lives in [-1, 1] whenever the denominator is healthy.
double normalized_synergy(const DiscreteVariable& x, const DiscreteVariable& y,
                          const DiscreteVariable& c, double eps = 1e-12);

// 2 * I(X;Y) / (H(X) + H(Y)), or 0 when both variables are constant.
double normalized_mi(const DiscreteVariable& x, const DiscreteVariable& y);

// I((X,Y);C) / H(X,Y,C). Errors when the joint entropy is zero.
double symmetrical_relevance(const DiscreteVariable& x,
                             const DiscreteVariable& y,
                             const DiscreteVariable& c);

}  // namespace hsband
