// Synthetic scenes with planted structure, used as ground truth for the
// selectors and estimators.
//
// Construction. Each pixel draws a tuple from a small product space: the
// class c in {0..m-1}, one uniform carrier u_p per synergy pair, and a
// 64-level channel variable h. With zero noise amplitude the generator
// materializes every tuple an exact integer number of times (when the pixel
// count divides evenly), so plug-in estimates on the sample equal the
// construction's closed-form distribution instead of approximating it.
//
// Band roles, laid out in this order:
//   relevant   level (c + w * u_1) mod m, where w = (h == 0), i.e. the class
//              seen through a rare flip channel (flip odds 1/64 scaled by the
//              carrier). Keeps MI(band, class) above 0.9 * H(class) while
//              leaving genuine residual uncertainty for synergy to resolve.
//   duplicate  copy of a relevant band (round-robin source).
//   noise      uniform level, balanced exactly within every tuple group so
//              each noise band is exactly independent of the planted core.
//              Distinct noise bands are only approximately independent of
//              one another; closed-form queries should involve at most one.
//   synergy    pair (x1, x2): x1 = u_p and x2 = (u_p + c) mod m. Each band
//              alone is independent of the class; together they determine it.
//
// Levels are spaced by per-band scale factors (relevant/duplicate bands use
// the smallest scale) and noise_amplitude adds a bounded uniform perturbation
// on top; amplitude 0 yields an integer-valued u16 cube.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsband/cube.hpp"

namespace hsband {

struct SceneSpec {
  std::uint32_t rows = 64;
  std::uint32_t cols = 64;
  std::uint32_t class_count = 2;
  std::uint32_t relevant_bands = 1;
  std::uint32_t duplicate_bands = 2;
  std::uint32_t synergy_pairs = 1;
  std::uint32_t noise_bands = 4;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 42;

  std::size_t total_bands() const {
    return std::size_t{relevant_bands} + duplicate_bands +
           2 * std::size_t{synergy_pairs} + noise_bands;
  }

  std::string to_json() const;
  static SceneSpec from_json(const std::string& text);  // throws IoError
};

struct BandRole {
  enum class Kind { relevant, duplicate, noise, synergy };

  Kind kind = Kind::noise;
  std::size_t source = 0;   // duplicate: index of the copied relevant band
  std::size_t partner = 0;  // synergy: index of the other pair element
  std::size_t pair = 0;     // synergy: which pair this band belongs to
};

struct PlantedTruth {
  std::vector<BandRole> roles;  // one per band, same order as the cube

  std::vector<std::size_t> bands_of(BandRole::Kind kind) const;
  std::string to_json() const;
};

struct Scene {
  HyperCube cube;
  GroundTruthMap gt;
  PlantedTruth truth;
};

Scene generate_scene(const SceneSpec& spec);  // throws ConfigError

// Closed-form joint distribution of the requested bands (plus the class when
// with_class is set) for a zero-noise spec. Dimensions hold the bands' level
// alphabets in request order, then the class. Errors when noise_amplitude is
// nonzero, since noisy scenes have no exact table.
struct ProbTable {
  std::vector<std::uint32_t> dims;
  std::vector<double> probs;  // row-major over dims, sums to 1
};

ProbTable exact_joint_distribution(const SceneSpec& spec,
                                   std::span<const std::size_t> band_ids,
                                   bool with_class);

}  // namespace hsband
