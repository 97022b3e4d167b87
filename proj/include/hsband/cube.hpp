// Hyperspectral cube and ground-truth containers plus their on-disk formats.
//
// A cube is a pair of files: "<name>.hsch", a small JSON header, and
// "<name>.hscd", the raw little-endian payload in band-sequential order
// (band-major, then row-major within a band). Ground truth is "<name>.gt",
// little-endian u16 labels in row-major order with 0 meaning unlabeled.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsband/discrete.hpp"

namespace hsband {

enum class CubeDtype { u16, f32 };

struct HyperCube {
  std::size_t bands = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  CubeDtype dtype = CubeDtype::u16;
  std::vector<double> values;          // band-sequential, finite
  std::vector<double> wavelengths_nm;  // empty, or one entry per band

  std::size_t pixel_count() const { return rows * cols; }

  double value(std::size_t band, std::size_t pixel) const {
    return values[band * pixel_count() + pixel];
  }

  std::span<const double> band(std::size_t b) const {
    return {values.data() + b * pixel_count(), pixel_count()};
  }

  void validate() const;  // throws IoError on a broken container
};

struct GroundTruthMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint16_t> labels;  // row-major, 0 = unlabeled
  std::uint16_t class_count = 0;      // highest label present

  void validate() const;  // throws IoError; needs two distinct nonzero labels
};

// "path" may be the ".hsch" header path or a bare prefix shared by both files.
HyperCube load_cube(const std::string& path);
void write_cube(const std::string& path, const HyperCube& cube);

GroundTruthMap load_ground_truth(const std::string& path, std::size_t rows,
                                 std::size_t cols);
void write_ground_truth(const std::string& path, const GroundTruthMap& gt);

// Row-major pixel indices of the labeled pixels. Every discrete variable in
// the toolkit is aligned to this order.
std::vector<std::size_t> labeled_pixel_order(const GroundTruthMap& gt);

// Raw values of one band at the given pixels.
std::vector<double> band_values_at(const HyperCube& cube, std::size_t band,
                                   std::span<const std::size_t> order);

// Min-max quantization of one band over the labeled pixels only.
DiscreteVariable quantize_band(const HyperCube& cube, std::size_t band,
                               std::span<const std::size_t> order,
                               const QuantizerConfig& cfg);

// Labels shifted down by one so symbols run 0..class_count-1.
DiscreteVariable label_variable(const GroundTruthMap& gt,
                                std::span<const std::size_t> order);

}  // namespace hsband
