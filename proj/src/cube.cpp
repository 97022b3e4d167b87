#include "hsband/cube.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <system_error>
#include <json.hpp>

#include "hsband/errors.hpp"

namespace hsband {

namespace {

std::string strip_suffix(const std::string& path, const char* suffix) {
  std::string s(suffix);
  if (path.size() > s.size() &&
      path.compare(path.size() - s.size(), s.size(), s) == 0) {
    return path.substr(0, path.size() - s.size());
  }
  return path;
}

std::string base_path(const std::string& path) {
  std::string p = strip_suffix(path, ".hsch");
  p = strip_suffix(p, ".hscd");
  return p;
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(len));
  if (len > 0) in.read(reinterpret_cast<char*>(bytes.data()), len);
  if (!in) throw IoError("short read on " + path);
  return bytes;
}

void write_file(const std::string& path, const unsigned char* data,
                std::size_t len) {
  // Write to a sibling temp file and rename so failures leave no partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp);
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(len));
    if (!out) throw IoError("short write on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path);
}

std::uint16_t decode_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void encode_u16(std::uint16_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>(v >> 8);
}

float decode_f32(const unsigned char* p) {
  std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                    (static_cast<std::uint32_t>(p[1]) << 8) |
                    (static_cast<std::uint32_t>(p[2]) << 16) |
                    (static_cast<std::uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &u, sizeof f);
  return f;
}

void encode_f32(float f, unsigned char* p) {
  std::uint32_t u;
  std::memcpy(&u, &f, sizeof u);
  p[0] = static_cast<unsigned char>(u & 0xff);
  p[1] = static_cast<unsigned char>((u >> 8) & 0xff);
  p[2] = static_cast<unsigned char>((u >> 16) & 0xff);
  p[3] = static_cast<unsigned char>((u >> 24) & 0xff);
}

}  // namespace

void HyperCube::validate() const {
  if (bands == 0 || rows == 0 || cols == 0)
    throw IoError("cube: bands, rows and cols must all be positive");
  if (values.size() != bands * rows * cols)
    throw IoError("cube: payload size does not match header dimensions");
  for (double v : values) {
    if (!std::isfinite(v)) throw IoError("cube: non-finite value in payload");
  }
  if (!wavelengths_nm.empty() && wavelengths_nm.size() != bands)
    throw IoError("cube: wavelength list does not match band count");
}

void GroundTruthMap::validate() const {
  if (rows == 0 || cols == 0) throw IoError("ground truth: empty dimensions");
  if (labels.size() != rows * cols)
    throw IoError("ground truth: label count does not match dimensions");
  std::uint16_t max_label = 0;
  std::uint16_t first = 0;
  bool two_distinct = false;
  for (std::uint16_t l : labels) {
    if (l == 0) continue;
    if (l > max_label) max_label = l;
    if (first == 0) {
      first = l;
    } else if (l != first) {
      two_distinct = true;
    }
  }
  if (!two_distinct)
    throw IoError("ground truth: needs at least two distinct nonzero labels");
  if (max_label != class_count)
    throw IoError("ground truth: class_count does not match highest label");
}

HyperCube load_cube(const std::string& path) {
  const std::string base = base_path(path);
  const std::string header_path = base + ".hsch";
  const std::string payload_path = base + ".hscd";

  nlohmann::json header;
  {
    std::ifstream in(header_path);
    if (!in) throw IoError("cannot open " + header_path);
    try {
      in >> header;
    } catch (const nlohmann::json::exception& e) {
      throw IoError(header_path + ": " + e.what());
    }
  }

  HyperCube cube;
  try {
    cube.bands = header.at("bands").get<std::size_t>();
    cube.rows = header.at("rows").get<std::size_t>();
    cube.cols = header.at("cols").get<std::size_t>();
    const std::string dtype = header.at("dtype").get<std::string>();
    if (dtype == "u16") {
      cube.dtype = CubeDtype::u16;
    } else if (dtype == "f32") {
      cube.dtype = CubeDtype::f32;
    } else {
      throw IoError(header_path + ": unknown dtype \"" + dtype + "\"");
    }
    if (header.at("order").get<std::string>() != "bsq")
      throw IoError(header_path + ": only band-sequential order is supported");
    if (header.contains("wavelengths_nm"))
      cube.wavelengths_nm = header["wavelengths_nm"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(header_path + ": " + e.what());
  }

  const auto bytes = read_file(payload_path);
  const std::size_t n = cube.bands * cube.rows * cube.cols;
  const std::size_t word = cube.dtype == CubeDtype::u16 ? 2 : 4;
  if (bytes.size() != n * word)
    throw IoError(payload_path + ": payload size does not match header");

  cube.values.resize(n);
  if (cube.dtype == CubeDtype::u16) {
    for (std::size_t i = 0; i < n; ++i)
      cube.values[i] = decode_u16(&bytes[2 * i]);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      cube.values[i] = decode_f32(&bytes[4 * i]);
  }
  cube.validate();
  return cube;
}

void write_cube(const std::string& path, const HyperCube& cube) {
  cube.validate();
  const std::string base = base_path(path);

  const std::size_t n = cube.values.size();
  const std::size_t word = cube.dtype == CubeDtype::u16 ? 2 : 4;
  std::vector<unsigned char> bytes(n * word);
  if (cube.dtype == CubeDtype::u16) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = cube.values[i];
      if (v < 0 || v > 65535 || v != std::floor(v))
        throw IoError("cube: value not representable as u16");
      encode_u16(static_cast<std::uint16_t>(v), &bytes[2 * i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      encode_f32(static_cast<float>(cube.values[i]), &bytes[4 * i]);
  }

  nlohmann::json header;
  header["bands"] = cube.bands;
  header["rows"] = cube.rows;
  header["cols"] = cube.cols;
  header["dtype"] = cube.dtype == CubeDtype::u16 ? "u16" : "f32";
  header["order"] = "bsq";
  if (!cube.wavelengths_nm.empty()) header["wavelengths_nm"] = cube.wavelengths_nm;
  const std::string text = header.dump();
  write_file(base + ".hsch",
             reinterpret_cast<const unsigned char*>(text.data()), text.size());
  write_file(base + ".hscd", bytes.data(), bytes.size());
}

GroundTruthMap load_ground_truth(const std::string& path, std::size_t rows,
                                 std::size_t cols) {
  const std::string gt_path =
      path.size() > 3 && path.compare(path.size() - 3, 3, ".gt") == 0
          ? path
          : path + ".gt";
  const auto bytes = read_file(gt_path);
  if (bytes.size() != rows * cols * 2)
    throw IoError(gt_path + ": label payload does not match dimensions");

  GroundTruthMap gt;
  gt.rows = rows;
  gt.cols = cols;
  gt.labels.resize(rows * cols);
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    gt.labels[i] = decode_u16(&bytes[2 * i]);
    if (gt.labels[i] > gt.class_count) gt.class_count = gt.labels[i];
  }
  gt.validate();
  return gt;
}

void write_ground_truth(const std::string& path, const GroundTruthMap& gt) {
  gt.validate();
  const std::string gt_path =
      path.size() > 3 && path.compare(path.size() - 3, 3, ".gt") == 0
          ? path
          : path + ".gt";
  std::vector<unsigned char> bytes(gt.labels.size() * 2);
  for (std::size_t i = 0; i < gt.labels.size(); ++i)
    encode_u16(gt.labels[i], &bytes[2 * i]);
  write_file(gt_path, bytes.data(), bytes.size());
}

std::vector<std::size_t> labeled_pixel_order(const GroundTruthMap& gt) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < gt.labels.size(); ++i)
    if (gt.labels[i] != 0) order.push_back(i);
  return order;
}

std::vector<double> band_values_at(const HyperCube& cube, std::size_t band,
                                   std::span<const std::size_t> order) {
  const auto values = cube.band(band);
  std::vector<double> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = values[order[i]];
  return out;
}

DiscreteVariable quantize_band(const HyperCube& cube, std::size_t band,
                               std::span<const std::size_t> order,
                               const QuantizerConfig& cfg) {
  const auto values = band_values_at(cube, band, order);
  return quantize_values(values, cfg);
}

DiscreteVariable label_variable(const GroundTruthMap& gt,
                                std::span<const std::size_t> order) {
  DiscreteVariable var;
  var.cardinality = gt.class_count;
  var.symbols.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    var.symbols[i] = static_cast<std::uint32_t>(gt.labels[order[i]] - 1);
  return var;
}

}  // namespace hsband
