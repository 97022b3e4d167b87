#include "hsband/synth.hpp"

#include <json.hpp>
#include <string>

#include "hsband/errors.hpp"
#include "hsband/rng.hpp"

namespace hsband {

namespace {

constexpr std::uint32_t kChannelLevels = 64;  // flip channel: w = (h == 0)
constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 24;

// Relevant and duplicate bands sit on the smallest scale so that flipping the
// channel moves a pixel the shortest distance in feature space; the planted
// class never depends on the relevant band once a synergy pair is present.
std::uint32_t band_scale(const SceneSpec& spec, std::size_t band) {
  const std::size_t plain = spec.relevant_bands + spec.duplicate_bands;
  if (band < plain) return 64;
  return 128 + 8 * static_cast<std::uint32_t>(band % 64);
}

// Validation shared by the JSON loader (IoError) and the generator
// (ConfigError).
std::string spec_problem(const SceneSpec& spec) {
  if (spec.class_count < 2 || spec.class_count > 64)
    return "class_count must lie in [2, 64]";
  if (spec.total_bands() == 0) return "spec produces no bands";
  if (spec.duplicate_bands > 0 && spec.relevant_bands == 0)
    return "duplicate bands need a relevant band to copy";
  if (spec.rows == 0 || spec.cols == 0) return "empty pixel grid";
  if (!(spec.noise_amplitude >= 0.0) || spec.noise_amplitude > 24.0)
    return "noise_amplitude must lie in [0, 24]";

  const std::uint64_t m = spec.class_count;
  const std::uint32_t carriers = spec.synergy_pairs > 0 ? spec.synergy_pairs : 1;
  std::uint64_t cells = m * kChannelLevels;
  for (std::uint32_t p = 0; p < carriers; ++p) {
    if (cells > kMaxCells / m) return "construction cell count too large";
    cells *= m;
  }
  if (std::uint64_t{spec.rows} * spec.cols < cells)
    return "pixel grid smaller than the construction cell count";
  return "";
}

struct BaseSpace {
  std::uint64_t m = 0;         // class alphabet
  std::uint32_t carriers = 0;  // one uniform carrier per pair (min 1)
  std::uint64_t cells = 0;     // m^(1+carriers) * kChannelLevels

  explicit BaseSpace(const SceneSpec& spec) {
    m = spec.class_count;
    carriers = spec.synergy_pairs > 0 ? spec.synergy_pairs : 1;
    cells = m * kChannelLevels;
    for (std::uint32_t p = 0; p < carriers; ++p) cells *= m;
  }

  // cell = ((c * m^carriers + carrier digits) * kChannelLevels + h)
  std::uint32_t channel(std::uint64_t cell) const {
    return static_cast<std::uint32_t>(cell % kChannelLevels);
  }
  std::uint32_t carrier(std::uint64_t cell, std::uint32_t p) const {
    std::uint64_t u = cell / kChannelLevels;
    for (std::uint32_t i = carriers - 1; i > p; --i) u /= m;
    return static_cast<std::uint32_t>(u % m);
  }
  std::uint32_t cls(std::uint64_t cell) const {
    std::uint64_t u = cell / kChannelLevels;
    for (std::uint32_t i = 0; i < carriers; ++i) u /= m;
    return static_cast<std::uint32_t>(u % m);
  }

  std::uint32_t relevant_level(std::uint64_t cell) const {
    const std::uint32_t w = channel(cell) == 0 ? 1 : 0;
    return static_cast<std::uint32_t>(
        (cls(cell) + std::uint64_t{w} * carrier(cell, 0)) % m);
  }
  std::uint32_t synergy_level(std::uint64_t cell, std::uint32_t pair,
                              bool second) const {
    const std::uint32_t u = carrier(cell, pair);
    if (!second) return u;
    return static_cast<std::uint32_t>((u + std::uint64_t{cls(cell)}) % m);
  }
};

PlantedTruth make_truth(const SceneSpec& spec) {
  PlantedTruth truth;
  truth.roles.resize(spec.total_bands());
  std::size_t b = 0;
  for (std::uint32_t j = 0; j < spec.relevant_bands; ++j)
    truth.roles[b++] = {BandRole::Kind::relevant, 0, 0, 0};
  for (std::uint32_t j = 0; j < spec.duplicate_bands; ++j)
    truth.roles[b++] = {BandRole::Kind::duplicate, j % spec.relevant_bands, 0, 0};
  for (std::uint32_t j = 0; j < spec.noise_bands; ++j)
    truth.roles[b++] = {BandRole::Kind::noise, 0, 0, 0};
  for (std::uint32_t p = 0; p < spec.synergy_pairs; ++p) {
    truth.roles[b] = {BandRole::Kind::synergy, 0, b + 1, p};
    truth.roles[b + 1] = {BandRole::Kind::synergy, 0, b, p};
    b += 2;
  }
  return truth;
}

}  // namespace

std::string SceneSpec::to_json() const {
  nlohmann::json j;
  j["rows"] = rows;
  j["cols"] = cols;
  j["class_count"] = class_count;
  j["relevant_bands"] = relevant_bands;
  j["duplicate_bands"] = duplicate_bands;
  j["synergy_pairs"] = synergy_pairs;
  j["noise_bands"] = noise_bands;
  j["noise_amplitude"] = noise_amplitude;
  j["seed"] = seed;
  return j.dump();
}

SceneSpec SceneSpec::from_json(const std::string& text) {
  SceneSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    spec.rows = j.value("rows", spec.rows);
    spec.cols = j.value("cols", spec.cols);
    spec.class_count = j.value("class_count", spec.class_count);
    spec.relevant_bands = j.value("relevant_bands", spec.relevant_bands);
    spec.duplicate_bands = j.value("duplicate_bands", spec.duplicate_bands);
    spec.synergy_pairs = j.value("synergy_pairs", spec.synergy_pairs);
    spec.noise_bands = j.value("noise_bands", spec.noise_bands);
    spec.noise_amplitude = j.value("noise_amplitude", spec.noise_amplitude);
    spec.seed = j.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("scene spec: ") + e.what());
  }
  const std::string problem = spec_problem(spec);
  if (!problem.empty()) throw IoError("scene spec: " + problem);
  return spec;
}

std::vector<std::size_t> PlantedTruth::bands_of(BandRole::Kind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < roles.size(); ++b)
    if (roles[b].kind == kind) out.push_back(b);
  return out;
}

std::string PlantedTruth::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t b = 0; b < roles.size(); ++b) {
    nlohmann::json r;
    r["band"] = b;
    switch (roles[b].kind) {
      case BandRole::Kind::relevant:
        r["kind"] = "relevant";
        break;
      case BandRole::Kind::duplicate:
        r["kind"] = "duplicate";
        r["source"] = roles[b].source;
        break;
      case BandRole::Kind::noise:
        r["kind"] = "noise";
        break;
      case BandRole::Kind::synergy:
        r["kind"] = "synergy";
        r["partner"] = roles[b].partner;
        r["pair"] = roles[b].pair;
        break;
    }
    arr.push_back(r);
  }
  nlohmann::json j;
  j["roles"] = arr;
  return j.dump();
}

Scene generate_scene(const SceneSpec& spec) {
  const std::string problem = spec_problem(spec);
  if (!problem.empty()) throw ConfigError("scene spec: " + problem);

  const BaseSpace base(spec);
  const std::size_t n = std::size_t{spec.rows} * spec.cols;
  const std::size_t n_bands = spec.total_bands();
  std::mt19937_64 rng(spec.seed);

  // One base tuple per pixel; every cell gets floor(n / cells) pixels and the
  // first n mod cells get one more, so divisible grids are materialized
  // exactly.
  std::vector<std::uint64_t> cell_of(n);
  {
    std::size_t px = 0;
    const std::uint64_t repeat = n / base.cells;
    const std::uint64_t extra = n % base.cells;
    for (std::uint64_t cell = 0; cell < base.cells; ++cell) {
      const std::uint64_t count = repeat + (cell < extra ? 1 : 0);
      for (std::uint64_t r = 0; r < count; ++r) cell_of[px++] = cell;
    }
    shuffle(cell_of, rng);
  }

  Scene scene;
  scene.truth = make_truth(spec);

  scene.gt.rows = spec.rows;
  scene.gt.cols = spec.cols;
  scene.gt.class_count = spec.class_count;
  scene.gt.labels.resize(n);
  for (std::size_t px = 0; px < n; ++px)
    scene.gt.labels[px] = static_cast<std::uint16_t>(base.cls(cell_of[px]) + 1);

  // Noise bands draw balanced levels inside every cell group, which keeps
  // each one exactly independent of the planted core. Group membership is
  // gathered once.
  std::vector<std::vector<std::size_t>> group(base.cells);
  for (std::size_t px = 0; px < n; ++px) group[cell_of[px]].push_back(px);

  auto& cube = scene.cube;
  cube.bands = n_bands;
  cube.rows = spec.rows;
  cube.cols = spec.cols;
  cube.dtype = spec.noise_amplitude == 0.0 ? CubeDtype::u16 : CubeDtype::f32;
  cube.values.resize(n_bands * n);

  std::vector<std::uint32_t> level(n);
  for (std::size_t b = 0; b < n_bands; ++b) {
    const BandRole& role = scene.truth.roles[b];
    switch (role.kind) {
      case BandRole::Kind::relevant:
        for (std::size_t px = 0; px < n; ++px)
          level[px] = base.relevant_level(cell_of[px]);
        break;
      case BandRole::Kind::duplicate:
        for (std::size_t px = 0; px < n; ++px)
          level[px] = base.relevant_level(cell_of[px]);
        break;
      case BandRole::Kind::noise:
        for (const auto& members : group) {
          std::vector<std::uint32_t> deal(members.size());
          for (std::size_t i = 0; i < deal.size(); ++i)
            deal[i] = static_cast<std::uint32_t>(i % spec.class_count);
          shuffle(deal, rng);
          for (std::size_t i = 0; i < members.size(); ++i)
            level[members[i]] = deal[i];
        }
        break;
      case BandRole::Kind::synergy:
        for (std::size_t px = 0; px < n; ++px)
          level[px] = base.synergy_level(cell_of[px], role.pair,
                                         role.partner < b);
        break;
    }

    const double scale = band_scale(spec, b);
    double* out = cube.values.data() + b * n;
    if (spec.noise_amplitude == 0.0) {
      for (std::size_t px = 0; px < n; ++px) out[px] = level[px] * scale;
    } else {
      for (std::size_t px = 0; px < n; ++px) {
        out[px] = level[px] * scale +
                  spec.noise_amplitude * (2.0 * uniform_unit(rng) - 1.0);
      }
    }
  }
  return scene;
}

ProbTable exact_joint_distribution(const SceneSpec& spec,
                                   std::span<const std::size_t> band_ids,
                                   bool with_class) {
  const std::string problem = spec_problem(spec);
  if (!problem.empty()) throw ConfigError("scene spec: " + problem);
  if (spec.noise_amplitude != 0.0)
    throw ConfigError("exact distribution: noisy scenes have no closed form");

  const PlantedTruth truth = make_truth(spec);
  for (std::size_t b : band_ids) {
    if (b >= truth.roles.size())
      throw ConfigError("exact distribution: band id out of range");
  }

  const BaseSpace base(spec);
  const std::uint32_t m = spec.class_count;

  // Requested noise bands contribute an independent uniform factor each.
  std::vector<std::size_t> noise_slot(band_ids.size(), SIZE_MAX);
  std::size_t noise_factors = 0;
  for (std::size_t i = 0; i < band_ids.size(); ++i) {
    if (truth.roles[band_ids[i]].kind == BandRole::Kind::noise)
      noise_slot[i] = noise_factors++;
  }
  std::uint64_t noise_cells = 1;
  for (std::size_t f = 0; f < noise_factors; ++f) noise_cells *= m;

  ProbTable table;
  std::size_t out_cells = 1;
  for (std::size_t i = 0; i < band_ids.size(); ++i) {
    table.dims.push_back(m);
    out_cells *= m;
  }
  if (with_class) {
    table.dims.push_back(m);
    out_cells *= m;
  }
  table.probs.assign(out_cells, 0.0);

  const double p = 1.0 / (static_cast<double>(base.cells) *
                          static_cast<double>(noise_cells));
  for (std::uint64_t cell = 0; cell < base.cells; ++cell) {
    for (std::uint64_t nz = 0; nz < noise_cells; ++nz) {
      std::size_t out = 0;
      for (std::size_t i = 0; i < band_ids.size(); ++i) {
        const BandRole& role = truth.roles[band_ids[i]];
        std::uint32_t lvl = 0;
        switch (role.kind) {
          case BandRole::Kind::relevant:
          case BandRole::Kind::duplicate:
            lvl = base.relevant_level(cell);
            break;
          case BandRole::Kind::noise: {
            std::uint64_t digits = nz;
            for (std::size_t f = 0; f < noise_slot[i]; ++f) digits /= m;
            lvl = static_cast<std::uint32_t>(digits % m);
            break;
          }
          case BandRole::Kind::synergy:
            lvl = base.synergy_level(cell, role.pair,
                                     role.partner < band_ids[i]);
            break;
        }
        out = out * m + lvl;
      }
      if (with_class) out = out * m + base.cls(cell);
      table.probs[out] += p;
    }
  }
  return table;
}

}  // namespace hsband
