// hsband command-line tool: band selection, evaluation, and scene synthesis.
#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hsband/classify.hpp"
#include "hsband/cube.hpp"
#include "hsband/errors.hpp"
#include "hsband/infotheory.hpp"
#include "hsband/selectors.hpp"
#include "hsband/synth.hpp"

namespace {

using namespace hsband;

// All text outputs go through a temp file plus rename so an interrupted run
// never leaves a partial artifact at the destination path.
void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp);
    out << content;
    if (!out) throw IoError("short write on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::size_t> parse_band_list(const std::string& text) {
  std::vector<std::size_t> bands;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      bands.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("invalid band index '" + item + "'");
    }
  }
  if (bands.empty()) throw ConfigError("empty band list");
  return bands;
}

// Reads the band column of a ranking CSV produced by `select`.
std::vector<std::size_t> read_ranking_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty ranking file " + path);
  if (line.rfind("rank,band_index,score", 0) != 0)
    throw IoError("unrecognized ranking header in " + path);
  std::vector<std::size_t> bands;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw IoError("malformed ranking row '" + line + "' in " + path);
    try {
      bands.push_back(
          static_cast<std::size_t>(std::stoull(line.substr(c1 + 1, c2 - c1 - 1))));
    } catch (const std::exception&) {
      throw IoError("malformed ranking row '" + line + "' in " + path);
    }
  }
  if (bands.empty()) throw IoError("ranking file " + path + " has no rows");
  return bands;
}

// Class-map pixmap: label 0 is black, labels cycle through 16 saturated colors.
std::string to_pixmap(const std::vector<std::uint16_t>& labels, std::size_t rows,
                      std::size_t cols) {
  static constexpr int kPalette[17][3] = {
      {0, 0, 0},       {230, 25, 75},   {60, 180, 75},   {255, 225, 25},
      {0, 130, 200},   {245, 130, 48},  {145, 30, 180},  {70, 240, 240},
      {240, 50, 230},  {210, 245, 60},  {250, 190, 212}, {0, 128, 128},
      {220, 190, 255}, {170, 110, 40},  {255, 250, 200}, {128, 0, 0},
      {170, 255, 195}};
  std::ostringstream out;
  out << "P3\n" << cols << " " << rows << "\n255\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::uint16_t label = labels[r * cols + c];
      const int slot = label == 0 ? 0 : static_cast<int>((label - 1) % 16) + 1;
      if (c) out << ' ';
      out << kPalette[slot][0] << ' ' << kPalette[slot][1] << ' '
          << kPalette[slot][2];
    }
    out << '\n';
  }
  return out.str();
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct CommonIo {
  std::string cube_path;
  std::string gt_path;
  std::size_t bins = 64;
};

struct LoadedScene {
  HyperCube cube;
  GroundTruthMap gt;
  BandTable table;
};

LoadedScene load_scene(const CommonIo& io) {
  LoadedScene scene;
  scene.cube = load_cube(io.cube_path);
  scene.gt = load_ground_truth(io.gt_path, scene.cube.rows, scene.cube.cols);
  QuantizerConfig qcfg;
  qcfg.bins = io.bins;
  scene.table = BandTable::build(scene.cube, scene.gt, qcfg);
  return scene;
}

struct EvalOutcome {
  MetricsReport metrics;
  ConfusionMatrix confusion;
  SplitPlan plan;
};

EvalOutcome evaluate_bands(const LoadedScene& scene,
                           const std::vector<std::size_t>& bands,
                           double train_fraction, std::uint64_t seed,
                           std::size_t neighbors) {
  const std::vector<std::size_t> order = labeled_pixel_order(scene.gt);
  const auto label_at = [&](std::size_t position) {
    return scene.gt.labels[order[position]];
  };

  EvalOutcome out;
  out.plan = stratified_split(scene.gt, train_fraction, seed);
  const FeatureMatrix train =
      gather_features(scene.cube, scene.gt, bands, out.plan.train_indices);
  const FeatureMatrix test =
      gather_features(scene.cube, scene.gt, bands, out.plan.test_indices);
  std::vector<std::uint16_t> train_labels(out.plan.train_indices.size());
  for (std::size_t i = 0; i < train_labels.size(); ++i)
    train_labels[i] = label_at(out.plan.train_indices[i]);
  const std::vector<std::uint16_t> predicted =
      knn_classify(train, train_labels, test, neighbors);
  std::vector<std::uint16_t> truth(out.plan.test_indices.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    truth[i] = label_at(out.plan.test_indices[i]);
  auto [confusion, metrics] =
      confusion_and_metrics(truth, predicted, scene.gt.class_count);
  out.confusion = std::move(confusion);
  out.metrics = metrics;
  return out;
}

int cmd_select(const CommonIo& io, const std::string& method_name, std::size_t k,
               double beta, double threshold, const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedScene scene = load_scene(io);
  SelectorConfig cfg;
  cfg.k = k;
  cfg.beta = beta;
  cfg.threshold = threshold;
  const SelectionResult result =
      run_selector(parse_method(method_name), scene.table, cfg);
  atomic_write_text(out_path, result.to_csv());
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cout << "method=" << method_name << " k=" << result.ranked_bands.size()
            << " bands=" << scene.table.band_count()
            << " samples=" << scene.table.sample_count();
  if (result.exhausted) std::cout << " exhausted=true";
  std::cout << " elapsed=" << format_real(elapsed.count()) << "s\n";
  return 0;
}

int cmd_classify(const CommonIo& io, const std::string& ranking_path,
                 std::size_t k, double train_fraction, std::uint64_t seed,
                 std::size_t neighbors, const std::string& out_path,
                 const std::string& map_path) {
  const LoadedScene scene = load_scene(io);
  std::vector<std::size_t> bands = read_ranking_csv(ranking_path);
  for (const std::size_t b : bands)
    if (b >= scene.cube.bands)
      throw ConfigError("ranking band index out of range");
  if (k > 0) {
    if (k > bands.size())
      throw ConfigError("prefix length exceeds ranking length");
    bands.resize(k);
  }
  const EvalOutcome eval =
      evaluate_bands(scene, bands, train_fraction, seed, neighbors);
  atomic_write_text(out_path, metrics_to_json(eval.metrics, eval.confusion));
  if (!map_path.empty()) {
    const std::vector<std::uint16_t> map =
        full_scene_map(scene.cube, scene.gt, bands, eval.plan, neighbors);
    atomic_write_text(map_path, to_pixmap(map, scene.gt.rows, scene.gt.cols));
  }
  std::cout << "oa=" << format_real(eval.metrics.oa)
            << " aa=" << format_real(eval.metrics.aa)
            << " kappa=" << format_real(eval.metrics.kappa) << "\n";
  return 0;
}

int cmd_sweep(const CommonIo& io, const std::vector<std::string>& method_names,
              std::size_t k_max, std::size_t step,
              std::vector<double> train_fractions, std::uint64_t seed,
              double beta, double threshold, std::size_t neighbors,
              const std::string& out_path) {
  if (step == 0) throw ConfigError("step must be positive");
  if (k_max == 0) throw ConfigError("k-max must be positive");
  if (method_names.empty()) throw ConfigError("no methods given");
  if (train_fractions.empty()) train_fractions.push_back(0.5);

  const auto start = std::chrono::steady_clock::now();
  const LoadedScene scene = load_scene(io);
  SelectorConfig cfg;
  cfg.k = k_max;
  cfg.beta = beta;
  cfg.threshold = threshold;

  std::ostringstream csv;
  csv << "method,k,train_fraction,oa,aa,kappa\n";
  std::size_t rows = 0;
  for (const std::string& name : method_names) {
    const SelectionResult result =
        run_selector(parse_method(name), scene.table, cfg);
    for (std::size_t k = step; k <= k_max; k += step) {
      if (k > result.ranked_bands.size()) break;  // mibf may run out early
      const std::vector<std::size_t> prefix(result.ranked_bands.begin(),
                                            result.ranked_bands.begin() +
                                                static_cast<std::ptrdiff_t>(k));
      for (const double frac : train_fractions) {
        const EvalOutcome eval =
            evaluate_bands(scene, prefix, frac, seed, neighbors);
        csv << name << ',' << k << ',' << format_real(frac) << ','
            << format_real(eval.metrics.oa) << ',' << format_real(eval.metrics.aa)
            << ',' << format_real(eval.metrics.kappa) << '\n';
        ++rows;
      }
    }
  }
  atomic_write_text(out_path, csv.str());
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cout << "methods=" << method_names.size() << " rows=" << rows
            << " elapsed=" << format_real(elapsed.count()) << "s\n";
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_prefix) {
  SceneSpec spec;
  if (!spec_path.empty()) spec = SceneSpec::from_json(read_text(spec_path));
  const Scene scene = generate_scene(spec);
  write_cube(out_prefix, scene.cube);
  write_ground_truth(out_prefix + ".gt", scene.gt);
  atomic_write_text(out_prefix + ".planted.json", scene.truth.to_json());
  std::cout << "bands=" << scene.cube.bands << " rows=" << scene.cube.rows
            << " cols=" << scene.cube.cols
            << " classes=" << scene.gt.class_count << "\n";
  return 0;
}

int cmd_info(const CommonIo& io, const std::string& op,
             const std::string& bands_text) {
  const LoadedScene scene = load_scene(io);
  const std::vector<std::size_t> bands = parse_band_list(bands_text);
  for (const std::size_t b : bands)
    if (b >= scene.table.band_count()) throw ConfigError("band index out of range");

  const auto need = [&](std::size_t n) {
    if (bands.size() != n)
      throw ConfigError("op '" + op + "' takes exactly " + std::to_string(n) +
                        " band(s)");
  };
  const DiscreteVariable& cls = scene.table.class_var;
  double value = 0.0;
  if (op == "entropy") {
    need(1);
    value = entropy(scene.table.bands[bands[0]]);
  } else if (op == "mi") {
    need(1);
    value = mutual_info(scene.table.bands[bands[0]], cls);
  } else if (op == "jmi") {
    need(2);
    value = joint_mutual_info(scene.table.bands[bands[0]],
                              scene.table.bands[bands[1]], cls);
  } else if (op == "ii") {
    need(2);
    value = interaction_info(scene.table.bands[bands[0]],
                             scene.table.bands[bands[1]], cls);
  } else if (op == "nms") {
    need(2);
    value = normalized_synergy(scene.table.bands[bands[0]],
                               scene.table.bands[bands[1]], cls);
  } else {
    throw ConfigError("unknown op '" + op + "'");
  }
  std::cout << format_real(value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hsband: information-theoretic band selection for hyperspectral cubes"};
  app.require_subcommand(1);

  CommonIo io;
  std::string method = "nms";
  std::vector<std::string> methods;
  std::size_t k = 0;
  std::size_t k_max = 0;
  std::size_t step = 1;
  double beta = 1.0;
  double threshold = 0.5;
  double train_fraction = 0.5;
  std::vector<double> train_fractions;
  std::uint64_t seed = 42;
  std::size_t neighbors = 3;
  std::string out_path;
  std::string map_path;
  std::string ranking_path;
  std::string spec_path;
  std::string op;
  std::string bands_text;

  CLI::App* select = app.add_subcommand("select", "Rank bands with a selector");
  select->add_option("--cube", io.cube_path, "Cube header path or prefix")->required();
  select->add_option("--gt", io.gt_path, "Ground-truth label file")->required();
  select->add_option("--bins", io.bins, "Quantizer bins (default 64)");
  select->add_option("--method", method, "Selector name")->required();
  select->add_option("--k", k, "Number of bands to pick")->required();
  select->add_option("--beta", beta, "Redundancy weight for mifs/mifs_u/nmi");
  select->add_option("--threshold", threshold, "Redundancy cutoff for mibf");
  select->add_option("--out", out_path, "Ranking CSV destination")->required();

  CLI::App* classify = app.add_subcommand("classify", "Evaluate a ranking with KNN");
  classify->add_option("--cube", io.cube_path, "Cube header path or prefix")->required();
  classify->add_option("--gt", io.gt_path, "Ground-truth label file")->required();
  classify->add_option("--bins", io.bins, "Quantizer bins (default 64)");
  classify->add_option("--ranking", ranking_path, "Ranking CSV from select")->required();
  classify->add_option("--k", k, "Use only the first k ranked bands (0 = all)");
  classify->add_option("--train-frac", train_fraction, "Training fraction");
  classify->add_option("--seed", seed, "Split seed");
  classify->add_option("--neighbors", neighbors, "KNN neighbor count");
  classify->add_option("--out", out_path, "Metrics JSON destination")->required();
  classify->add_option("--map", map_path, "Optional class-map pixmap (P3)");

  CLI::App* sweep = app.add_subcommand("sweep", "Accuracy grid over methods and k");
  sweep->add_option("--cube", io.cube_path, "Cube header path or prefix")->required();
  sweep->add_option("--gt", io.gt_path, "Ground-truth label file")->required();
  sweep->add_option("--bins", io.bins, "Quantizer bins (default 64)");
  sweep->add_option("--methods", methods, "Selector names")->required()->delimiter(',');
  sweep->add_option("--k-max", k_max, "Largest prefix length")->required();
  sweep->add_option("--step", step, "Prefix length stride")->required();
  sweep->add_option("--train-frac", train_fractions, "Training fraction (repeatable)");
  sweep->add_option("--seed", seed, "Split seed");
  sweep->add_option("--beta", beta, "Redundancy weight for mifs/mifs_u/nmi");
  sweep->add_option("--threshold", threshold, "Redundancy cutoff for mibf");
  sweep->add_option("--neighbors", neighbors, "KNN neighbor count");
  sweep->add_option("--out", out_path, "Sweep CSV destination")->required();

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic labeled cube");
  synth->add_option("--spec", spec_path, "Scene spec JSON (defaults when omitted)");
  synth->add_option("--out", out_path, "Output path prefix")->required();

  CLI::App* info = app.add_subcommand("info", "Print one information measure");
  info->add_option("--cube", io.cube_path, "Cube header path or prefix")->required();
  info->add_option("--gt", io.gt_path, "Ground-truth label file")->required();
  info->add_option("--bins", io.bins, "Quantizer bins (default 64)");
  info->add_option("--op", op, "entropy|mi|jmi|ii|nms")->required();
  info->add_option("--bands", bands_text, "Comma-separated band indices")->required();

  try {
    app.parse(argc, argv);
    if (select->parsed())
      return cmd_select(io, method, k, beta, threshold, out_path);
    if (classify->parsed())
      return cmd_classify(io, ranking_path, k, train_fraction, seed, neighbors,
                          out_path, map_path);
    if (sweep->parsed())
      return cmd_sweep(io, methods, k_max, step, train_fractions, seed, beta,
                       threshold, neighbors, out_path);
    if (synth->parsed()) return cmd_synth(spec_path, out_path);
    if (info->parsed()) return cmd_info(io, op, bands_text);
    return 3;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
