// Acceptance suite: one self-contained check per release criterion, each
// printing exactly one PASS/FAIL line. The final criterion is informational
// (it needs an external reference scene) and never gates the exit code.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsband/classify.hpp"
#include "hsband/cube.hpp"
#include "hsband/infotheory.hpp"
#include "hsband/selectors.hpp"
#include "hsband/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace hsband;
using namespace hsband::test;

namespace {

constexpr double kTol = 1e-12;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool close(double a, double b, double tol = kTol) {
  return std::abs(a - b) <= tol;
}

// --------------------------------------------------------------------------
// 1. Plug-in estimators equal definition-formula closed forms on enumerated
//    distributions (at least 25, each at most 4x4x4 cells), in under 5 s.
// --------------------------------------------------------------------------
bool criterion_estimator_oracle(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<CountTable3> tables;

  CountTable3 xor_t = CountTable3::zeros(2, 2, 2);
  xor_t.at(0, 0, 0) = xor_t.at(0, 1, 1) = xor_t.at(1, 0, 1) =
      xor_t.at(1, 1, 0) = 1;
  tables.push_back(xor_t);

  CountTable3 and_t = CountTable3::zeros(2, 2, 2);
  and_t.at(0, 0, 0) = and_t.at(0, 1, 0) = and_t.at(1, 0, 0) =
      and_t.at(1, 1, 1) = 1;
  tables.push_back(and_t);

  CountTable3 dup = CountTable3::zeros(2, 2, 2);  // y copies x, z noisy x
  dup.at(0, 0, 0) = 6;
  dup.at(0, 0, 1) = 2;
  dup.at(1, 1, 1) = 6;
  dup.at(1, 1, 0) = 2;
  tables.push_back(dup);

  CountTable3 indep = CountTable3::zeros(2, 3, 2);  // exact product weights
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        indep.at(i, j, k) = (i + 1) * (j + 1) * (k + 1);
  tables.push_back(indep);

  std::mt19937_64 rng(2024);
  while (tables.size() < 32) {
    const std::size_t nx = 2 + uniform_below(rng, 3);
    const std::size_t ny = 2 + uniform_below(rng, 3);
    const std::size_t nz = 2 + uniform_below(rng, 3);
    tables.push_back(random_table(rng, nx, ny, nz, 9));
  }

  for (std::size_t idx = 0; idx < tables.size(); ++idx) {
    const CountTable3& t = tables[idx];
    const Materialized m = materialize(t);
    const struct {
      const char* name;
      double got;
      double want;
    } rows[] = {
        {"entropy", entropy(m.x), oracle_entropy_x(t)},
        {"joint entropy", joint_entropy(m.x, m.y), oracle_entropy_xy(t)},
        {"triple entropy", joint_entropy(m.x, m.y, m.z), oracle_entropy_xyz(t)},
        {"mutual information", mutual_info(m.x, m.y), oracle_mi_xy(t)},
        {"conditional MI", cond_mutual_info(m.x, m.y, m.z),
         oracle_cmi_xy_given_z(t)},
        {"joint MI", joint_mutual_info(m.x, m.y, m.z), oracle_jmi_xy_z(t)},
        {"interaction", interaction_info(m.x, m.y, m.z),
         oracle_interaction_xy_z(t)},
    };
    for (const auto& row : rows) {
      if (!close(row.got, row.want)) {
        std::ostringstream msg;
        msg << "distribution " << idx << ": " << row.name << " estimator "
            << row.got << " vs closed form " << row.want;
        detail = msg.str();
        return false;
      }
    }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 5.0) {
    detail = "took " + std::to_string(elapsed) + " s (budget 5 s)";
    return false;
  }
  std::ostringstream msg;
  msg << tables.size() << " distributions, 7 measures each, "
      << static_cast<int>(elapsed * 1000) << " ms";
  detail = msg.str();
  return true;
}

// --------------------------------------------------------------------------
// 2. Sign conventions: an exclusive-or pair scores exactly +1 bit of
//    interaction, a duplicated relevant band scores exactly -1 normalized
//    synergy, and a vanishing denominator yields exactly 0.
// --------------------------------------------------------------------------
bool criterion_sign_conventions(std::string& detail) {
  CountTable3 xor_t = CountTable3::zeros(2, 2, 2);
  xor_t.at(0, 0, 0) = xor_t.at(0, 1, 1) = xor_t.at(1, 0, 1) =
      xor_t.at(1, 1, 0) = 1;
  const Materialized m = materialize(xor_t);
  if (interaction_info(m.x, m.y, m.z) != 1.0) {
    detail = "exclusive-or interaction is not exactly +1 bit";
    return false;
  }
  if (normalized_synergy(m.x, m.y, m.z) != 0.0) {
    detail = "zero-denominator synergy did not return exactly 0";
    return false;
  }

  DiscreteVariable x;
  x.cardinality = 2;
  x.symbols = {0, 0, 1, 1, 0, 1, 0, 0};
  DiscreteVariable c;
  c.cardinality = 2;
  c.symbols = {0, 0, 1, 1, 1, 1, 0, 0};
  if (normalized_synergy(x, x, c) != -1.0) {
    detail = "duplicated relevant band is not exactly -1";
    return false;
  }
  detail = "interaction +1, duplicate -1, guarded zero all exact";
  return true;
}

// --------------------------------------------------------------------------
// 3. Algebraic identities on 200 randomized triples, within 1e-12 bits.
// --------------------------------------------------------------------------
bool criterion_identities(std::string& detail) {
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 30 + uniform_below(rng, 220);
    const DiscreteVariable x = random_variable(rng, n, 2 + uniform_below(rng, 4));
    const DiscreteVariable y = random_variable(rng, n, 2 + uniform_below(rng, 4));
    const DiscreteVariable z = random_variable(rng, n, 2 + uniform_below(rng, 3));

    if (!close(mutual_info(x, y),
               entropy(x) + entropy(y) - joint_entropy(x, y))) {
      detail = "entropy-combination identity failed";
      return false;
    }
    if (!close(joint_mutual_info(x, y, z),
               mutual_info(y, z) + cond_mutual_info(x, z, y))) {
      detail = "chain rule failed";
      return false;
    }
    const double ii = interaction_info(x, y, z);
    for (const double other :
         {interaction_info(y, x, z), interaction_info(z, y, x),
          interaction_info(x, z, y), interaction_info(z, x, y),
          interaction_info(y, z, x)}) {
      if (!close(ii, other)) {
        detail = "interaction information is not permutation-symmetric";
        return false;
      }
    }
    if (!close(mutual_info(x, y), mutual_info(y, x))) {
      detail = "mutual information is not symmetric";
      return false;
    }
    if (mutual_info(x, y) < -kTol || cond_mutual_info(x, y, z) < -kTol) {
      detail = "a mutual information went negative";
      return false;
    }
  }
  detail = "200 randomized triples, all identities within 1e-12";
  return true;
}

// --------------------------------------------------------------------------
// 4. Every selector reproduces an independent straight-line re-scoring of its
//    objective: exact band sequences over 100 random tables, in under 30 s.
// --------------------------------------------------------------------------
bool criterion_greedy_vs_brute_force(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  constexpr Method kMethods[] = {Method::nms,  Method::mifs, Method::mifs_u,
                                 Method::mrmr, Method::jmi,  Method::disr,
                                 Method::mibf, Method::nmi};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t bands = 4 + uniform_below(rng, 9);
    const std::size_t samples = 50 + uniform_below(rng, 200);
    const std::uint32_t card =
        2 + static_cast<std::uint32_t>(uniform_below(rng, 3));
    const std::uint16_t classes =
        static_cast<std::uint16_t>(2 + uniform_below(rng, 2));
    const BandTable table = random_band_table(rng, bands, samples, card, classes);

    SelectorConfig cfg;
    cfg.k = 1 + uniform_below(rng, std::min<std::size_t>(4, bands));
    cfg.beta = 0.25 * static_cast<double>(uniform_below(rng, 8));
    cfg.threshold = 0.05 * static_cast<double>(uniform_below(rng, 20));
    for (const Method method : kMethods) {
      const SelectionResult got = run_selector(method, table, cfg);
      const std::vector<std::size_t> want = rescore(method, table, cfg);
      if (got.ranked_bands != want) {
        std::ostringstream msg;
        msg << method_name(method) << " diverged from its re-scoring on seed "
            << seed;
        detail = msg.str();
        return false;
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) {
    detail = "took " + std::to_string(elapsed) + " s (budget 30 s)";
    return false;
  }
  std::ostringstream msg;
  msg << "100 seeds x 8 selectors, exact sequences, "
      << static_cast<int>(elapsed * 1000) << " ms";
  detail = msg.str();
  return true;
}

// --------------------------------------------------------------------------
// 5. Planted recovery on the default zero-noise scene: the synergy-aware
//    selector finds the relevant band plus both pair bands in its first three
//    picks for 20/20 scene seeds; the classic penalty baseline misses for at
//    least one; nearest-neighbor accuracy on the three recovered bands is a
//    perfect 1.0 at a half train split.
// --------------------------------------------------------------------------
bool criterion_planted_recovery(std::string& detail) {
  std::size_t nms_hits = 0;
  std::size_t mifs_misses = 0;
  std::size_t perfect = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    const Scene scene = generate_scene(spec);
    const BandTable table =
        BandTable::build(scene.cube, scene.gt, QuantizerConfig{});

    std::set<std::size_t> planted;
    planted.insert(scene.truth.bands_of(BandRole::Kind::relevant)[0]);
    for (const std::size_t b : scene.truth.bands_of(BandRole::Kind::synergy))
      planted.insert(b);

    SelectorConfig cfg;
    cfg.k = 3;
    const SelectionResult nms = select_nms(table, cfg);
    const std::set<std::size_t> got(nms.ranked_bands.begin(),
                                    nms.ranked_bands.end());
    if (got == planted) ++nms_hits;

    cfg.beta = 1.0;
    const SelectionResult mifs = run_selector(Method::mifs, table, cfg);
    const std::set<std::size_t> mifs_got(mifs.ranked_bands.begin(),
                                         mifs.ranked_bands.end());
    if (mifs_got != planted) ++mifs_misses;

    const SplitPlan plan = stratified_split(scene.gt, 0.5, seed);
    const std::vector<std::size_t> order = labeled_pixel_order(scene.gt);
    const FeatureMatrix train =
        gather_features(scene.cube, scene.gt, nms.ranked_bands, plan.train_indices);
    const FeatureMatrix test =
        gather_features(scene.cube, scene.gt, nms.ranked_bands, plan.test_indices);
    std::vector<std::uint16_t> train_labels, truth;
    for (const std::size_t p : plan.train_indices)
      train_labels.push_back(scene.gt.labels[order[p]]);
    for (const std::size_t p : plan.test_indices)
      truth.push_back(scene.gt.labels[order[p]]);
    const auto predicted = knn_classify(train, train_labels, test, 3);
    const auto [confusion, metrics] =
        confusion_and_metrics(truth, predicted, scene.gt.class_count);
    if (metrics.oa == 1.0) ++perfect;
  }

  std::ostringstream msg;
  msg << "synergy selector recovered the planted trio " << nms_hits
      << "/20, penalty baseline missed " << mifs_misses
      << "/20, perfect accuracy " << perfect << "/20";
  detail = msg.str();
  return nms_hits == 20 && mifs_misses >= 1 && perfect == 20;
}

// --------------------------------------------------------------------------
// 6. Agreement-metric fixtures.
// --------------------------------------------------------------------------
bool criterion_metric_fixtures(std::string& detail) {
  const auto expand = [](std::vector<std::vector<std::uint64_t>> cells) {
    std::vector<std::uint16_t> truth, predicted;
    for (std::size_t t = 0; t < cells.size(); ++t)
      for (std::size_t p = 0; p < cells[t].size(); ++p)
        for (std::uint64_t i = 0; i < cells[t][p]; ++i) {
          truth.push_back(static_cast<std::uint16_t>(t + 1));
          predicted.push_back(static_cast<std::uint16_t>(p + 1));
        }
    return confusion_and_metrics(truth, predicted, cells.size());
  };

  const auto [c1, mixed] = expand({{40, 10}, {20, 30}});
  if (!close(mixed.oa, 0.70, 1e-9) || !close(mixed.aa, 0.70, 1e-9) ||
      !close(mixed.kappa, 0.40, 1e-9)) {
    std::ostringstream msg;
    msg << "mixed fixture gave oa " << mixed.oa << " aa " << mixed.aa
        << " kappa " << mixed.kappa;
    detail = msg.str();
    return false;
  }
  const auto [c2, ideal] = expand({{25, 0}, {0, 75}});
  if (ideal.kappa != 1.0) {
    detail = "perfect agreement kappa is not exactly 1";
    return false;
  }
  const auto [c3, chance] = expand({{25, 25}, {25, 25}});
  if (chance.kappa != 0.0) {
    detail = "chance-level kappa is not exactly 0";
    return false;
  }
  detail = "mixed fixture within 1e-9; perfect and chance kappa exact";
  return true;
}

// --------------------------------------------------------------------------
// 7. Command-line determinism: reruns are byte-identical and shorter
//    selections are prefixes of longer ones for every method.
// --------------------------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const TempDir& dir, const std::string& args) {
  const std::string cmd = std::string(HSBAND_CLI_PATH) + " " + args + " > " +
                          dir.file("_stdout") + " 2> " + dir.file("_stderr");
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool criterion_cli_determinism(std::string& detail) {
  TempDir dir("acceptance");
  const std::string cube = dir.file("scene");
  const std::string io = " --cube " + cube + " --gt " + cube + ".gt";
  if (run_cli(dir, "synth --out " + cube) != 0) {
    detail = "scene synthesis failed";
    return false;
  }

  constexpr const char* kNames[] = {"nms",  "mifs", "mifs_u", "mrmr",
                                    "jmi",  "disr", "mibf",   "nmi"};
  for (const std::string method : kNames) {
    const std::string a = dir.file(method + "_a.csv");
    const std::string b = dir.file(method + "_b.csv");
    const std::string small = dir.file(method + "_small.csv");
    if (run_cli(dir, "select" + io + " --method " + method + " --k 4 --out " + a) ||
        run_cli(dir, "select" + io + " --method " + method + " --k 4 --out " + b) ||
        run_cli(dir, "select" + io + " --method " + method + " --k 2 --out " +
                         small)) {
      detail = method + " selection run failed";
      return false;
    }
    if (slurp(a) != slurp(b)) {
      detail = method + " reruns are not byte-identical";
      return false;
    }
    if (slurp(a).rfind(slurp(small), 0) != 0) {
      detail = method + " k=2 ranking is not a prefix of k=4";
      return false;
    }
  }

  const std::string ranking = dir.file("nms_a.csv");
  const std::string m1 = dir.file("m1.json");
  const std::string m2 = dir.file("m2.json");
  if (run_cli(dir, "classify" + io + " --ranking " + ranking + " --k 3 --out " + m1) ||
      run_cli(dir, "classify" + io + " --ranking " + ranking + " --k 3 --out " + m2)) {
    detail = "classify run failed";
    return false;
  }
  if (slurp(m1) != slurp(m2) || slurp(m1).empty()) {
    detail = "classify reruns are not byte-identical";
    return false;
  }

  const std::string s1 = dir.file("s1.csv");
  const std::string s2 = dir.file("s2.csv");
  if (run_cli(dir, "sweep" + io + " --methods nms,jmi --k-max 4 --step 2 --out " + s1) ||
      run_cli(dir, "sweep" + io + " --methods nms,jmi --k-max 4 --step 2 --out " + s2)) {
    detail = "sweep run failed";
    return false;
  }
  if (slurp(s1) != slurp(s2) || slurp(s1).empty()) {
    detail = "sweep reruns are not byte-identical";
    return false;
  }
  detail = "8 selectors byte-stable with prefix-consistent rankings; "
           "classify and sweep byte-stable";
  return true;
}

// --------------------------------------------------------------------------
// 8. Informational reference-scene comparison. Needs a real labeled cube
//    converted to this toolkit's container format; headline numbers from the
//    literature used KNN at 40 bands with an unstated split, so the check
//    reports distances to that anchor without ever gating.
// --------------------------------------------------------------------------
bool criterion_reference_scene(std::string& detail) {
  const char* prefix = std::getenv("HSBAND_REFERENCE_SCENE");
  if (prefix == nullptr || std::string(prefix).empty()) {
    detail = "skipped: set HSBAND_REFERENCE_SCENE to a cube/gt path prefix "
             "to compare selector accuracy against published anchors "
             "(informational, never gates)";
    return true;
  }
  try {
    const HyperCube cube = load_cube(prefix);
    const GroundTruthMap gt =
        load_ground_truth(std::string(prefix) + ".gt", cube.rows, cube.cols);
    const BandTable table = BandTable::build(cube, gt, QuantizerConfig{});
    SelectorConfig cfg;
    cfg.k = std::min<std::size_t>(40, table.band_count());
    const SelectionResult nms = select_nms(table, cfg);
    std::ostringstream msg;
    msg << "40-band selection on " << cube.bands << "-band scene; accuracy:";
    const std::vector<std::size_t> order = labeled_pixel_order(gt);
    for (const double fraction : {0.1, 0.25, 0.5}) {
      const SplitPlan plan = stratified_split(gt, fraction, 42);
      const FeatureMatrix train =
          gather_features(cube, gt, nms.ranked_bands, plan.train_indices);
      const FeatureMatrix test =
          gather_features(cube, gt, nms.ranked_bands, plan.test_indices);
      std::vector<std::uint16_t> train_labels, truth;
      for (const std::size_t p : plan.train_indices)
        train_labels.push_back(gt.labels[order[p]]);
      for (const std::size_t p : plan.test_indices)
        truth.push_back(gt.labels[order[p]]);
      const auto predicted = knn_classify(train, train_labels, test, 3);
      const auto [confusion, metrics] =
          confusion_and_metrics(truth, predicted, gt.class_count);
      msg << " frac " << fraction << " -> oa " << metrics.oa
          << (std::abs(metrics.oa - 0.8629) <= 0.05 ? " (within 5 pts of anchor)"
                                                    : " (outside 5 pts of anchor)");
    }
    detail = msg.str();
    return true;  // informational: report, never gate
  } catch (const std::exception& e) {
    detail = std::string("skipped: reference scene unusable (") + e.what() +
             "); informational, never gates";
    return true;
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* title;
    std::function<bool(std::string&)> check;
  };
  const Entry entries[] = {
      {"estimators match enumerated closed forms", criterion_estimator_oracle},
      {"synergy sign conventions are exact", criterion_sign_conventions},
      {"algebraic identities hold on random variables", criterion_identities},
      {"selectors match straight-line re-scoring", criterion_greedy_vs_brute_force},
      {"planted structure is recovered on the default scene",
       criterion_planted_recovery},
      {"agreement metrics reproduce their fixtures", criterion_metric_fixtures},
      {"command-line runs are deterministic and prefix-stable",
       criterion_cli_determinism},
      {"reference-scene comparison (informational)", criterion_reference_scene},
  };

  int failures = 0;
  int index = 0;
  for (const Entry& entry : entries) {
    ++index;
    std::string detail;
    bool pass = false;
    try {
      pass = entry.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    if (!pass) ++failures;
    std::printf("%s  criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", index,
                entry.title, detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
