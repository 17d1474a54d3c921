// Acceptance checks, one line per criterion.
//
//   spikefuse_acceptance [--criterion N] [--data-dir DIR] [--cli PATH]
//
// Exit status: 0 when every selected criterion passes, 1 on any failure,
// 77 when the only outcome is BLOCKED (real datasets absent).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"
#include "spikefuse/eval.hpp"
#include "spikefuse/ingest.hpp"
#include "spikefuse/pipeline.hpp"
#include "spikefuse/sweep.hpp"
#include "fixtures.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace spikefuse;

namespace {

enum class Status { pass, fail, blocked };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

struct Context {
  std::optional<fs::path> data_dir;
  std::string cli;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

// 1: spike count statistics over 2000 encodings at T = 1000, dt = 1.
Outcome poisson_statistics(const Context&) {
  Stopwatch clock;
  bool ok = true;
  std::string detail;
  for (double r : {0.1, 0.5, 0.9}) {
    const auto s = spike_count_distribution_check(r, EncodingConfig{1000, 1.0, 42}, 2000);
    const double rel = std::abs(s.mean - r * 1000.0) / (r * 1000.0);
    const double dispersion = s.variance / s.mean;
    const bool mean_ok = rel <= 0.01;
    const bool disp_ok = dispersion >= 0.9 && dispersion <= 1.1;
    ok = ok && mean_ok && disp_ok;
    detail += fmt::format("r={} mean={:.3f} ({}) var/mean={:.4f} ({}); ", r, s.mean, mean_ok ? "ok" : "off",
                          dispersion, disp_ok ? "ok" : "outside [0.9, 1.1]");
  }
  const double t = clock.seconds();
  detail += fmt::format("{:.2f}s", t);
  return verdict(ok && t < 10.0, detail);
}

// 2: output length over the full stride grid, 20 concepts, D_text = 300, T = 1000.
Outcome dimension_formula(const Context&) {
  Stopwatch clock;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  NormDataset norms;
  norms.modality_names = {"Auditory", "Gustatory", "Haptic", "Olfactory", "Visual"};
  EmbeddingDataset emb;
  emb.dim = 300;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> m(5);
    for (auto& x : m) x = u(rng);
    std::vector<double> t(300);
    for (auto& x : t) x = u(rng) - 2.5;
    norms.vectors.add({"c" + std::to_string(i), m, VectorKind::multisensory});
    emb.vectors.add({"c" + std::to_string(i), t, VectorKind::text});
  }
  const auto combo = prepare_combo("toy", norms, emb);
  const auto rasters = encode_vocabulary(combo, EncodingConfig{1000, 1.0, 42}, LifParams{});
  std::size_t checked = 0;
  std::size_t mismatched = 0;
  for (auto ss : kDefaultStrides) {
    const auto unit = fuse_vocabulary(rasters, CooperateConfig{ss, 1, CooperateOp::or_op});
    for (auto ts : kDefaultStrides) {
      const std::size_t expected = expected_output_dims(300, 5, 1000, ss, ts);
      const std::size_t blocks = (300 - 5 + ss - 1) / ss;
      const std::size_t windows = (5 * 1000 + ts - 1) / ts;
      bool ok = expected == blocks * windows;
      for (const auto& code : unit) ok = ok && reduce_blocks(code, 5 * 1000, ts).size() == expected;
      // direct fusion of one concept at this grid point
      ok = ok && fuse_bits(rasters.text[0], rasters.am[0], CooperateConfig{ss, ts, CooperateOp::or_op}).size() == expected;
      ++checked;
      if (!ok) ++mismatched;
    }
  }
  const double t = clock.seconds();
  return verdict(checked == 361 && mismatched == 0 && t < 120.0,
                 fmt::format("{} grid points, {} mismatches, {:.1f}s", checked, mismatched, t));
}

// 3: truth tables and the brute-force fusion oracle.
Outcome operator_truth_tables(const Context&) {
  Stopwatch clock;
  const auto a = testkit::to_raster({{1, 1, 0, 0}});
  const auto b = testkit::to_raster({{1, 0, 1, 0}});
  bool ok = spatial_cooperate(a, b, CooperateOp::and_op).flat().to_string() == "1000" &&
            spatial_cooperate(a, b, CooperateOp::or_op).flat().to_string() == "1110" &&
            spatial_cooperate(a, b, CooperateOp::nor).flat().to_string() == "0110";
  const bool tables = ok;
  std::mt19937_64 rng(3);
  const CooperateOp ops[] = {CooperateOp::and_op, CooperateOp::or_op, CooperateOp::nor};
  std::size_t agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d_ms = 1 + rng() % 5;
    const std::size_t d_text = d_ms + 1 + rng() % (20 - d_ms);
    const std::size_t t_steps = 1 + rng() % 16;
    const std::size_t ss = 1 + rng() % d_text;
    const std::size_t ts = 1 + rng() % (d_ms * t_steps);
    const CooperateOp op = ops[rng() % 3];
    const auto text = testkit::random_matrix(rng, d_text, t_steps, 0.5);
    const auto ms = testkit::random_matrix(rng, d_ms, t_steps, 0.5);
    const auto got = fuse_bits(testkit::to_raster(text), testkit::to_raster(ms), CooperateConfig{ss, ts, op});
    if (testkit::to_ints(got) == testkit::brute_force_fuse(text, ms, ss, ts, op)) ++agree;
  }
  const double t = clock.seconds();
  return verdict(tables && agree == 200 && t < 5.0,
                 fmt::format("truth tables {}, oracle agreement {}/200, {:.2f}s", tables ? "match" : "differ", agree, t));
}

// 4: rank correlation engine.
Outcome spearman_engine(const Context&) {
  std::vector<SimilarityPair> pairs;
  std::vector<double> ratings;
  std::vector<double> sims;
  for (const auto& row : testkit::closeness_example()) {
    pairs.push_back(row.pair);
    ratings.push_back(row.pair.rating);
    sims.push_back(row.similarity);
  }
  const double rho = spearman(rank_pairs(pairs, ratings), rank_pairs(pairs, sims));
  const double oracle = testkit::definitional_spearman(ratings, sims);
  const bool fixture_ok = std::abs(rho - oracle) <= 1e-12;

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::size_t invariant = 0;
  for (int f = 0; f < 100; ++f) {
    const std::size_t n = 3 + rng() % 100;
    std::vector<double> x(n);
    std::vector<double> y(n);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = y[i] * y[i] * y[i] + 7;
    }
    if (spearman(x, y) == spearman(x, z)) ++invariant;
  }
  return verdict(fixture_ok && invariant == 100,
                 fmt::format("rho={:.12f} oracle={:.12f} |diff|={:.1e}; monotone invariance {}/100", rho, oracle,
                             std::abs(rho - oracle), invariant));
}

struct RealData {
  std::map<std::string, NormDataset> norms;            // LC823, BBSR
  std::map<std::string, EmbeddingDataset> embeddings;  // w2v, GloVe
  std::vector<EvalDataset> evals;                      // SimLex999, MEN, MTurk771
};

/// Loads whichever of the named files exist; returns the missing ones.
std::vector<std::string> load_real(const fs::path& dir, RealData& d, const std::vector<std::string>& norms,
                                   const std::vector<std::string>& embeddings) {
  std::vector<std::string> missing;
  const std::map<std::string, std::string> norm_files{{"LC823", "lc823.csv"}, {"BBSR", "bbsr.csv"}};
  const std::map<std::string, std::string> emb_files{{"w2v", "word2vec.txt"}, {"GloVe", "glove.txt"}};
  const std::vector<std::tuple<std::string, std::string, EvalFormat>> eval_files{
      {"SimLex999", "simlex999.txt", EvalFormat::simlex},
      {"MEN", "men.txt", EvalFormat::men},
      {"MTurk771", "mturk771.csv", EvalFormat::mturk}};
  for (const auto& n : norms) {
    if (!fs::exists(dir / norm_files.at(n))) missing.push_back(norm_files.at(n));
  }
  for (const auto& e : embeddings) {
    if (!fs::exists(dir / emb_files.at(e))) missing.push_back(emb_files.at(e));
  }
  for (const auto& [name, file, format] : eval_files) {
    if (!fs::exists(dir / file)) missing.push_back(file);
  }
  if (!missing.empty()) return missing;
  std::set<std::string, std::less<>> wanted;
  for (const auto& n : norms) {
    d.norms[n] = load_norms(dir / norm_files.at(n), norm_format_for(dir / norm_files.at(n)));
    for (const auto& v : d.norms[n].vectors) wanted.insert(v.name);
  }
  for (const auto& e : embeddings) {
    d.embeddings[e] = load_embeddings(dir / emb_files.at(e), [&](std::string_view t) { return wanted.contains(t); });
  }
  for (const auto& [name, file, format] : eval_files) d.evals.push_back(load_eval_pairs(dir / file, format, name));
  return missing;
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

const std::vector<std::size_t> kReducedGrid{1, 5, 10, 50, 100};

// 5: diversity falls as strides grow, on LC823 + GloVe with 3 seeds.
Outcome diversity_trend(const Context& ctx) {
  if (!ctx.data_dir) return {Status::blocked, "SPIKEFUSE_DATA_DIR is not set"};
  RealData data;
  const auto missing = load_real(*ctx.data_dir, data, {"LC823"}, {"GloVe"});
  if (!missing.empty()) return {Status::blocked, "missing " + joined(missing) + " in " + ctx.data_dir->string()};
  Stopwatch clock;
  SweepPlan plan;
  plan.combos.push_back({"GloVe-LC823", "LC823", "GloVe", &data.norms["LC823"], &data.embeddings["GloVe"]});
  plan.evals = data.evals;
  plan.ss_values = kReducedGrid;
  plan.ts_values = kReducedGrid;
  plan.seeds = {1, 2, 3};
  plan.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto result = run_sweep(plan);
  std::map<std::pair<CooperateOp, std::pair<std::size_t, std::size_t>>, double> div;
  for (const auto& c : result.cells) div[{c.point.op, {c.point.ss, c.point.ts}}] = c.diversity;
  bool corners = true;
  std::string detail;
  for (auto op : kAllOps) {
    const double lo = div[{op, {1, 1}}];
    const double hi = div[{op, {100, 100}}];
    corners = corners && lo >= hi;
    detail += fmt::format("{}: (1,1)={:.4f} (100,100)={:.4f}; ", to_string(op), lo, hi);
  }
  const double frac = non_increasing_fraction(diversity_surface(result));
  detail += fmt::format("non-increasing steps {:.3f}; {:.0f}s", frac, clock.seconds());
  return verdict(corners && frac >= 0.9, detail);
}

// 6: best COO beats the baselines; text baselines near the published values.
Outcome closeness_reproduction(const Context& ctx) {
  if (!ctx.data_dir) return {Status::blocked, "SPIKEFUSE_DATA_DIR is not set"};
  RealData data;
  const auto missing = load_real(*ctx.data_dir, data, {"LC823", "BBSR"}, {"w2v", "GloVe"});
  if (!missing.empty()) return {Status::blocked, "missing " + joined(missing) + " in " + ctx.data_dir->string()};
  const std::map<std::string, std::vector<double>> published_text{
      {"w2v-LC823", {0.203760684, 0.648088252, 0.442105263}},
      {"w2v-BBSR", {0.214303752, 0.576522874, 0.621428571}},
      {"GloVe-LC823", {0.46017094, 0.731785457, 0.357894737}},
      {"GloVe-BBSR", {0.329274892, 0.74939797, 0.721428571}}};
  Stopwatch clock;
  SweepPlan plan;
  for (const std::string e : {"w2v", "GloVe"}) {
    for (const std::string n : {"LC823", "BBSR"}) {
      plan.combos.push_back({e + "-" + n, n, e, &data.norms[n], &data.embeddings[e]});
    }
  }
  plan.evals = data.evals;
  plan.ss_values = kReducedGrid;
  plan.ts_values = kReducedGrid;
  plan.seeds = {1, 2, 3};
  plan.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto result = run_sweep(plan);
  const double minutes = clock.seconds() / 60.0;

  bool ok = minutes <= 20.0;
  std::string detail;
  for (const auto& b : result.baselines) {
    std::size_t wins = 0;
    bool text_close = true;
    for (std::size_t k = 0; k < data.evals.size(); ++k) {
      const auto& dataset = data.evals[k].name;
      const auto& base = b.per_dataset.at(dataset);
      double coo = -2.0;
      for (const auto& best : result.best) {
        if (best.combo == b.combo && best.dataset == dataset) coo = best.spearman;
      }
      if (coo > base.text.spearman && coo > base.multisensory.spearman && coo > base.concatenate.spearman) ++wins;
      const double diff = std::abs(base.text.spearman - published_text.at(b.combo)[k]);
      text_close = text_close && diff <= 0.08;
      detail += fmt::format("{} {}: COO={:.3f} T={:.3f} M={:.3f} C={:.3f}; ", b.combo, dataset, coo, base.text.spearman,
                            base.multisensory.spearman, base.concatenate.spearman);
    }
    ok = ok && wins >= 2 && text_close;
  }
  detail += fmt::format("{:.1f} min", minutes);
  return verdict(ok, detail);
}

// 7: case-study ranks with the human ratings as the model.
Outcome case_study(const Context&) {
  const auto subset = testkit::case_study_subset();
  const CaseStudyMethod human{"Human", [](const SimilarityPair& p) { return std::optional<double>(p.rating); }};
  const auto table = case_study_table(subset, {human});
  std::size_t matched = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].human_rank == i + 1 && table.rows[i].method_ranks.at(0) == i + 1) ++matched;
  }
  const bool first = table.rows.at(0).pair.a == "pupil" && table.rows.at(0).pair.rating == 4.52 &&
                     table.rows.at(0).human_rank == 1;
  return verdict(matched == 20 && first,
                 fmt::format("{}/20 ranks match, (pupil, student) 4.52 -> {}", matched, table.rows.at(0).human_rank));
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = testkit::read_text(e.path());
  }
  return files;
}

// 8: every command rerun with the same manifest writes identical bytes.
Outcome determinism(const Context& ctx) {
  if (ctx.cli.empty()) return {Status::fail, "no CLI binary given (--cli)"};
  testkit::TempDir tmp;
  const std::string manifest = (testkit::data_dir() / "toy_manifest.toml").string();
  const std::string common =
      fmt::format("--config '{}' --data-dir '{}'", manifest, testkit::data_dir().string());
  const std::vector<std::pair<std::string, std::string>> commands{
      {"encode", ""}, {"fuse", "--ss 2 --ts 5 --op NOR"}, {"eval", "--ss 2 --ts 5 --op NOR"}, {"sweep", "--seed 1 2"}};
  std::string detail;
  bool ok = true;
  for (const auto& [cmd, extra] : commands) {
    std::vector<std::map<std::string, std::string>> runs;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = tmp / fmt::format("{}_{}", cmd, k);
      const std::string line =
          fmt::format("'{}' {} {} {} -o '{}' 2>/dev/null", ctx.cli, cmd, common, extra, out.string());
      if (std::system(line.c_str()) != 0) {
        ok = false;
        detail += cmd + " failed; ";
        break;
      }
      runs.push_back(snapshot(out));
    }
    if (runs.size() == 2) {
      const bool same = runs[0] == runs[1];
      ok = ok && same;
      detail += fmt::format("{}: {} files {}; ", cmd, runs[0].size(), same ? "identical" : "DIFFER");
    }
  }
  if (detail.size() >= 2) detail.resize(detail.size() - 2);
  return verdict(ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikefuse acceptance checks"};
  int only = 0;
  std::string data_dir;
  std::string cli = SPIKEFUSE_CLI;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--data-dir", data_dir, "directory with the real datasets (default $SPIKEFUSE_DATA_DIR)");
  app.add_option("--cli", cli, "spikefuse binary used by the determinism check");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(spdlog::level::err);
  Context ctx;
  ctx.cli = cli;
  if (!data_dir.empty()) {
    ctx.data_dir = data_dir;
  } else if (const char* env = std::getenv("SPIKEFUSE_DATA_DIR"); env != nullptr && *env != '\0') {
    ctx.data_dir = env;
  }

  const std::vector<std::function<Outcome(const Context&)>> criteria{
      poisson_statistics, dimension_formula, operator_truth_tables, spearman_engine,
      diversity_trend,    closeness_reproduction, case_study, determinism};

  bool failed = false;
  bool passed = false;
  bool blocked = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i](ctx);
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("error: ") + e.what()};
    }
    const char* label = o.status == Status::pass ? "PASS" : (o.status == Status::fail ? "FAIL" : "BLOCKED");
    std::cout << "criterion " << i + 1 << ": " << label << "  " << o.detail << std::endl;
    failed = failed || o.status == Status::fail;
    passed = passed || o.status == Status::pass;
    blocked = blocked || o.status == Status::blocked;
  }
  if (failed) return 1;
  if (blocked && !passed) return 77;
  return 0;
}
