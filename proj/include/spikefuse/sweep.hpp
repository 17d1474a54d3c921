#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spikefuse/am_network.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"
#include "spikefuse/eval.hpp"
#include "spikefuse/ingest.hpp"
#include "spikefuse/pipeline.hpp"

namespace spikefuse {

/// Stride values traversed for both ss and ts by default.
inline const std::vector<std::size_t> kDefaultStrides{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};

/// Codes whose diversity does not exceed this are excluded from best-config selection.
inline constexpr double kMinDiversity = 0.05;

struct GridPoint {
  std::size_t ss = 1;
  std::size_t ts = 1;
  CooperateOp op = CooperateOp::or_op;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  /// Orders by ss, ts, then op name (AND < NOR < OR).
  friend std::strong_ordering operator<=>(const GridPoint& a, const GridPoint& b);
};

std::string to_label(const GridPoint& p);

struct ComboInput {
  std::string name;
  std::string norms_id;
  std::string embeddings_id;
  const NormDataset* norms = nullptr;
  const EmbeddingDataset* embeddings = nullptr;
};

struct SweepPlan {
  std::vector<ComboInput> combos;
  std::vector<EvalDataset> evals;
  std::vector<std::size_t> ss_values = kDefaultStrides;
  std::vector<std::size_t> ts_values = kDefaultStrides;
  std::vector<CooperateOp> ops{kAllOps.begin(), kAllOps.end()};
  std::vector<std::uint64_t> seeds{42};
  EncodingConfig encoding;  // rng_seed is replaced by each entry of `seeds`
  LifParams lif;
  bool cache_rasters = true;
  std::size_t workers = 1;

  void validate() const;
  /// Everything that determines the results, for the results manifest.
  nlohmann::json describe() const;
};

struct DatasetScore {
  std::vector<double> per_seed;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation over seeds, 0 for one seed
  std::size_t n_pairs = 0;

  friend bool operator==(const DatasetScore&, const DatasetScore&) = default;
};

/// One (combo, ss, ts, op) grid cell aggregated over seeds.
struct SweepCell {
  std::string combo;
  GridPoint point;
  std::size_t output_dims = 0;
  std::vector<double> diversity_per_seed;
  double diversity = 0.0;  // mean over seeds
  std::map<std::string, DatasetScore> scores;  // by eval dataset name

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct ComboBaselines {
  std::string combo;
  std::map<std::string, BaselineResults> per_dataset;
};

struct BestEntry {
  std::string combo;
  std::string dataset;
  GridPoint point;
  std::size_t output_dims = 0;
  double spearman = 0.0;
  double spearman_std = 0.0;
  double diversity = 0.0;

  friend bool operator==(const BestEntry&, const BestEntry&) = default;
};

struct SweepResult {
  nlohmann::json plan;
  std::vector<ComboBaselines> baselines;
  std::vector<SweepCell> cells;  // sorted by combo, then grid point
  std::vector<BestEntry> best;
  std::vector<std::string> skipped;
};

struct SweepHooks {
  /// Called once per finished cell, in computation order.
  std::function<void(const SweepCell&)> on_cell;
  /// Called with every code set (vocabulary order) the sweep evaluates.
  std::function<void(const PreparedCombo&, const GridPoint&, std::uint64_t seed, const std::vector<BitVector>&)>
      on_codes;
};

/// Runs every (combo, ss, ts, op) grid point over every seed. Cells present in
/// `completed` are reused instead of recomputed (resume); results are
/// identical either way. Grid points with ts > d_ms * t_steps are skipped.
SweepResult run_sweep(const SweepPlan& plan, const std::vector<SweepCell>& completed = {},
                      const SweepHooks& hooks = {});

/// Per (combo, dataset): highest mean rho among cells with diversity above
/// `min_diversity`. Ties go to the smaller output, then larger ss, larger ts,
/// then op name order.
std::vector<BestEntry> select_best(const std::vector<SweepCell>& cells, double min_diversity = kMinDiversity);

struct DiversityPoint {
  std::string combo;
  GridPoint point;
  double diversity = 0.0;
};

std::vector<DiversityPoint> diversity_surface(const SweepResult& result);

/// Fraction of adjacent grid steps (along ss at fixed ts/op, and along ts at
/// fixed ss/op) where diversity does not increase.
double non_increasing_fraction(const std::vector<DiversityPoint>& surface);

struct BestRatioCell {
  std::string dataset;
  std::string combo;
  std::map<CooperateOp, double> ratio;  // fraction of (ss, ts) points where the op has the max rho
  double closeness_difference = 0.0;    // |rho_text - rho_multisensory|
  std::size_t grid_points = 0;
};

struct BestRatioCorrelation {
  std::string dataset;  // "*" pools every dataset
  CooperateOp op = CooperateOp::or_op;
  std::optional<double> correlation;  // nullopt when undefined
  std::size_t n_cells = 0;
};

struct BestRatioReport {
  std::vector<BestRatioCell> cells;
  std::vector<BestRatioCorrelation> correlations;
};

/// Requires at least two (dataset, combo) cells.
BestRatioReport best_ratio_analysis(const SweepResult& result);

nlohmann::json to_json(const ClosenessResult& r);
ClosenessResult closeness_from_json(const nlohmann::json& j);
/// `rounded` rounds every real to 9 decimals (report files); otherwise values
/// keep full precision (progress log).
nlohmann::json to_json(const SweepCell& cell, bool rounded);
SweepCell cell_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepResult& result);
SweepResult sweep_result_from_json(const nlohmann::json& j);

}  // namespace spikefuse
