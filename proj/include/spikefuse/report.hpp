#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spikefuse/eval.hpp"
#include "spikefuse/sweep.hpp"

namespace spikefuse {

/// Row order of the closeness table within each combination.
inline const std::vector<std::string> kMethodOrder{"Text", "Multisensory", "Concatenate", "COO"};

struct ReportEntry {
  std::string combo;
  ClosenessResult result;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

/// Closeness table: one row per (combination, method), one column per eval
/// dataset.
struct EvalReport {
  nlohmann::json manifest = nlohmann::json::object();
  std::vector<std::string> datasets;  // column order
  std::vector<std::string> combos;    // row-group order
  std::vector<ReportEntry> entries;

  void add(std::string combo, ClosenessResult result);
  /// Entry for (combo, method, dataset), or nullptr.
  const ClosenessResult* find(std::string_view combo, std::string_view method, std::string_view dataset) const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Reals are rounded to 9 decimals, so serialize(parse(serialize(r))) is stable.
nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

/// Aligned-column text with every real printed to 9 decimals.
void write_report_text(std::ostream& out, const EvalReport& report);

/// Baselines plus the best diversity-filtered COO entry of a sweep.
EvalReport report_from_sweep(const SweepResult& result);

void write_diversity_tsv(std::ostream& out, const SweepResult& result);
void write_best_tsv(std::ostream& out, const SweepResult& result);
void write_best_ratio_tsv(std::ostream& out, const BestRatioReport& report);

/// Formats a real with exactly 9 decimals ("-0.000000000" prints as "0.000000000").
std::string fixed9(double x);

}  // namespace spikefuse
