#include "spikefuse/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spikefuse/config.hpp"
#include "spikefuse/error.hpp"

namespace spikefuse {

using nlohmann::json;

std::string fixed9(double x) {
  std::string s = fmt::format("{:.9f}", x);
  if (s == "-0.000000000") s.erase(0, 1);
  return s;
}

void EvalReport::add(std::string combo, ClosenessResult result) {
  if (std::find(combos.begin(), combos.end(), combo) == combos.end()) combos.push_back(combo);
  if (std::find(datasets.begin(), datasets.end(), result.dataset) == datasets.end()) datasets.push_back(result.dataset);
  entries.push_back({std::move(combo), std::move(result)});
}

const ClosenessResult* EvalReport::find(std::string_view combo, std::string_view method,
                                        std::string_view dataset) const {
  for (const auto& e : entries) {
    if (e.combo == combo && e.result.method == method && e.result.dataset == dataset) return &e.result;
  }
  return nullptr;
}

json to_json(const EvalReport& report) {
  json j;
  j["manifest"] = report.manifest;
  j["datasets"] = report.datasets;
  j["combos"] = report.combos;
  j["results"] = json::array();
  for (const auto& e : report.entries) {
    json r = to_json(e.result);
    r["combo"] = e.combo;
    j["results"].push_back(std::move(r));
  }
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  try {
    EvalReport report;
    report.manifest = j.value("manifest", json::object());
    report.datasets = j.at("datasets").get<std::vector<std::string>>();
    report.combos = j.at("combos").get<std::vector<std::string>>();
    for (const auto& r : j.at("results")) {
      report.entries.push_back({r.at("combo").get<std::string>(), closeness_from_json(r)});
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

void write_report_text(std::ostream& out, const EvalReport& report) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"Combination", "Type"});
  for (const auto& d : report.datasets) table.front().push_back(d);
  for (const auto& combo : report.combos) {
    bool first = true;
    std::vector<std::string> methods = kMethodOrder;
    for (const auto& e : report.entries) {
      if (e.combo == combo && std::find(methods.begin(), methods.end(), e.result.method) == methods.end()) {
        methods.push_back(e.result.method);
      }
    }
    for (const auto& method : methods) {
      std::vector<std::string> row{first ? combo : "", method};
      bool any = false;
      for (const auto& d : report.datasets) {
        const auto* r = report.find(combo, method, d);
        any = any || r != nullptr;
        row.push_back(r != nullptr ? fixed9(r->spearman) : "-");
      }
      if (!any) continue;
      table.push_back(std::move(row));
      first = false;
    }
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += c < 2 ? fmt::format("{:<{}}", row[c], width[c]) : fmt::format("{:>{}}", row[c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }

  out << "\npairs used (dropped)\n";
  for (const auto& combo : report.combos) {
    for (const auto& d : report.datasets) {
      const auto* r = report.find(combo, "Text", d);
      if (r == nullptr) r = report.find(combo, "COO", d);
      if (r == nullptr) continue;
      out << fmt::format("  {} {}: {} ({})\n", combo, d, r->n_pairs, r->dropped_pairs);
    }
  }
  bool header = false;
  for (const auto& e : report.entries) {
    if (e.result.config.empty() && !e.result.diversity) continue;
    if (!header) {
      out << "\nCOO configurations\n";
      header = true;
    }
    out << fmt::format("  {} {}: {}", e.combo, e.result.dataset, e.result.config.empty() ? "-" : e.result.config);
    if (e.result.diversity) out << " diversity=" << fixed9(*e.result.diversity);
    out << '\n';
  }
}

EvalReport report_from_sweep(const SweepResult& result) {
  EvalReport report;
  report.manifest = result.plan;
  if (result.plan.contains("evals")) report.datasets = result.plan.at("evals").get<std::vector<std::string>>();
  for (const auto& b : result.baselines) {
    for (const auto& [dataset, r] : b.per_dataset) {
      report.add(b.combo, r.text);
      report.add(b.combo, r.multisensory);
      report.add(b.combo, r.concatenate);
      for (const auto& best : result.best) {
        if (best.combo != b.combo || best.dataset != dataset) continue;
        ClosenessResult coo;
        coo.dataset = dataset;
        coo.method = "COO";
        coo.config = to_label(best.point);
        coo.spearman = best.spearman;
        coo.n_pairs = r.text.n_pairs;
        coo.dropped_pairs = r.text.dropped_pairs;
        coo.diversity = best.diversity;
        report.add(b.combo, coo);
      }
    }
  }
  // Round through JSON so an in-memory report equals its reloaded form.
  return eval_report_from_json(to_json(report));
}

void write_diversity_tsv(std::ostream& out, const SweepResult& result) {
  out << "combo\tss\tts\top\toutput_dims\tdiversity\n";
  for (const auto& c : result.cells) {
    out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", c.combo, c.point.ss, c.point.ts, to_string(c.point.op),
                       c.output_dims, fixed9(c.diversity));
  }
}

void write_best_tsv(std::ostream& out, const SweepResult& result) {
  out << "combo\tdataset\tss\tts\top\toutput_dims\tspearman\tspearman_std\tdiversity\n";
  for (const auto& b : result.best) {
    out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", b.combo, b.dataset, b.point.ss, b.point.ts,
                       to_string(b.point.op), b.output_dims, fixed9(b.spearman), fixed9(b.spearman_std),
                       fixed9(b.diversity));
  }
}

void write_best_ratio_tsv(std::ostream& out, const BestRatioReport& report) {
  out << "dataset\tcombo\top\tbest_ratio\tcloseness_difference\tgrid_points\n";
  for (const auto& c : report.cells) {
    for (const auto op : kAllOps) {
      const auto it = c.ratio.find(op);
      if (it == c.ratio.end()) continue;
      const double ratio = it->second;
      out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", c.dataset, c.combo, to_string(op), fixed9(ratio),
                         fixed9(c.closeness_difference), c.grid_points);
    }
  }
  out << "\ndataset\top\tcorrelation\tn_cells\n";
  for (const auto& r : report.correlations) {
    out << fmt::format("{}\t{}\t{}\t{}\n", r.dataset, to_string(r.op),
                       r.correlation ? fixed9(*r.correlation) : std::string("undefined"), r.n_cells);
  }
}

}  // namespace spikefuse
