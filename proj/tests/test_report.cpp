#include <sstream>

#include <gtest/gtest.h>

#include "spikefuse/error.hpp"
#include "spikefuse/report.hpp"

using namespace spikefuse;

namespace {

ClosenessResult result(std::string dataset, std::string method, double rho, std::string config = {}) {
  ClosenessResult r;
  r.dataset = std::move(dataset);
  r.method = std::move(method);
  r.spearman = rho;
  r.n_pairs = 20;
  r.dropped_pairs = 4;
  r.config = std::move(config);
  if (r.method == "COO") r.diversity = 0.75;
  return r;
}

EvalReport sample() {
  EvalReport report;
  report.manifest = {{"command", "eval"}};
  report.datasets = {"SimLex999", "MEN", "MTurk771"};
  for (std::string combo : {"w2v-LC823", "glove-LC823"}) {
    for (const auto& d : report.datasets) {
      report.add(combo, result(d, "COO", 0.6418803421234, "ss=1 ts=5 op=OR"));
      report.add(combo, result(d, "Text", 0.203760684));
      report.add(combo, result(d, "Multisensory", -0.3483760681));
      report.add(combo, result(d, "Concatenate", 0.298119658));
    }
  }
  return report;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST(EvalReport, JsonRoundTrip) {
  const auto report = sample();
  const auto j = to_json(report);
  const auto back = eval_report_from_json(j);
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(eval_report_from_json(to_json(back)), back);
  EXPECT_EQ(back.datasets, report.datasets);
  EXPECT_EQ(back.combos, report.combos);
  // reals carry 9 decimals
  EXPECT_DOUBLE_EQ(back.find("w2v-LC823", "COO", "MEN")->spearman, 0.641880342);
}

TEST(EvalReport, FindAndCombosInInsertionOrder) {
  const auto report = sample();
  EXPECT_EQ(report.combos, (std::vector<std::string>{"w2v-LC823", "glove-LC823"}));
  EXPECT_NE(report.find("glove-LC823", "Text", "MEN"), nullptr);
  EXPECT_EQ(report.find("glove-LC823", "Text", "WS353"), nullptr);
}

TEST(EvalReport, MalformedJsonIsDataError) {
  EXPECT_THROW(eval_report_from_json(nlohmann::json::parse(R"({"entries": 3})")), DataError);
  EXPECT_THROW(eval_report_from_json(nlohmann::json::parse(R"([1, 2])")), DataError);
}

TEST(EvalReport, TextLayout) {
  std::ostringstream out;
  write_report_text(out, sample());
  const auto lines = lines_of(out.str());
  ASSERT_GE(lines.size(), 9u);
  EXPECT_EQ(lines[0].find("Combination"), 0u);
  EXPECT_LT(lines[0].find("SimLex999"), lines[0].find("MEN"));
  EXPECT_LT(lines[0].find("MEN"), lines[0].find("MTurk771"));
  // four methods per combination, fixed method order, first row carries the name
  const char* methods[] = {"Text", "Multisensory", "Concatenate", "COO"};
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t m = 0; m < 4; ++m) {
      const auto& line = lines[1 + g * 4 + m];
      EXPECT_NE(line.find(methods[m]), std::string::npos) << line;
      EXPECT_EQ(line.find(g == 0 ? "w2v-LC823" : "glove-LC823") == 0, m == 0) << line;
    }
  }
  EXPECT_NE(lines[2].find("-0.348376068"), std::string::npos);
  EXPECT_NE(lines[4].find("0.641880342"), std::string::npos);
  // right-aligned numeric columns end at the same offset
  EXPECT_EQ(lines[1].size(), lines[2].size());
  EXPECT_NE(out.str().find("pairs used (dropped)"), std::string::npos);
  EXPECT_NE(out.str().find("w2v-LC823 MEN: ss=1 ts=5 op=OR diversity=0.750000000"), std::string::npos);
}

TEST(Fixed9, Formatting) {
  EXPECT_EQ(fixed9(0.5), "0.500000000");
  EXPECT_EQ(fixed9(-0.0), "0.000000000");
  EXPECT_EQ(fixed9(-1e-12), "0.000000000");
  EXPECT_EQ(fixed9(-0.25), "-0.250000000");
}

TEST(SweepTables, LayoutAndOrder) {
  SweepResult r;
  r.plan = {{"evals", {"B", "A"}}};
  SweepCell c;
  c.combo = "x";
  c.point = {2, 3, CooperateOp::nor};
  c.output_dims = 42;
  c.diversity = 0.5;
  c.scores["A"] = {{0.1}, 0.1, 0, 10};
  c.scores["B"] = {{0.2}, 0.2, 0, 10};
  r.cells.push_back(c);
  r.best = select_best(r.cells);
  std::ostringstream div;
  write_diversity_tsv(div, r);
  EXPECT_EQ(div.str(), "combo\tss\tts\top\toutput_dims\tdiversity\nx\t2\t3\tNOR\t42\t0.500000000\n");
  std::ostringstream best;
  write_best_tsv(best, r);
  EXPECT_EQ(lines_of(best.str()).size(), 3u);
  EXPECT_NE(best.str().find("x\tA\t2\t3\tNOR\t42\t0.100000000\t0.000000000\t0.500000000"), std::string::npos);

  ComboBaselines b;
  b.combo = "x";
  for (std::string d : {"A", "B"}) {
    BaselineResults br;
    br.text = result(d, "Text", 0.3);
    br.multisensory = result(d, "Multisensory", 0.2);
    br.concatenate = result(d, "Concatenate", 0.1);
    b.per_dataset[d] = br;
  }
  r.baselines.push_back(b);
  const auto report = report_from_sweep(r);
  EXPECT_EQ(report.datasets, (std::vector<std::string>{"B", "A"}));
  ASSERT_NE(report.find("x", "COO", "A"), nullptr);
  EXPECT_EQ(report.find("x", "COO", "A")->config, "ss=2 ts=3 op=NOR");
  EXPECT_EQ(report.find("x", "COO", "A")->n_pairs, 20u);
}

TEST(SweepTables, BestRatioPrintsUndefined) {
  BestRatioReport report;
  report.cells.push_back({"D", "c", {{CooperateOp::or_op, 1.0}}, 0.25, 4});
  report.correlations.push_back({"D", CooperateOp::or_op, std::nullopt, 1});
  std::ostringstream out;
  write_best_ratio_tsv(out, report);
  EXPECT_NE(out.str().find("undefined"), std::string::npos);
  EXPECT_NE(out.str().find("1.000000000"), std::string::npos);
}
