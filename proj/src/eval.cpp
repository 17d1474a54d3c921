#include "spikefuse/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>
#include <utility>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "spikefuse/error.hpp"

namespace spikefuse {

namespace {

std::pair<std::string_view, std::string_view> pair_key(const SimilarityPair& p) {
  return p.a <= p.b ? std::pair<std::string_view, std::string_view>{p.a, p.b}
                    : std::pair<std::string_view, std::string_view>{p.b, p.a};
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::string_view to_string(Metric metric) { return metric == Metric::cosine ? "cosine" : "hamming"; }

Metric parse_metric(std::string_view text) {
  if (text == "cosine") return Metric::cosine;
  if (text == "hamming") return Metric::hamming;
  throw ConfigError("unknown metric '" + std::string(text) + "' (expected cosine or hamming)");
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("cosine similarity on vectors of different length (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    spdlog::warn("cosine similarity with a zero-norm vector; using 0");
    return 0.0;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double hamming_similarity(const BitVector& a, const BitVector& b) {
  if (a.empty()) throw ConfigError("hamming similarity of empty codes");
  return 1.0 - static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double similarity(const Representation& a, const Representation& b, Metric metric) {
  if (metric == Metric::cosine) {
    const auto* va = std::get_if<std::vector<double>>(&a);
    const auto* vb = std::get_if<std::vector<double>>(&b);
    if (va == nullptr || vb == nullptr) throw ConfigError("cosine metric needs real-valued representations");
    return cosine_similarity(*va, *vb);
  }
  const auto* ba = std::get_if<BitVector>(&a);
  const auto* bb = std::get_if<BitVector>(&b);
  if (ba == nullptr || bb == nullptr) throw ConfigError("hamming metric needs binary representations");
  return hamming_similarity(*ba, *bb);
}

std::vector<double> average_ranks(std::span<const double> scores) {
  const auto order = descending_order(scores);
  std::vector<double> ranks(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

std::vector<std::size_t> ordinal_ranks(std::span<const double> scores) {
  const auto order = descending_order(scores);
  std::vector<std::size_t> ranks(scores.size());
  for (std::size_t k = 0; k < order.size(); ++k) ranks[order[k]] = k + 1;
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("pearson: arrays differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

RankedPairList rank_pairs(std::span<const SimilarityPair> pairs, std::span<const double> scores) {
  if (pairs.size() != scores.size()) throw ConfigError("rank_pairs: one score per pair required");
  const auto avg = average_ranks(scores);
  const auto ord = ordinal_ranks(scores);
  RankedPairList list;
  list.pairs.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) list.pairs.push_back({pairs[i], scores[i], avg[i], ord[i]});
  return list;
}

RankedPairList rank_human(const EvalDataset& eval) {
  std::vector<double> ratings;
  ratings.reserve(eval.pairs.size());
  for (const auto& p : eval.pairs) ratings.push_back(p.rating);
  return rank_pairs(eval.pairs, ratings);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("spearman: arrays differ in length");
  if (x.size() < 3) throw EvalEmptyError("spearman needs at least 3 pairs, got " + std::to_string(x.size()));
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const auto rho = pearson(rx, ry);
  if (!rho) {
    spdlog::warn("spearman: a ranking is constant (all scores tied); reporting 0");
    return 0.0;
  }
  return *rho;
}

double spearman(const RankedPairList& human, const RankedPairList& model) {
  const std::size_t n = human.pairs.size();
  if (n != model.pairs.size()) throw ConfigError("spearman: ranked lists differ in size");
  if (n < 3) throw EvalEmptyError("spearman needs at least 3 pairs, got " + std::to_string(n));
  std::map<std::pair<std::string_view, std::string_view>, double> model_rank;
  for (const auto& rp : model.pairs) model_rank.emplace(pair_key(rp.pair), rp.rank);
  std::vector<double> hx;
  std::vector<double> my;
  hx.reserve(n);
  my.reserve(n);
  for (const auto& rp : human.pairs) {
    const auto it = model_rank.find(pair_key(rp.pair));
    if (it == model_rank.end()) {
      throw ConfigError("spearman: pair (" + rp.pair.a + ", " + rp.pair.b + ") missing from model ranking");
    }
    hx.push_back(rp.rank);
    my.push_back(it->second);
  }
  const auto rho = pearson(hx, my);
  if (!rho) {
    spdlog::warn("spearman: a ranking is constant (all scores tied); reporting 0");
    return 0.0;
  }
  return *rho;
}

double diversity(std::span<const BitVector> codes) {
  if (codes.empty()) throw ConfigError("diversity of an empty representation set");
  std::unordered_set<BitVector, BitVectorHash> distinct;
  distinct.reserve(codes.size());
  for (const auto& c : codes) {
    if (c.size() != codes.front().size()) throw ConfigError("diversity: representations differ in length");
    distinct.insert(c);
  }
  return static_cast<double>(distinct.size()) / static_cast<double>(codes.size());
}

double diversity(std::span<const BinaryRepresentation> reprs) {
  std::vector<BitVector> codes;
  codes.reserve(reprs.size());
  for (const auto& r : reprs) codes.push_back(r.bits);
  return diversity(codes);
}

ClosenessResult evaluate_scores(const EvalDataset& eval, const PairScorer& scorer, std::string method) {
  EvalDataset kept;
  kept.name = eval.name;
  std::vector<double> scores;
  std::size_t dropped = 0;
  for (const auto& pair : eval.pairs) {
    const auto score = scorer(pair);
    if (!score) {
      ++dropped;
      continue;
    }
    kept.pairs.push_back(pair);
    scores.push_back(*score);
  }
  if (kept.pairs.size() < 3) {
    throw EvalEmptyError(fmt::format("{} on {}: only {} usable pairs ({} dropped)", method, eval.name,
                                     kept.pairs.size(), dropped));
  }
  if (dropped != 0) spdlog::debug("{} on {}: {} pairs dropped (missing representation)", method, eval.name, dropped);
  ClosenessResult result;
  result.dataset = eval.name;
  result.method = std::move(method);
  result.spearman = spearman(rank_human(kept), rank_pairs(kept.pairs, scores));
  result.n_pairs = kept.pairs.size();
  result.dropped_pairs = dropped;
  return result;
}

ClosenessResult evaluate_method(const RepresentationMap& reprs, const EvalDataset& eval, Metric metric,
                                std::string method) {
  const PairScorer scorer = [&](const SimilarityPair& p) -> std::optional<double> {
    const auto a = reprs.find(p.a);
    const auto b = reprs.find(p.b);
    if (a == reprs.end() || b == reprs.end()) return std::nullopt;
    return similarity(a->second, b->second, metric);
  };
  auto result = evaluate_scores(eval, scorer, std::move(method));
  std::vector<BitVector> codes;
  for (const auto& [name, repr] : reprs) {
    const auto* bits = std::get_if<BitVector>(&repr);
    if (bits == nullptr) return result;
    codes.push_back(*bits);
  }
  if (!codes.empty()) result.diversity = diversity(codes);
  return result;
}

ConceptVector baseline_concatenate(const ConceptVector& text, const ConceptVector& ms) {
  if (text.values.empty() || ms.values.empty()) throw ConfigError("cannot concatenate an empty vector");
  ConceptVector out{text.name, text.values, VectorKind::text};
  out.values.insert(out.values.end(), ms.values.begin(), ms.values.end());
  return out;
}

CaseStudyTable case_study_table(const EvalDataset& subset, const std::vector<CaseStudyMethod>& methods) {
  CaseStudyTable table;
  const auto human = rank_human(subset);
  for (const auto& m : methods) table.methods.push_back(m.name);
  table.rows.resize(subset.pairs.size());
  for (std::size_t i = 0; i < subset.pairs.size(); ++i) {
    table.rows[i].pair = subset.pairs[i];
    table.rows[i].human_rank = human.pairs[i].ordinal_rank;
  }
  for (const auto& m : methods) {
    std::vector<double> scores;
    scores.reserve(subset.pairs.size());
    for (const auto& p : subset.pairs) {
      const auto s = m.scorer(p);
      if (!s) throw DataError("case study: method " + m.name + " has no representation for (" + p.a + ", " + p.b + ")");
      scores.push_back(*s);
    }
    const auto ranks = ordinal_ranks(scores);
    for (std::size_t i = 0; i < ranks.size(); ++i) table.rows[i].method_ranks.push_back(ranks[i]);
  }
  return table;
}

void write_case_study_tsv(std::ostream& out, const CaseStudyTable& table) {
  out << "concept1\tconcept2\trating\thuman_rank";
  for (const auto& m : table.methods) out << '\t' << m << "_rank";
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.pair.a << '\t' << row.pair.b << '\t' << fmt::format("{:.9f}", row.pair.rating) << '\t'
        << row.human_rank;
    for (auto r : row.method_ranks) out << '\t' << r;
    out << '\n';
  }
}

}  // namespace spikefuse
