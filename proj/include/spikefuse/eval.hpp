#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spikefuse/bits.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/ingest.hpp"

namespace spikefuse {

enum class Metric { cosine, hamming };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

/// A concept representation: dense real vector or binary code.
using Representation = std::variant<std::vector<double>, BitVector>;
using RepresentationMap = std::map<std::string, Representation, std::less<>>;

/// dot / (|a| |b|); 0 (with a warning) when either norm is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);
/// 1 - differing bits / n_bits.
double hamming_similarity(const BitVector& a, const BitVector& b);
/// Cosine needs real vectors, hamming needs bit vectors; ConfigError otherwise.
double similarity(const Representation& a, const Representation& b, Metric metric);

/// Descending ranks (highest score gets rank 1), ties share their average rank.
std::vector<double> average_ranks(std::span<const double> scores);
/// Descending ranks 1..n, ties broken by input order.
std::vector<std::size_t> ordinal_ranks(std::span<const double> scores);

/// Pearson correlation; nullopt when fewer than 2 points or a constant input.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct RankedPair {
  SimilarityPair pair;
  double score = 0.0;
  double rank = 0.0;              // average rank, used for correlation
  std::size_t ordinal_rank = 0;   // display rank
};

struct RankedPairList {
  std::vector<RankedPair> pairs;
};

/// Ranks `pairs` by `scores` (same order and length).
RankedPairList rank_pairs(std::span<const SimilarityPair> pairs, std::span<const double> scores);
/// Ranks an eval dataset by its human ratings.
RankedPairList rank_human(const EvalDataset& eval);

/// Spearman rho: Pearson correlation of the two average-rank arrays, pairs
/// matched by (unordered) tokens. Throws EvalEmptyError below 3 pairs and
/// ConfigError when the pair sets differ. A constant ranking yields 0.
double spearman(const RankedPairList& human, const RankedPairList& model);
/// Same statistic on raw score arrays.
double spearman(std::span<const double> x, std::span<const double> y);

/// Distinct codes / number of codes. ConfigError on empty input or mixed lengths.
double diversity(std::span<const BitVector> codes);
double diversity(std::span<const BinaryRepresentation> reprs);

struct ClosenessResult {
  std::string dataset;
  std::string method;      // Text, Multisensory, Concatenate, COO
  std::string config;      // empty for baselines
  double spearman = 0.0;
  std::size_t n_pairs = 0;
  std::size_t dropped_pairs = 0;
  std::optional<double> diversity;

  friend bool operator==(const ClosenessResult&, const ClosenessResult&) = default;
};

/// Similarity of one pair, or nullopt when a token has no representation.
using PairScorer = std::function<std::optional<double>(const SimilarityPair&)>;

/// Scores every pair, drops those the scorer cannot cover, and correlates the
/// model ranking with the human ranking. Throws EvalEmptyError when fewer than
/// 3 pairs survive.
ClosenessResult evaluate_scores(const EvalDataset& eval, const PairScorer& scorer, std::string method);

/// Map-based front end; attaches diversity when every representation is binary.
ClosenessResult evaluate_method(const RepresentationMap& reprs, const EvalDataset& eval, Metric metric,
                                std::string method);

/// Text ++ multisensory.
ConceptVector baseline_concatenate(const ConceptVector& text, const ConceptVector& ms);

struct CaseStudyMethod {
  std::string name;
  PairScorer scorer;
};

struct CaseStudyRow {
  SimilarityPair pair;
  std::size_t human_rank = 0;
  std::vector<std::size_t> method_ranks;
};

struct CaseStudyTable {
  std::vector<std::string> methods;
  std::vector<CaseStudyRow> rows;  // in input order
};

/// Per-pair human and per-method ordinal ranks for a (small) pair subset.
CaseStudyTable case_study_table(const EvalDataset& subset, const std::vector<CaseStudyMethod>& methods);
void write_case_study_tsv(std::ostream& out, const CaseStudyTable& table);

}  // namespace spikefuse
