#include "spikefuse/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <spdlog/spdlog.h>

#include "spikefuse/error.hpp"
#include "spikefuse/parallel.hpp"

namespace spikefuse {

std::size_t PreparedCombo::index_of(std::string_view token) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), token);
  if (it == vocabulary.end() || *it != token) return vocabulary.size();
  return static_cast<std::size_t>(it - vocabulary.begin());
}

PreparedCombo prepare_combo(std::string name, const NormDataset& norms, const EmbeddingDataset& embeddings,
                            std::string norms_id, std::string embeddings_id) {
  PreparedCombo combo;
  combo.name = std::move(name);
  combo.norms_id = std::move(norms_id);
  combo.embeddings_id = std::move(embeddings_id);
  const auto tokens = working_vocabulary(norms.vectors, embeddings.vectors);
  combo.vocabulary.assign(tokens.begin(), tokens.end());

  combo.norms_raw.modality_names = norms.modality_names;
  combo.text_raw.dim = embeddings.dim;
  for (const auto& token : combo.vocabulary) {
    combo.norms_raw.vectors.add(*norms.vectors.find(token));
    combo.text_raw.vectors.add(*embeddings.vectors.find(token));
  }
  if (combo.d_text() <= combo.d_ms()) {
    throw ConfigError("combo " + combo.name + ": text dimension " + std::to_string(combo.d_text()) +
                      " must exceed multisensory dimension " + std::to_string(combo.d_ms()));
  }
  combo.norms_normalized = min_max_normalize(combo.norms_raw);
  combo.text_normalized = min_max_normalize(combo.text_raw);
  combo.correlation = compute_modality_correlations(norms);
  spdlog::info("combo {}: {} shared concepts (d_text={}, d_ms={})", combo.name, combo.vocabulary.size(),
               combo.d_text(), combo.d_ms());
  return combo;
}

ConceptRasters encode_vocabulary(const PreparedCombo& combo, const EncodingConfig& cfg, const LifParams& lif,
                                 std::size_t workers) {
  const std::size_t n = combo.vocabulary.size();
  ConceptRasters rasters;
  rasters.text.resize(n);
  rasters.am.resize(n);
  const auto& text = combo.text_normalized.vectors.vectors();
  const auto& ms = combo.norms_normalized.vectors.vectors();
  parallel_for(n, workers, [&](std::size_t i) {
    rasters.text[i] = poisson_encode(text[i].values, cfg, text[i].name);
    rasters.am[i] = run_am(ms[i], combo.correlation, lif, cfg);
  });
  return rasters;
}

std::vector<BitVector> fuse_vocabulary(const ConceptRasters& rasters, const CooperateConfig& cc, std::size_t workers) {
  std::vector<BitVector> codes(rasters.text.size());
  parallel_for(codes.size(), workers, [&](std::size_t i) { codes[i] = fuse_bits(rasters.text[i], rasters.am[i], cc); });
  return codes;
}

PairScorer text_scorer(const PreparedCombo& combo) {
  return [&combo](const SimilarityPair& p) -> std::optional<double> {
    const auto* a = combo.text_raw.vectors.find(p.a);
    const auto* b = combo.text_raw.vectors.find(p.b);
    if (a == nullptr || b == nullptr) return std::nullopt;
    return cosine_similarity(a->values, b->values);
  };
}

PairScorer multisensory_scorer(const PreparedCombo& combo) {
  return [&combo](const SimilarityPair& p) -> std::optional<double> {
    const auto* a = combo.norms_raw.vectors.find(p.a);
    const auto* b = combo.norms_raw.vectors.find(p.b);
    if (a == nullptr || b == nullptr) return std::nullopt;
    return cosine_similarity(a->values, b->values);
  };
}

PairScorer concatenate_scorer(const PreparedCombo& combo) {
  return [&combo](const SimilarityPair& p) -> std::optional<double> {
    const auto* ta = combo.text_normalized.vectors.find(p.a);
    const auto* tb = combo.text_normalized.vectors.find(p.b);
    const auto* ma = combo.norms_normalized.vectors.find(p.a);
    const auto* mb = combo.norms_normalized.vectors.find(p.b);
    if (ta == nullptr || tb == nullptr || ma == nullptr || mb == nullptr) return std::nullopt;
    return cosine_similarity(baseline_concatenate(*ta, *ma).values, baseline_concatenate(*tb, *mb).values);
  };
}

double binary_cosine(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw ConfigError("binary_cosine: length mismatch");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t both = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) both += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  const std::size_t na = a.count();
  const std::size_t nb = b.count();
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(both) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

PairScorer code_scorer(const PreparedCombo& combo, const std::vector<BitVector>& codes, Metric metric) {
  return [&combo, &codes, metric](const SimilarityPair& p) -> std::optional<double> {
    const std::size_t a = combo.index_of(p.a);
    const std::size_t b = combo.index_of(p.b);
    if (a >= codes.size() || b >= codes.size()) return std::nullopt;
    return metric == Metric::hamming ? hamming_similarity(codes[a], codes[b]) : binary_cosine(codes[a], codes[b]);
  };
}

BaselineResults evaluate_baselines(const PreparedCombo& combo, const EvalDataset& usable) {
  return BaselineResults{evaluate_scores(usable, text_scorer(combo), "Text"),
                         evaluate_scores(usable, multisensory_scorer(combo), "Multisensory"),
                         evaluate_scores(usable, concatenate_scorer(combo), "Concatenate")};
}

ClosenessResult evaluate_codes(const PreparedCombo& combo, const std::vector<BitVector>& codes,
                               const EvalDataset& usable, std::string config_label, Metric metric) {
  auto result = evaluate_scores(usable, code_scorer(combo, codes, metric), "COO");
  result.config = std::move(config_label);
  result.diversity = diversity(codes);
  return result;
}

}  // namespace spikefuse
