#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spikefuse/am_network.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"
#include "spikefuse/eval.hpp"
#include "spikefuse/ingest.hpp"

namespace spikefuse {

/// One (multisensory, text) dataset combination restricted to its working
/// vocabulary, with everything the pipeline derives from it up front.
struct PreparedCombo {
  std::string name;
  std::string norms_id;
  std::string embeddings_id;
  std::vector<std::string> vocabulary;  // sorted
  NormDataset norms_raw;                // vocabulary rows only
  EmbeddingDataset text_raw;
  NormDataset norms_normalized;         // min-max over the vocabulary
  EmbeddingDataset text_normalized;
  ModalityCorrelation correlation;      // over every concept in the norms file

  std::size_t d_ms() const noexcept { return norms_raw.modality_names.size(); }
  std::size_t d_text() const noexcept { return text_raw.dim; }
  /// Position of `token` in `vocabulary`, or vocabulary.size() when absent.
  std::size_t index_of(std::string_view token) const;
};

PreparedCombo prepare_combo(std::string name, const NormDataset& norms, const EmbeddingDataset& embeddings,
                            std::string norms_id = {}, std::string embeddings_id = {});

/// Text and AM rasters for every vocabulary concept, in vocabulary order.
struct ConceptRasters {
  std::vector<SpikeRaster> text;
  std::vector<SpikeRaster> am;
};

ConceptRasters encode_vocabulary(const PreparedCombo& combo, const EncodingConfig& cfg, const LifParams& lif,
                                 std::size_t workers = 1);

/// Fused codes for every vocabulary concept.
std::vector<BitVector> fuse_vocabulary(const ConceptRasters& rasters, const CooperateConfig& cc,
                                       std::size_t workers = 1);

/// Text, Multisensory and Concatenate baselines for one eval dataset.
/// Text and Multisensory use cosine on the raw vectors; Concatenate uses
/// cosine on normalized text ++ normalized multisensory.
struct BaselineResults {
  ClosenessResult text;
  ClosenessResult multisensory;
  ClosenessResult concatenate;
};

BaselineResults evaluate_baselines(const PreparedCombo& combo, const EvalDataset& usable);

/// COO closeness of vocabulary-ordered codes, Hamming similarity by default.
ClosenessResult evaluate_codes(const PreparedCombo& combo, const std::vector<BitVector>& codes,
                               const EvalDataset& usable, std::string config_label = {},
                               Metric metric = Metric::hamming);

/// Scorers used by case-study tables.
PairScorer text_scorer(const PreparedCombo& combo);
PairScorer multisensory_scorer(const PreparedCombo& combo);
PairScorer concatenate_scorer(const PreparedCombo& combo);
PairScorer code_scorer(const PreparedCombo& combo, const std::vector<BitVector>& codes,
                       Metric metric = Metric::hamming);

/// Cosine of two codes read as 0/1 vectors; 0 when either is all zeros.
double binary_cosine(const BitVector& a, const BitVector& b);

}  // namespace spikefuse
