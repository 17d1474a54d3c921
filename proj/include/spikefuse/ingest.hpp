#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spikefuse {

enum class VectorKind { multisensory, text };

/// A named dense real vector: one norm row or one embedding row.
struct ConceptVector {
  std::string name;
  std::vector<double> values;
  VectorKind kind = VectorKind::text;

  friend bool operator==(const ConceptVector&, const ConceptVector&) = default;
};

/// Ordered collection of equal-length concept vectors with unique names.
class VectorSet {
 public:
  VectorSet() = default;
  explicit VectorSet(VectorKind kind) : kind_(kind) {}

  /// Returns false (and leaves the set unchanged) when the name already exists.
  /// Throws DataError on a length mismatch or non-finite entry.
  bool add(ConceptVector vector);

  const ConceptVector* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }
  /// Common vector length, 0 while empty.
  std::size_t dim() const noexcept { return dim_; }
  VectorKind kind() const noexcept { return kind_; }

  const std::vector<ConceptVector>& vectors() const noexcept { return vectors_; }
  auto begin() const noexcept { return vectors_.begin(); }
  auto end() const noexcept { return vectors_.end(); }

  friend bool operator==(const VectorSet& a, const VectorSet& b) {
    return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.vectors_ == b.vectors_;
  }

 private:
  VectorKind kind_ = VectorKind::text;
  std::size_t dim_ = 0;
  std::vector<ConceptVector> vectors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Multisensory norms (LC823, BBSR, ...): one column per modality.
struct NormDataset {
  std::vector<std::string> modality_names;
  VectorSet vectors{VectorKind::multisensory};

  friend bool operator==(const NormDataset&, const NormDataset&) = default;
};

/// Text-derived embeddings (word2vec, GloVe, ...).
struct EmbeddingDataset {
  std::size_t dim = 0;
  VectorSet vectors{VectorKind::text};

  friend bool operator==(const EmbeddingDataset&, const EmbeddingDataset&) = default;
};

struct SimilarityPair {
  std::string a;
  std::string b;
  double rating = 0.0;

  friend bool operator==(const SimilarityPair&, const SimilarityPair&) = default;
};

struct EvalDataset {
  std::string name;
  std::vector<SimilarityPair> pairs;

  friend bool operator==(const EvalDataset&, const EvalDataset&) = default;
};

enum class NormFormat { csv, tsv };
enum class EvalFormat { simlex, men, mturk, generic_tsv };

/// Lowercase + trim. No stemming.
std::string normalize_token(std::string_view token);

NormFormat parse_norm_format(std::string_view tag);
/// Picks tsv for ".tsv"/".tab" extensions, csv otherwise.
NormFormat norm_format_for(const std::filesystem::path& path);
EvalFormat parse_eval_format(std::string_view tag);
std::string_view to_string(EvalFormat format);

NormDataset load_norms(const std::filesystem::path& path, NormFormat format);

/// Whitespace separated "token v1 ... vD" lines; an optional "N D" header
/// line is skipped. Case-folded duplicates keep the first occurrence.
/// When `keep` is set, only tokens it accepts are stored (dimension checks
/// still run on every line).
EmbeddingDataset load_embeddings(const std::filesystem::path& path,
                                 const std::function<bool(std::string_view)>& keep = {});

EvalDataset load_eval_pairs(const std::filesystem::path& path, EvalFormat format, std::string name = {});

/// Adds a pair unless its unordered counterpart is already present.
/// Returns false on a duplicate.
bool add_unique_pair(EvalDataset& dataset, SimilarityPair pair);

struct Vocabulary {
  std::set<std::string, std::less<>> tokens;
  EvalDataset usable;
  std::size_t dropped_pairs = 0;
};

/// Tokens present in both representation datasets. Throws DataError when empty.
std::set<std::string, std::less<>> working_vocabulary(const VectorSet& a, const VectorSet& b);

/// Pairs whose two members are both in `tokens`.
EvalDataset usable_pairs(const std::set<std::string, std::less<>>& tokens, const EvalDataset& eval,
                         std::size_t* dropped = nullptr);

Vocabulary intersect_vocabulary(const NormDataset& norms, const EmbeddingDataset& embeddings,
                                const EvalDataset& eval);

}  // namespace spikefuse
