#include "spikefuse/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <utility>

#include <spdlog/spdlog.h>

#include "spikefuse/error.hpp"
#include "text_util.hpp"

namespace spikefuse {

bool VectorSet::add(ConceptVector vector) {
  if (vector.values.empty()) {
    throw DataError("concept '" + vector.name + "' has an empty vector");
  }
  if (!vectors_.empty() && vector.values.size() != dim_) {
    throw DataError("concept '" + vector.name + "' has " + std::to_string(vector.values.size()) +
                    " values, expected " + std::to_string(dim_));
  }
  for (double v : vector.values) {
    if (!std::isfinite(v)) throw DataError("concept '" + vector.name + "' has a non-finite value");
  }
  if (index_.contains(vector.name)) return false;
  dim_ = vector.values.size();
  vector.kind = kind_;
  index_.emplace(vector.name, vectors_.size());
  vectors_.push_back(std::move(vector));
  return true;
}

const ConceptVector* VectorSet::find(std::string_view name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

std::string normalize_token(std::string_view token) {
  token = detail::trim(token);
  std::string out(token);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

NormFormat parse_norm_format(std::string_view tag) {
  if (tag == "csv") return NormFormat::csv;
  if (tag == "tsv") return NormFormat::tsv;
  throw ConfigError("unknown norms format '" + std::string(tag) + "' (expected csv or tsv)");
}

NormFormat norm_format_for(const std::filesystem::path& path) {
  const auto ext = normalize_token(path.extension().string());
  return ext == ".tsv" || ext == ".tab" ? NormFormat::tsv : NormFormat::csv;
}

EvalFormat parse_eval_format(std::string_view tag) {
  if (tag == "simlex") return EvalFormat::simlex;
  if (tag == "men") return EvalFormat::men;
  if (tag == "mturk") return EvalFormat::mturk;
  if (tag == "generic_tsv") return EvalFormat::generic_tsv;
  throw ConfigError("unknown eval format '" + std::string(tag) + "' (expected simlex, men, mturk or generic_tsv)");
}

std::string_view to_string(EvalFormat format) {
  switch (format) {
    case EvalFormat::simlex: return "simlex";
    case EvalFormat::men: return "men";
    case EvalFormat::mturk: return "mturk";
    case EvalFormat::generic_tsv: return "generic_tsv";
  }
  return "?";
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), 0, "cannot open file");
  return in;
}

// Strips a trailing '\r' and, on the first line, a UTF-8 byte order mark.
void clean_line(std::string& line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

double parse_cell(const std::string& path, std::size_t line_no, std::string_view cell, std::string_view what) {
  cell = detail::trim(cell);
  if (cell.empty()) throw DataError(path, line_no, "missing value for " + std::string(what));
  const auto value = detail::parse_double(cell);
  if (!value) {
    throw DataError(path, line_no, "non-numeric value '" + std::string(cell) + "' for " + std::string(what));
  }
  return *value;
}

// MEN's tagged release writes "car-n"; the natural-form release has bare tokens.
std::string strip_pos_suffix(std::string token) {
  if (token.size() > 2 && token[token.size() - 2] == '-' && std::isalpha(static_cast<unsigned char>(token.back()))) {
    token.resize(token.size() - 2);
  }
  return token;
}

}  // namespace

NormDataset load_norms(const std::filesystem::path& path, NormFormat format) {
  const std::string where = path.string();
  auto in = open_input(path);
  const char delim = format == NormFormat::csv ? ',' : '\t';

  NormDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    clean_line(line, ++line_no);
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_delimited(line, delim);
    if (!have_header) {
      if (fields.size() < 2) throw DataError(where, line_no, "header needs a concept column and at least one modality");
      for (std::size_t c = 1; c < fields.size(); ++c) dataset.modality_names.emplace_back(detail::trim(fields[c]));
      have_header = true;
      continue;
    }
    if (fields.size() != dataset.modality_names.size() + 1) {
      throw DataError(where, line_no,
                      "expected " + std::to_string(dataset.modality_names.size() + 1) + " columns, found " +
                          std::to_string(fields.size()));
    }
    ConceptVector vector{normalize_token(fields[0]), {}, VectorKind::multisensory};
    if (vector.name.empty()) throw DataError(where, line_no, "empty concept name");
    vector.values.reserve(dataset.modality_names.size());
    for (std::size_t c = 1; c < fields.size(); ++c) {
      vector.values.push_back(parse_cell(where, line_no, fields[c], "column '" + dataset.modality_names[c - 1] + "'"));
    }
    const std::string name = vector.name;
    if (!dataset.vectors.add(std::move(vector))) {
      throw DataError(where, line_no, "duplicate concept '" + name + "'");
    }
  }
  if (!have_header) throw DataError(where, 0, "missing header row");
  spdlog::debug("loaded {} norm rows ({} modalities) from {}", dataset.vectors.size(), dataset.modality_names.size(),
                where);
  return dataset;
}

EmbeddingDataset load_embeddings(const std::filesystem::path& path,
                                 const std::function<bool(std::string_view)>& keep) {
  const std::string where = path.string();
  auto in = open_input(path);

  EmbeddingDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  std::size_t duplicates = 0;
  bool first_content = true;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    clean_line(line, ++line_no);
    detail::split_whitespace(line, fields);
    if (fields.empty()) continue;
    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && detail::is_unsigned_integer(fields[0]) && detail::is_unsigned_integer(fields[1])) {
        continue;  // "N D" header
      }
    }
    if (fields.size() < 2) throw DataError(where, line_no, "line has a token but no values");
    const std::size_t dim = fields.size() - 1;
    if (dataset.dim == 0) {
      dataset.dim = dim;
    } else if (dim != dataset.dim) {
      throw DataError(where, line_no,
                      "dimension mismatch: " + std::to_string(dim) + " values, expected " + std::to_string(dataset.dim));
    }
    std::string token = normalize_token(fields[0]);
    if (keep && !keep(token)) continue;
    if (dataset.vectors.contains(token)) {
      ++duplicates;
      continue;
    }
    ConceptVector vector{std::move(token), {}, VectorKind::text};
    vector.values.reserve(dim);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const auto value = detail::parse_double(fields[c]);
      if (!value) throw DataError(where, line_no, "non-numeric value '" + std::string(fields[c]) + "'");
      vector.values.push_back(*value);
    }
    dataset.vectors.add(std::move(vector));
  }
  if (duplicates != 0) {
    spdlog::debug("{}: {} case-folded duplicate tokens ignored (first occurrence kept)", where, duplicates);
  }
  spdlog::debug("loaded {} embeddings of dim {} from {}", dataset.vectors.size(), dataset.dim, where);
  return dataset;
}

bool add_unique_pair(EvalDataset& dataset, SimilarityPair pair) {
  for (const auto& existing : dataset.pairs) {
    if ((existing.a == pair.a && existing.b == pair.b) || (existing.a == pair.b && existing.b == pair.a)) {
      return false;
    }
  }
  dataset.pairs.push_back(std::move(pair));
  return true;
}

EvalDataset load_eval_pairs(const std::filesystem::path& path, EvalFormat format, std::string name) {
  const std::string where = path.string();
  auto in = open_input(path);

  EvalDataset dataset;
  dataset.name = name.empty() ? path.stem().string() : std::move(name);
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t duplicates = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    clean_line(line, ++line_no);
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    std::string a;
    std::string b;
    std::string_view rating_cell;
    switch (format) {
      case EvalFormat::simlex: {
        detail::split_whitespace(trimmed, fields);
        if (normalize_token(fields[0]) == "word1") continue;  // header
        if (fields.size() < 3) throw DataError(where, line_no, "simlex rows need at least 3 columns");
        a = normalize_token(fields[0]);
        b = normalize_token(fields[1]);
        rating_cell = fields.size() >= 4 ? fields[3] : fields[2];
        break;
      }
      case EvalFormat::men: {
        if (trimmed.front() == '(') {
          // "(automobile, car) 50"
          const auto close = trimmed.find(')');
          const auto comma = trimmed.find(',');
          if (close == std::string_view::npos || comma == std::string_view::npos || comma > close) {
            throw DataError(where, line_no, "malformed parenthesised pair");
          }
          a = normalize_token(trimmed.substr(1, comma - 1));
          b = normalize_token(trimmed.substr(comma + 1, close - comma - 1));
          rating_cell = detail::trim(trimmed.substr(close + 1));
        } else {
          detail::split_whitespace(trimmed, fields);
          if (fields.size() != 3) throw DataError(where, line_no, "men rows need 3 columns");
          a = normalize_token(fields[0]);
          b = normalize_token(fields[1]);
          rating_cell = fields[2];
        }
        a = strip_pos_suffix(std::move(a));
        b = strip_pos_suffix(std::move(b));
        break;
      }
      case EvalFormat::mturk: {
        if (trimmed.find(',') != std::string_view::npos) {
          const auto parts = detail::split_delimited(trimmed, ',');
          fields.assign(parts.begin(), parts.end());
        } else {
          detail::split_whitespace(trimmed, fields);
        }
        if (fields.size() != 3) throw DataError(where, line_no, "mturk rows need 3 columns");
        a = normalize_token(fields[0]);
        b = normalize_token(fields[1]);
        rating_cell = fields[2];
        break;
      }
      case EvalFormat::generic_tsv: {
        const auto parts = detail::split_delimited(trimmed, '\t');
        if (parts.size() != 3) throw DataError(where, line_no, "generic_tsv rows need 3 tab-separated columns");
        a = normalize_token(parts[0]);
        b = normalize_token(parts[1]);
        rating_cell = parts[2];
        break;
      }
    }
    if (a.empty() || b.empty()) throw DataError(where, line_no, "empty token");
    rating_cell = detail::trim(rating_cell);
    const auto rating = detail::parse_double(rating_cell);
    if (!rating) throw DataError(where, line_no, "unparseable rating '" + std::string(rating_cell) + "'");

    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    if (!seen.insert(std::move(key)).second) {
      ++duplicates;
      continue;
    }
    dataset.pairs.push_back({std::move(a), std::move(b), *rating});
  }
  if (duplicates != 0) {
    spdlog::warn("{}: {} duplicate pairs ignored (first occurrence kept)", where, duplicates);
  }
  return dataset;
}

std::set<std::string, std::less<>> working_vocabulary(const VectorSet& a, const VectorSet& b) {
  std::set<std::string, std::less<>> tokens;
  const VectorSet& smaller = a.size() <= b.size() ? a : b;
  const VectorSet& larger = a.size() <= b.size() ? b : a;
  for (const auto& v : smaller) {
    if (larger.contains(v.name)) tokens.insert(v.name);
  }
  if (tokens.empty()) {
    throw DataError("no concept is shared by the multisensory and text datasets; check that they cover the same "
                    "vocabulary");
  }
  return tokens;
}

EvalDataset usable_pairs(const std::set<std::string, std::less<>>& tokens, const EvalDataset& eval,
                         std::size_t* dropped) {
  EvalDataset out;
  out.name = eval.name;
  std::size_t n_dropped = 0;
  for (const auto& pair : eval.pairs) {
    if (tokens.contains(pair.a) && tokens.contains(pair.b)) {
      out.pairs.push_back(pair);
    } else {
      ++n_dropped;
    }
  }
  if (dropped != nullptr) *dropped = n_dropped;
  return out;
}

Vocabulary intersect_vocabulary(const NormDataset& norms, const EmbeddingDataset& embeddings,
                                const EvalDataset& eval) {
  Vocabulary result;
  result.tokens = working_vocabulary(norms.vectors, embeddings.vectors);
  result.usable = usable_pairs(result.tokens, eval, &result.dropped_pairs);
  spdlog::info("vocabulary: {} shared concepts; {}: {} usable pairs, {} dropped", result.tokens.size(), eval.name,
               result.usable.pairs.size(), result.dropped_pairs);
  return result;
}

}  // namespace spikefuse
