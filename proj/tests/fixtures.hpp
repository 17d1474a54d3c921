#pragma once

#include <vector>

#include "spikefuse/ingest.hpp"

namespace spikefuse::testkit {

struct ClosenessRow {
  SimilarityPair pair;
  std::size_t human_rank;
  double similarity;
  std::size_t similarity_rank;
};

/// Eleven pairs with human ratings and a representation's cosine similarities.
inline std::vector<ClosenessRow> closeness_example() {
  return {
      {{"tiger", "tiger", 10}, 1, 1, 1},
      {{"computer", "keyboard", 7.62}, 5, 0.987587052, 3},
      {{"plane", "car", 5.77}, 9, 0.967001033, 5},
      {{"train", "car", 6.31}, 7, 0.969252691, 4},
      {{"football", "soccer", 9.03}, 2, 0.900853568, 7},
      {{"law", "lawyer", 8.38}, 3, 0.735108495, 11},
      {{"tiger", "zoo", 5.87}, 8, 0.840800623, 9},
      {{"minister", "party", 6.63}, 6, 0.918485946, 6},
      {{"problem", "airport", 2.38}, 11, 0.755135699, 10},
      {{"day", "summer", 3.94}, 10, 0.863629918, 8},
      {{"man", "woman", 8.3}, 4, 0.997714718, 2},
  };
}

/// Twenty MTurk-771 pairs with their ratings, in listed order.
inline EvalDataset case_study_subset() {
  EvalDataset d;
  d.name = "MTurk771";
  d.pairs = {
      {"pupil", "student", 4.52},     {"aim", "purpose", 4.36},        {"cousin", "relation", 4.04},
      {"form", "type", 3.91},         {"hole", "opening", 3.76},       {"account", "statement", 3.68},
      {"health", "welfare", 3.5},     {"mate", "relation", 3.43},      {"mouth", "opening", 3.30},
      {"blue", "red", 3.27},          {"matter", "text", 3.27},        {"construction", "window", 2.76},
      {"call", "meeting", 2.73},      {"minute", "quantity", 2.61},    {"measure", "money", 2.57},
      {"plane", "tool", 2.30},        {"call", "statement", 2.13},     {"amount", "distance", 1.96},
      {"knowledge", "taste", 1.87},   {"foot", "recognition", 1.43},
  };
  return d;
}

}  // namespace spikefuse::testkit
