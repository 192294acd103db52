// Copyright 2026 The dlgann Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DLGANN_BASELINES_H_
#define DLGANN_BASELINES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlgann/corpus.h"
#include "dlgann/text.h"

namespace dlgann {

enum class PosTag { kNoun, kVerb, kAdj, kOther };

// Throws SchemaError for anything outside NOUN/VERB/ADJ/OTHER.
PosTag ParsePosTag(std::string_view label);

struct PosTaggedDialogue {
  Dialogue dialogue;
  std::vector<std::vector<PosTag>> tags;  // one list per utterance
};

// POS jsonl: {"id": str, "tags": [[str, ...] per utterance]}.
using PosMap = std::map<std::string, std::vector<std::vector<PosTag>>>;
PosMap ParsePosJsonl(std::string_view content);
PosMap ImportPos(const std::filesystem::path& path);

// Marks every utterance (u_1 included) with no NOUN, VERB or ADJ tag.
// Throws TagCountMismatch when tags do not line up with words.
RedundancyAnnotation RuleRedundant(const PosTaggedDialogue& tagged);

struct C99Options {
  int mask_size = 11;
  double stop_coefficient = 1.2;
};

// Choi's C99: cosine similarity matrix, local rank transform over an 11x11
// mask clipped at the edges, then greedy divisive clustering that maximizes
// inside density. With target_boundaries the clustering stops after that
// many splits (clamped to n - 1); otherwise it keeps the splits up to the
// last density gain above mean + 1.2 standard deviations of all gains.
// Boundaries are 1-based indices of the vectors that open a segment.
// Throws DimensionMismatch or ZeroEmbedding; fewer than 2 vectors throws
// TooShort.
TopicAnnotation C99Segment(const std::vector<std::vector<double>>& vectors,
                           std::optional<int> target_boundaries,
                           const C99Options& options = {});

// Undirected graph with co-occurrence counts as edge weights.
struct WordGraph {
  std::vector<std::string> nodes;  // order of first occurrence
  std::vector<std::map<int, double>> edges;
};

// Weighted PageRank: s_v = (1 - d) + d * (sum_u w_uv / W_u * s_u + sum over
// isolated u of s_u / N), starting from s = 1. Scores therefore always sum to
// the node count N. Stops when the largest change drops below tolerance or
// after max_iterations.
struct TextRankOptions {
  int window = 4;
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 100;
};
std::vector<double> RankGraph(const WordGraph& graph, const TextRankOptions& options = {});

// Co-occurrence graph over the dialogue's non-stopword normalized tokens
// (speakers excluded); tokens at distance below `window` are linked.
WordGraph BuildCooccurrenceGraph(const Dialogue& dialogue, const WordSet& stopwords,
                                 int window);

struct RankedWord {
  std::string word;
  double score = 0.0;
};

// Top k words by TextRank score; ties go to the earlier first occurrence.
std::vector<RankedWord> TextRankKeywords(const Dialogue& dialogue, int k,
                                         const WordSet& stopwords,
                                         const TextRankOptions& options = {});

}  // namespace dlgann

#endif  // DLGANN_BASELINES_H_
