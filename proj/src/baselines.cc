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

#include "dlgann/baselines.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dlgann/error.h"
#include "dlgann/scoring.h"
#include "json.hpp"

namespace dlgann {
namespace {

using Json = nlohmann::json;

using Matrix = std::vector<std::vector<double>>;

Matrix SimilarityMatrix(const std::vector<std::vector<double>>& vectors) {
  const size_t n = vectors.size();
  const size_t dim = vectors.front().size();
  for (size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "vector " + std::to_string(i + 1) + " has length " +
                      std::to_string(vectors[i].size()) + ", expected " +
                      std::to_string(dim));
    }
  }
  Matrix sim(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    sim[i][i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = Cosine(vectors[i], vectors[j]);
    }
  }
  return sim;
}

// Each cell becomes the fraction of the other cells in its clipped mask
// window holding a strictly smaller similarity.
Matrix RankMatrix(const Matrix& sim, int mask_size) {
  const int n = static_cast<int>(sim.size());
  const int radius = mask_size / 2;
  Matrix rank(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int r0 = std::max(0, i - radius), r1 = std::min(n - 1, i + radius);
      const int c0 = std::max(0, j - radius), c1 = std::min(n - 1, j + radius);
      int smaller = 0;
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) smaller += sim[r][c] < sim[i][j];
      }
      const int examined = (r1 - r0 + 1) * (c1 - c0 + 1) - 1;
      rank[i][j] = examined > 0 ? static_cast<double>(smaller) / examined : 0.0;
    }
  }
  return rank;
}

// Summed-area table over the rank matrix.
class BlockSums {
 public:
  explicit BlockSums(const Matrix& m)
      : n_(m.size()), table_((n_ + 1) * (n_ + 1), 0.0) {
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = 0; j < n_; ++j) {
        at(i + 1, j + 1) = m[i][j] + at(i, j + 1) + at(i + 1, j) - at(i, j);
      }
    }
  }

  // Sum over the square block [begin, end) x [begin, end).
  double Block(size_t begin, size_t end) const {
    return at(end, end) - at(begin, end) - at(end, begin) + at(begin, begin);
  }

 private:
  double& at(size_t i, size_t j) { return table_[i * (n_ + 1) + j]; }
  double at(size_t i, size_t j) const { return table_[i * (n_ + 1) + j]; }

  size_t n_;
  std::vector<double> table_;
};

}  // namespace

PosTag ParsePosTag(std::string_view label) {
  const std::string upper = [&] {
    std::string s(label);
    for (char& c : s) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return s;
  }();
  if (upper == "NOUN") return PosTag::kNoun;
  if (upper == "VERB") return PosTag::kVerb;
  if (upper == "ADJ") return PosTag::kAdj;
  if (upper == "OTHER") return PosTag::kOther;
  throw Error(ErrorCode::kSchemaError, "unknown POS label '" + std::string(label) + "'");
}

PosMap ParsePosJsonl(std::string_view content) {
  PosMap out;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      const std::string id = j.at("id").get<std::string>();
      std::vector<std::vector<PosTag>> tags;
      for (const Json& utterance : j.at("tags")) {
        std::vector<PosTag> row;
        for (const Json& label : utterance) row.push_back(ParsePosTag(label.get<std::string>()));
        tags.push_back(std::move(row));
      }
      if (!out.emplace(id, std::move(tags)).second) {
        throw Error(ErrorCode::kSchemaError, "duplicate POS record for '" + id + "'");
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaError,
                  "POS line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

PosMap ImportPos(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParsePosJsonl(buf.str());
}

RedundancyAnnotation RuleRedundant(const PosTaggedDialogue& tagged) {
  const Dialogue& d = tagged.dialogue;
  if (static_cast<int>(tagged.tags.size()) != d.size()) {
    throw Error(ErrorCode::kTagCountMismatch,
                "dialogue '" + d.id + "': " + std::to_string(tagged.tags.size()) +
                    " tag rows for " + std::to_string(d.size()) + " utterances");
  }
  RedundancyAnnotation result;
  for (int i = 1; i <= d.size(); ++i) {
    const auto& row = tagged.tags[i - 1];
    if (row.size() != d.at(i).words.size()) {
      throw Error(ErrorCode::kTagCountMismatch,
                  "dialogue '" + d.id + "' utterance " + std::to_string(i) + ": " +
                      std::to_string(row.size()) + " tags for " +
                      std::to_string(d.at(i).words.size()) + " words");
    }
    const bool content = std::any_of(row.begin(), row.end(),
                                     [](PosTag t) { return t != PosTag::kOther; });
    if (!content) result.indices.insert(i);
  }
  return result;
}

TopicAnnotation C99Segment(const std::vector<std::vector<double>>& vectors,
                           std::optional<int> target_boundaries,
                           const C99Options& options) {
  if (vectors.size() < 2) {
    throw Error(ErrorCode::kTooShort, "C99 needs at least 2 vectors");
  }
  const Matrix rank = RankMatrix(SimilarityMatrix(vectors), options.mask_size);
  const BlockSums sums(rank);
  const size_t n = vectors.size();

  // Segments as sorted start offsets; the last segment ends at n.
  std::vector<size_t> starts = {0};
  double inside = sums.Block(0, n);
  double area = static_cast<double>(n * n);
  std::vector<double> density = {inside / area};
  std::vector<size_t> split_order;

  for (size_t step = 0; step + 1 < n; ++step) {
    double best = -1.0;
    size_t best_split = 0;
    double best_inside = 0.0, best_area = 0.0;
    for (size_t s = 0; s < starts.size(); ++s) {
      const size_t begin = starts[s];
      const size_t end = s + 1 < starts.size() ? starts[s + 1] : n;
      const double seg_sum = sums.Block(begin, end);
      const double seg_area = static_cast<double>((end - begin) * (end - begin));
      for (size_t cut = begin + 1; cut < end; ++cut) {
        const double new_inside = inside - seg_sum + sums.Block(begin, cut) + sums.Block(cut, end);
        const double new_area = area - seg_area +
                                static_cast<double>((cut - begin) * (cut - begin)) +
                                static_cast<double>((end - cut) * (end - cut));
        const double d = new_inside / new_area;
        if (d > best) {
          best = d;
          best_split = cut;
          best_inside = new_inside;
          best_area = new_area;
        }
      }
    }
    starts.insert(std::upper_bound(starts.begin(), starts.end(), best_split), best_split);
    inside = best_inside;
    area = best_area;
    density.push_back(best);
    split_order.push_back(best_split);
  }

  size_t keep = 0;
  if (target_boundaries) {
    keep = static_cast<size_t>(std::clamp(*target_boundaries, 0, static_cast<int>(n - 1)));
  } else {
    std::vector<double> gain;
    for (size_t k = 1; k < density.size(); ++k) gain.push_back(density[k] - density[k - 1]);
    double mean = 0.0;
    for (double g : gain) mean += g;
    mean /= static_cast<double>(gain.size());
    double var = 0.0;
    for (double g : gain) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gain.size());
    const double cutoff = mean + options.stop_coefficient * std::sqrt(var);
    for (size_t k = 0; k < gain.size(); ++k) {
      if (gain[k] > cutoff) keep = k + 1;
    }
  }

  TopicAnnotation result;
  for (size_t k = 0; k < keep; ++k) {
    result.boundaries.insert(static_cast<int>(split_order[k]) + 1);
  }
  return result;
}

std::vector<double> RankGraph(const WordGraph& graph, const TextRankOptions& options) {
  const size_t n = graph.nodes.size();
  std::vector<double> score(n, 1.0);
  if (n == 0) return score;
  std::vector<double> out_weight(n, 0.0);
  for (size_t u = 0; u < n; ++u) {
    for (const auto& [v, w] : graph.edges[u]) out_weight[u] += w;
  }
  std::vector<double> next(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (size_t u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) dangling += score[u];
    }
    for (size_t v = 0; v < n; ++v) {
      double incoming = dangling / static_cast<double>(n);
      for (const auto& [u, w] : graph.edges[v]) incoming += w / out_weight[u] * score[u];
      next[v] = (1.0 - options.damping) + options.damping * incoming;
    }
    double delta = 0.0;
    for (size_t v = 0; v < n; ++v) delta = std::max(delta, std::abs(next[v] - score[v]));
    score.swap(next);
    if (delta < options.tolerance) break;
  }
  return score;
}

WordGraph BuildCooccurrenceGraph(const Dialogue& dialogue, const WordSet& stopwords,
                                 int window) {
  std::vector<int> sequence;
  WordGraph graph;
  std::unordered_map<std::string, int> ids;
  for (const Utterance& u : dialogue.utterances) {
    for (const std::string& token : NormalizedTokens(Join(u.words, " "))) {
      if (stopwords.count(token)) continue;
      auto [it, inserted] = ids.emplace(token, static_cast<int>(graph.nodes.size()));
      if (inserted) {
        graph.nodes.push_back(token);
        graph.edges.emplace_back();
      }
      sequence.push_back(it->second);
    }
  }
  for (size_t i = 0; i < sequence.size(); ++i) {
    for (size_t j = i + 1; j < sequence.size() && j < i + static_cast<size_t>(window); ++j) {
      const int a = sequence[i], b = sequence[j];
      if (a == b) continue;
      graph.edges[a][b] += 1.0;
      graph.edges[b][a] += 1.0;
    }
  }
  return graph;
}

std::vector<RankedWord> TextRankKeywords(const Dialogue& dialogue, int k,
                                         const WordSet& stopwords,
                                         const TextRankOptions& options) {
  if (k <= 0) return {};
  const WordGraph graph = BuildCooccurrenceGraph(dialogue, stopwords, options.window);
  const std::vector<double> score = RankGraph(graph, options);
  std::vector<size_t> order(graph.nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Node ids follow first occurrence, so a stable sort settles ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return score[a] > score[b]; });
  std::vector<RankedWord> out;
  for (size_t i = 0; i < order.size() && static_cast<int>(i) < k; ++i) {
    out.push_back({graph.nodes[order[i]], score[order[i]]});
  }
  return out;
}

}  // namespace dlgann
