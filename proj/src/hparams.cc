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

#include "dlgann/hparams.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "dlgann/error.h"
#include "dlgann/eval.h"

namespace dlgann {
namespace {

std::vector<std::string> StatTokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string& w : SplitWhitespace(text)) {
    std::string t = StripPunctuation(w);
    if (!t.empty()) tokens.push_back(std::move(t));
  }
  return tokens;
}

const ScoreBundle& BundleFor(const ScoreMap& bundles, const std::string& id) {
  auto it = bundles.find(id);
  if (it == bundles.end()) {
    throw Error(ErrorCode::kMissingBundle, "no score bundle for dialogue '" + id + "'");
  }
  return it->second;
}

struct Variant {
  std::string param;
  double value;
  HParams hparams;
  TaskSet tasks;
};

}  // namespace

CorpusStats ComputeStats(const Corpus& corpus, const WordSet& stopwords) {
  CorpusStats stats;
  stats.n = corpus.size();
  if (corpus.empty()) return stats;
  double turns = 0, dialogue_tokens = 0, summary_tokens = 0, content_tokens = 0,
         sentences = 0;
  for (const CorpusRecord& record : corpus) {
    if (!record.summary) {
      throw Error(ErrorCode::kMissingSummary,
                  "dialogue '" + record.dialogue.id + "' has no reference summary");
    }
    turns += record.dialogue.size();
    for (const Utterance& u : record.dialogue.utterances) {
      dialogue_tokens += static_cast<double>(StatTokens(Join(u.words, " ")).size());
    }
    for (const std::string& t : StatTokens(record.summary->text)) {
      summary_tokens += 1;
      if (!stopwords.count(AsciiLower(t))) content_tokens += 1;
    }
    sentences += static_cast<double>(record.summary->sentences.size());
  }
  const double n = static_cast<double>(corpus.size());
  stats.avg_turns = turns / n;
  stats.avg_dialogue_tokens = dialogue_tokens / n;
  stats.avg_summary_tokens = summary_tokens / n;
  stats.avg_summary_tokens_no_stopwords = content_tokens / n;
  stats.avg_summary_sentences = sentences / n;
  return stats;
}

double EstimateKeywordRatio(const CorpusStats& stats) {
  if (!(stats.avg_dialogue_tokens > 0.0)) {
    throw Error(ErrorCode::kDivisionByZero, "average dialogue length is zero");
  }
  return 100.0 * stats.avg_summary_tokens_no_stopwords / stats.avg_dialogue_tokens;
}

double EstimateTopicRatio(const CorpusStats& stats) {
  if (!(stats.avg_turns > 0.0)) {
    throw Error(ErrorCode::kDivisionByZero, "average turn count is zero");
  }
  return 100.0 * stats.avg_summary_sentences / stats.avg_turns;
}

Grid Grid::Samsum() {
  return {{10, 15, 20, 25}, {0.95, 0.96, 0.97, 0.98, 0.99}, {10, 15, 20, 25}};
}

Grid Grid::Ami() {
  return {{3, 4, 5, 6}, {0.95, 0.96, 0.97, 0.98, 0.99}, {4, 5, 6, 7}};
}

void ValidateGrid(const Grid& grid) {
  if (grid.size() == 0) throw Error(ErrorCode::kInvalidHParams, "grid is empty");
  for (double v : grid.r_ke_values) ValidateHParams({v, 0.99, 15});
  for (double v : grid.t_rd_values) ValidateHParams({15, v, 15});
  for (double v : grid.r_ts_values) ValidateHParams({15, 0.99, v});
}

Objective ParseObjective(std::string_view name) {
  if (name == "none") return Objective::kNone;
  if (name == "keyword_f1") return Objective::kKeywordF1;
  if (name == "boundary_count_target") return Objective::kBoundaryCountTarget;
  throw Error(ErrorCode::kInvalidHParams, "unknown objective '" + std::string(name) + "'");
}

std::vector<GridRow> GridSearch(const Corpus& corpus, const ScoreMap& bundles,
                                const Grid& grid, const GridOptions& options) {
  ValidateGrid(grid);
  ValidateHParams(options.base);
  for (const CorpusRecord& record : corpus) BundleFor(bundles, record.dialogue.id);
  if (options.objective == Objective::kKeywordF1 && !grid.r_ke_values.empty()) {
    for (const CorpusRecord& record : corpus) {
      if (!record.summary) {
        throw Error(ErrorCode::kMissingSummary,
                    "keyword_f1 needs a summary for '" + record.dialogue.id + "'");
      }
    }
  }
  if (options.objective == Objective::kBoundaryCountTarget && !options.boundary_target) {
    throw Error(ErrorCode::kInvalidHParams, "boundary_count_target needs a target value");
  }

  std::vector<Variant> variants;
  for (double v : grid.r_ke_values) {
    HParams h = options.base;
    h.r_ke = v;
    variants.push_back({"r_ke", v, h, {true, false, false}});
  }
  for (double v : grid.t_rd_values) {
    HParams h = options.base;
    h.t_rd = v;
    variants.push_back({"t_rd", v, h, {false, true, false}});
  }
  for (double v : grid.r_ts_values) {
    HParams h = options.base;
    h.r_ts = v;
    variants.push_back({"r_ts", v, h, {false, false, true}});
  }

  if (options.output_dir) std::filesystem::create_directories(*options.output_dir);
  const double n = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());

  std::vector<GridRow> rows;
  for (const Variant& variant : variants) {
    GridRow row{variant.param, variant.value, variant.hparams, 0.0, "-"};
    std::string jsonl;
    std::vector<PRF> prfs;
    double total = 0.0;
    for (const CorpusRecord& record : corpus) {
      const AnnotatedDialogue a = Annotate(record.dialogue,
                                           BundleFor(bundles, record.dialogue.id),
                                           variant.hparams, variant.tasks);
      if (a.keywords) {
        total += static_cast<double>(a.keywords->ranked.size());
        if (options.objective == Objective::kKeywordF1) {
          prfs.push_back(KeywordPRF(a.keywords->Surfaces(), *record.summary,
                                    options.stopwords));
        }
      }
      if (a.redundant) total += static_cast<double>(a.redundant->indices.size());
      if (a.topics) total += static_cast<double>(a.topics->boundaries.size());
      if (options.output_dir) jsonl += AnnotatedToJsonLine(a) + "\n";
    }
    row.metric = total / n;
    if (variant.param == "r_ke" && options.objective == Objective::kKeywordF1) {
      row.metric = MacroAverage(prfs).f1;
    }
    if (variant.param == "r_ts" && options.objective == Objective::kBoundaryCountTarget) {
      row.metric = std::abs(total / n - *options.boundary_target);
    }
    if (options.output_dir) {
      const auto path = *options.output_dir /
                        (variant.param + "_" + FormatDouble(variant.value) + ".jsonl");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
      out << jsonl;
      row.output_path = path.string();
    }
    rows.push_back(std::move(row));
  }

  auto axis = [&](const std::string& param) {
    auto first = std::find_if(rows.begin(), rows.end(),
                              [&](const GridRow& r) { return r.param == param; });
    auto last = std::find_if(first, rows.end(),
                             [&](const GridRow& r) { return r.param != param; });
    return std::make_pair(first, last);
  };
  if (options.objective == Objective::kKeywordF1) {
    auto [first, last] = axis("r_ke");
    std::stable_sort(first, last,
                     [](const GridRow& a, const GridRow& b) { return a.metric > b.metric; });
  }
  if (options.objective == Objective::kBoundaryCountTarget) {
    auto [first, last] = axis("r_ts");
    std::stable_sort(first, last,
                     [](const GridRow& a, const GridRow& b) { return a.metric < b.metric; });
  }
  return rows;
}

std::string GridToTsv(const std::vector<GridRow>& rows) {
  std::string out = "param\tvalue\tmetric\toutput_path\n";
  for (const GridRow& row : rows) {
    out += row.param + "\t" + FormatDouble(row.value) + "\t" + FormatDouble(row.metric) +
           "\t" + row.output_path + "\n";
  }
  return out;
}

}  // namespace dlgann
