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

#ifndef DLGANN_HPARAMS_H_
#define DLGANN_HPARAMS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlgann/annotate.h"
#include "dlgann/corpus.h"
#include "dlgann/scoring.h"
#include "dlgann/text.h"

namespace dlgann {

struct CorpusStats {
  size_t n = 0;
  double avg_turns = 0.0;
  double avg_dialogue_tokens = 0.0;
  double avg_summary_tokens = 0.0;
  double avg_summary_tokens_no_stopwords = 0.0;
  double avg_summary_sentences = 0.0;
};

// Tokens are whitespace-split utterance words (speakers excluded) with ASCII
// punctuation removed; tokens that end up empty are not counted. Summary
// sentences come from SplitSentences. Throws MissingSummary.
CorpusStats ComputeStats(const Corpus& corpus, const WordSet& stopwords);

// 100 * avg_summary_tokens_no_stopwords / avg_dialogue_tokens.
// Throws DivisionByZero.
double EstimateKeywordRatio(const CorpusStats& stats);

// 100 * avg_summary_sentences / avg_turns. Throws DivisionByZero.
double EstimateTopicRatio(const CorpusStats& stats);

struct Grid {
  std::vector<double> r_ke_values;
  std::vector<double> t_rd_values;
  std::vector<double> r_ts_values;

  // Sweeps used for the chat (SAMSum-like) and meeting (AMI-like) settings.
  static Grid Samsum();
  static Grid Ami();

  size_t size() const {
    return r_ke_values.size() + t_rd_values.size() + r_ts_values.size();
  }
};

// Throws InvalidHParams on an out-of-range value or an empty grid.
void ValidateGrid(const Grid& grid);

enum class Objective { kNone, kKeywordF1, kBoundaryCountTarget };

// Throws InvalidHParams on an unknown name.
Objective ParseObjective(std::string_view name);

struct GridRow {
  std::string param;  // "r_ke", "t_rd" or "r_ts"
  double value = 0.0;
  HParams hparams;
  double metric = 0.0;
  std::string output_path;  // "-" when variants are not written
};

struct GridOptions {
  Objective objective = Objective::kNone;
  // Mean boundaries per dialogue to aim for under kBoundaryCountTarget.
  std::optional<double> boundary_target;
  // Values of the axes that are not being swept.
  HParams base = HParams::Samsum();
  WordSet stopwords = DefaultStopwords();
  // When set, every variant is written there as annotated jsonl.
  std::optional<std::filesystem::path> output_dir;
};

// One variant per grid value, sweeping one axis at a time with the other two
// held at options.base and only that axis's annotator enabled. Metrics:
//   r_ke: macro keyword F1 under kKeywordF1 (rows ranked best first), else
//         mean keywords per dialogue;
//   t_rd: mean redundant utterances per dialogue;
//   r_ts: |mean boundaries - target| under kBoundaryCountTarget (ranked
//         smallest first), else mean boundaries per dialogue.
// Unranked rows keep grid order; ranking ties keep grid order too. Axis
// blocks appear as r_ke, t_rd, r_ts. Throws MissingBundle, MissingSummary
// (keyword F1 without summaries) or InvalidHParams.
std::vector<GridRow> GridSearch(const Corpus& corpus, const ScoreMap& bundles,
                                const Grid& grid, const GridOptions& options);

// Tab-separated: header "param\tvalue\tmetric\toutput_path", one row each.
std::string GridToTsv(const std::vector<GridRow>& rows);

}  // namespace dlgann

#endif  // DLGANN_HPARAMS_H_
