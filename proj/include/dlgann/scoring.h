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

#ifndef DLGANN_SCORING_H_
#define DLGANN_SCORING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dlgann/corpus.h"

namespace dlgann {

// Adjacent utterances (u_{i-1}, u_i); speakers are not part of either side.
struct ContextResponsePair {
  int response_index = 0;  // i in [2, |D|]
  std::vector<std::string> context_words;
  std::vector<std::string> response_words;
};

struct SequenceToken {
  std::string text;  // empty for EOS
  bool is_eos = false;

  bool operator==(const SequenceToken&) const = default;
};

// Half-open range of subword positions covering one response word.
struct WordSpan {
  int begin = 0;
  int end = 0;

  bool operator==(const WordSpan&) const = default;
};

// Teacher-forced losses for one response. The last entry is the EOS loss and
// belongs to no word; word_spans tile [0, size - 1) in order.
struct SubwordLossRecord {
  int response_index = 0;
  std::vector<double> subword_losses;
  std::vector<WordSpan> word_spans;

  bool operator==(const SubwordLossRecord&) const = default;
};

struct ScoreBundle {
  std::string dialogue_id;
  int dim = 0;
  // records[k] holds response index k + 2.
  std::vector<SubwordLossRecord> records;
  // eos_embeddings[k] is the EOS state after utterance k + 1. Values are
  // float-representable; arithmetic on them is done in double.
  std::vector<std::vector<double>> eos_embeddings;

  int num_utterances() const { return static_cast<int>(eos_embeddings.size()); }
  const SubwordLossRecord& record(int response_index) const {
    return records.at(response_index - 2);
  }
  // 1-based.
  const std::vector<double>& embedding(int utterance_index) const {
    return eos_embeddings.at(utterance_index - 1);
  }

  bool operator==(const ScoreBundle&) const = default;
};

struct WordLoss {
  int word_index = 0;  // 1-based
  double loss = 0.0;

  bool operator==(const WordLoss&) const = default;
};

struct UtteranceLosses {
  int index = 0;
  std::vector<WordLoss> words;
  double utterance_loss = 0.0;
};

using WordLossTable = std::vector<UtteranceLosses>;

inline constexpr int kScoreSchemaVersion = 1;

// Throws TooShort when |D| < 2.
std::vector<ContextResponsePair> BuildPairs(const Dialogue& dialogue);

// Words of every utterance, each utterance closed by an EOS token.
std::vector<SequenceToken> BuildSequence(const Dialogue& dialogue);

// Throws SpanCoverageError or NonFiniteValue.
void ValidateRecord(const SubwordLossRecord& record);

// Mean subword loss per word, in word order.
std::vector<WordLoss> WordLosses(const SubwordLossRecord& record);

// Mean over every scored position, the EOS included.
double UtteranceLoss(const SubwordLossRecord& record);

WordLossTable BuildWordLossTable(const ScoreBundle& bundle);

// Internal consistency: records for exactly 2..N where N is the embedding
// count, uniform dimension, finite values, no zero vector.
// Throws SchemaError, MissingRecord, DimensionMismatch, NonFiniteValue,
// ZeroEmbedding or SpanCoverageError.
void ValidateBundle(const ScoreBundle& bundle);

// Shape agreement with the dialogue the bundle is applied to. Throws
// BundleMismatch.
void CheckBundleMatches(const Dialogue& dialogue, const ScoreBundle& bundle);

using ScoreMap = std::map<std::string, ScoreBundle>;

// Score jsonl, one object per dialogue:
// {"schema": 1, "id", "dim", "eos_embeddings", "pairs": [{"response_index",
// "subword_losses", "word_spans"}]}. Embeddings are written as 32-bit
// decimals. Python-style NaN/Infinity literals are recognised so that they
// surface as NonFiniteValue rather than a parse failure.
ScoreMap ParseScoresJsonl(std::string_view content);
ScoreMap ImportScores(const std::filesystem::path& path);
std::string BundleToJsonLine(const ScoreBundle& bundle);
std::string ExportScores(const ScoreMap& bundles);

// Vector files share the score schema but only eos_embeddings is read;
// "pairs" may be absent. Embeddings are validated as in ValidateBundle.
using VectorMap = std::map<std::string, std::vector<std::vector<double>>>;
VectorMap ParseVectorsJsonl(std::string_view content);
VectorMap ImportVectors(const std::filesystem::path& path);

// Deterministic stand-in for a language model. Each word is one subword
// whose loss is its character count; EOS loss is 1. The EOS embedding after
// utterance i is a unit vector hashed from (seed, words of u_1..u_i).
// Throws TooShort.
ScoreBundle OracleScore(const Dialogue& dialogue, uint64_t seed, int dim = 16);

double Cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dlgann

#endif  // DLGANN_SCORING_H_
