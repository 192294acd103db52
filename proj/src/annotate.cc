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

#include "dlgann/annotate.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dlgann/error.h"
#include "dlgann/text.h"

namespace dlgann {
namespace {

void CheckInputs(const Dialogue& dialogue, const ScoreBundle& bundle) {
  if (dialogue.size() < 2) {
    throw Error(ErrorCode::kTooShort,
                "dialogue '" + dialogue.id + "' needs at least 2 utterances");
  }
  CheckBundleMatches(dialogue, bundle);
}

void CheckPercent(double value, const char* name) {
  if (!(value >= 0.0 && value <= 100.0)) {
    throw Error(ErrorCode::kInvalidHParams,
                std::string(name) + " must be in [0, 100], got " + FormatDouble(value));
  }
}

void CheckThreshold(double value) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidHParams,
                "t_rd must be in (0, 1], got " + FormatDouble(value));
  }
}

}  // namespace

void ValidateHParams(const HParams& h) {
  CheckPercent(h.r_ke, "r_ke");
  CheckThreshold(h.t_rd);
  CheckPercent(h.r_ts, "r_ts");
}

TaskSet TaskSet::Parse(std::string_view spec) {
  TaskSet tasks;
  std::string normalized = AsciiLower(spec);
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  for (const std::string& name : SplitWhitespace(normalized)) {
    if (name == "ke") {
      tasks.keywords = true;
    } else if (name == "rd") {
      tasks.redundancy = true;
    } else if (name == "ts") {
      tasks.topics = true;
    } else {
      throw Error(ErrorCode::kInvalidHParams, "unknown task '" + name + "'");
    }
  }
  return tasks;
}

std::string TaskSet::ToString() const {
  std::vector<std::string> names;
  if (keywords) names.push_back("ke");
  if (redundancy) names.push_back("rd");
  if (topics) names.push_back("ts");
  return Join(names, ",");
}

int SelectionCount(double percent, int n) {
  const double k = std::floor(percent * static_cast<double>(n) / 100.0 + 0.5);
  return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(n)));
}

KeywordAnnotation ExtractKeywords(const Dialogue& dialogue,
                                  const ScoreBundle& bundle, double r_ke) {
  CheckPercent(r_ke, "r_ke");
  CheckInputs(dialogue, bundle);

  std::vector<Keyword> pool;
  for (int i = 2; i <= dialogue.size(); ++i) {
    const Utterance& u = dialogue.at(i);
    for (const WordLoss& wl : WordLosses(bundle.record(i))) {
      if (wl.word_index == 1) continue;
      pool.push_back({u.words[wl.word_index - 1], wl.loss, i, wl.word_index});
    }
  }
  const int k = SelectionCount(r_ke, static_cast<int>(pool.size()));
  auto by_rank = [](const Keyword& a, const Keyword& b) {
    if (a.loss != b.loss) return a.loss > b.loss;
    if (a.utterance_index != b.utterance_index) {
      return a.utterance_index < b.utterance_index;
    }
    return a.word_index < b.word_index;
  };
  std::partial_sort(pool.begin(), pool.begin() + k, pool.end(), by_rank);

  KeywordAnnotation result;
  result.speakers = dialogue.Speakers();
  std::unordered_set<std::string> seen;
  for (int j = 0; j < k; ++j) {
    if (seen.insert(AsciiLower(pool[j].surface)).second) {
      result.ranked.push_back(std::move(pool[j]));
    }
  }
  return result;
}

RedundancyAnnotation DetectRedundant(const Dialogue& dialogue,
                                     const ScoreBundle& bundle, double t_rd) {
  CheckThreshold(t_rd);
  CheckInputs(dialogue, bundle);
  RedundancyAnnotation result;
  for (int i = dialogue.size(); i >= 2; --i) {
    if (Cosine(bundle.embedding(i - 1), bundle.embedding(i)) > t_rd) {
      result.indices.insert(i);
    }
  }
  return result;
}

TopicAnnotation SegmentTopics(const Dialogue& dialogue, const ScoreBundle& bundle,
                              double r_ts) {
  CheckPercent(r_ts, "r_ts");
  CheckInputs(dialogue, bundle);
  struct Candidate {
    double loss;
    int index;
  };
  std::vector<Candidate> pool;
  for (int i = 2; i <= dialogue.size(); ++i) {
    pool.push_back({UtteranceLoss(bundle.record(i)), i});
  }
  const int k = SelectionCount(r_ts, dialogue.size() - 1);
  std::partial_sort(pool.begin(), pool.begin() + k, pool.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.loss != b.loss) return a.loss > b.loss;
                      return a.index < b.index;
                    });
  TopicAnnotation result;
  for (int j = 0; j < k; ++j) result.boundaries.insert(pool[j].index);
  return result;
}

AnnotatedDialogue Annotate(const Dialogue& dialogue, const ScoreBundle& bundle,
                           const HParams& hparams, const TaskSet& tasks) {
  ValidateHParams(hparams);
  AnnotatedDialogue result;
  result.dialogue = dialogue;
  if (tasks.keywords) result.keywords = ExtractKeywords(dialogue, bundle, hparams.r_ke);
  if (tasks.redundancy) {
    result.redundant = DetectRedundant(dialogue, bundle, hparams.t_rd);
  }
  if (tasks.topics) result.topics = SegmentTopics(dialogue, bundle, hparams.r_ts);
  return result;
}

}  // namespace dlgann
