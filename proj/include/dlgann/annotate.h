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

#ifndef DLGANN_ANNOTATE_H_
#define DLGANN_ANNOTATE_H_

#include <string>
#include <string_view>

#include "dlgann/corpus.h"
#include "dlgann/scoring.h"

namespace dlgann {

struct HParams {
  double r_ke = 15.0;  // percent of candidate words kept as keywords
  double t_rd = 0.99;  // cosine threshold, strictly exceeded to mark redundancy
  double r_ts = 15.0;  // percent of scored utterances opening a topic

  static HParams Samsum() { return {15.0, 0.99, 15.0}; }
  static HParams Ami() { return {4.0, 0.95, 5.0}; }

  bool operator==(const HParams&) const = default;
};

// Throws InvalidHParams unless r_ke, r_ts in [0, 100] and t_rd in (0, 1].
void ValidateHParams(const HParams& h);

// Tasks as a small bit set.
struct TaskSet {
  bool keywords = false;
  bool redundancy = false;
  bool topics = false;

  static TaskSet All() { return {true, true, true}; }
  // Comma-separated subset of {ke, rd, ts}; empty string is the empty set.
  // Throws InvalidHParams on unknown names.
  static TaskSet Parse(std::string_view spec);
  std::string ToString() const;

  bool operator==(const TaskSet&) const = default;
};

// floor(percent * n / 100 + 0.5), clamped to [0, n].
int SelectionCount(double percent, int n);

// Ranks every response word except each utterance's first word by loss
// (descending; ties by earlier position) and keeps the top SelectionCount
// instances, then drops case-insensitive repeats. Speakers of the whole
// dialogue are attached in order of first appearance.
// Throws BundleMismatch.
KeywordAnnotation ExtractKeywords(const Dialogue& dialogue,
                                  const ScoreBundle& bundle, double r_ke);

// Scans i = |D| down to 2 and marks u_i when cos(h_{i-1}, h_i) > t_rd.
// Every adjacent pair is compared regardless of earlier detections.
// Throws BundleMismatch or ZeroEmbedding.
RedundancyAnnotation DetectRedundant(const Dialogue& dialogue,
                                     const ScoreBundle& bundle, double t_rd);

// Marks the SelectionCount(r_ts, |D| - 1) utterances with the highest
// utterance loss (ties to the smaller index) as topic starts.
// Throws BundleMismatch.
TopicAnnotation SegmentTopics(const Dialogue& dialogue, const ScoreBundle& bundle,
                              double r_ts);

// Runs the requested annotators independently on the same bundle.
AnnotatedDialogue Annotate(const Dialogue& dialogue, const ScoreBundle& bundle,
                           const HParams& hparams, const TaskSet& tasks);

}  // namespace dlgann

#endif  // DLGANN_ANNOTATE_H_
