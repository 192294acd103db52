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

#ifndef DLGANN_CORPUS_H_
#define DLGANN_CORPUS_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dlgann {

struct Utterance {
  int index = 0;  // 1-based
  std::string speaker;
  std::vector<std::string> words;
  std::string raw_text;

  // raw_text is not compared: it equals the joined words up to whitespace.
  bool operator==(const Utterance& other) const {
    return index == other.index && speaker == other.speaker &&
           words == other.words;
  }
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;

  int size() const { return static_cast<int>(utterances.size()); }
  // 1-based access.
  const Utterance& at(int index) const { return utterances.at(index - 1); }
  // Distinct speakers in order of first appearance.
  std::vector<std::string> Speakers() const;

  bool operator==(const Dialogue&) const = default;
};

struct ReferenceSummary {
  std::string dialogue_id;
  std::string text;
  std::vector<std::string> sentences;

  static ReferenceSummary FromText(std::string dialogue_id, std::string text);
};

struct CorpusRecord {
  Dialogue dialogue;
  std::optional<ReferenceSummary> summary;
};

using Corpus = std::vector<CorpusRecord>;

struct Keyword {
  std::string surface;
  double loss = 0.0;
  int utterance_index = 0;
  int word_index = 0;  // 1-based within the utterance
};

struct KeywordAnnotation {
  std::vector<std::string> speakers;
  std::vector<Keyword> ranked;

  std::vector<std::string> Surfaces() const;

  // Compares what the tag grammar carries: speakers and keyword surfaces in
  // rank order. Losses and positions are scoring metadata and do not survive
  // a render/parse cycle.
  bool operator==(const KeywordAnnotation& other) const {
    return speakers == other.speakers && Surfaces() == other.Surfaces();
  }
};

struct RedundancyAnnotation {
  std::set<int> indices;
  bool operator==(const RedundancyAnnotation&) const = default;
};

struct TopicAnnotation {
  std::set<int> boundaries;  // utterance indices that open a new topic
  bool operator==(const TopicAnnotation&) const = default;
};

struct AnnotatedDialogue {
  Dialogue dialogue;
  std::optional<KeywordAnnotation> keywords;
  std::optional<RedundancyAnnotation> redundant;
  std::optional<TopicAnnotation> topics;

  // An empty redundancy or topic set renders no tags, so it compares equal
  // to an absent one.
  bool operator==(const AnnotatedDialogue& other) const;
};

enum class CorpusFormat { kJsonl, kTextDir };

inline constexpr std::string_view kKeyTag = "#KEY#";
inline constexpr std::string_view kRedundantTag = "[RD]";
inline constexpr std::string_view kTopicTag = "[TS]";

// Parses `Speaker: text` lines. Blank lines are skipped. Throws
// MalformedLine or EmptyDialogue.
Dialogue ParseDialogue(std::string_view text, std::string id);

// `Speaker: words` lines joined by '\n', without a trailing newline.
std::string RenderDialogue(const Dialogue& dialogue);

// jsonl: one {"id", "dialogue", "summary"?} object per line.
// text-dir: <id>.txt holds the dialogue, optional <id>.summary.txt the
// summary; records are ordered by id.
// Throws DuplicateId, IoError or MalformedRecord.
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);
Corpus ParseCorpusJsonl(std::string_view content);
std::string CorpusToJsonl(const Corpus& corpus);

// Checks annotation indices against the dialogue and rejects tag tokens
// inside speakers or words. Throws TagGrammarError.
void ValidateAnnotated(const AnnotatedDialogue& annotated);

// One line per utterance: "[TS] " if a topic starts here, "Speaker: ",
// "[RD] " if redundant, then the words. A present keyword annotation adds a
// final "#KEY# <speakers> <keywords>" line. No trailing newline.
std::string RenderAnnotated(const AnnotatedDialogue& annotated);

// Inverse of RenderAnnotated. Keyword entries come back with surfaces and
// zero loss/position. Throws TagGrammarError or MalformedLine.
AnnotatedDialogue ParseAnnotated(std::string_view text, std::string id = "");

// Annotated jsonl: {"id", "dialogue", "text", "speakers"?, "keywords"?,
// "redundant"?, "topics"?}. Fields of absent annotations are omitted.
std::string AnnotatedToJsonLine(const AnnotatedDialogue& annotated);
AnnotatedDialogue AnnotatedFromJsonLine(std::string_view line);

}  // namespace dlgann

#endif  // DLGANN_CORPUS_H_
