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

#include "dlgann/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "dlgann/error.h"
#include "dlgann/text.h"
#include "json.hpp"

namespace dlgann {
namespace {

using Json = nlohmann::ordered_json;

bool IsTag(std::string_view token) {
  return token == kKeyTag || token == kRedundantTag || token == kTopicTag;
}

bool StartsWithToken(std::string_view line, std::string_view token) {
  return line.substr(0, token.size()) == token &&
         (line.size() == token.size() || line[token.size()] == ' ');
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits a whitespace-normalized utterance line at its first ": ".
std::pair<std::string, std::string> SplitSpeaker(const std::string& line) {
  const size_t sep = line.find(": ");
  if (sep == std::string::npos || sep == 0) {
    throw Error(ErrorCode::kMalformedLine,
                "expected 'Speaker: text', got '" + line + "'");
  }
  return {line.substr(0, sep), line.substr(sep + 2)};
}

void AddRecord(Corpus& corpus, std::unordered_set<std::string>& seen,
               const std::string& id, const std::string& dialogue_text,
               const std::optional<std::string>& summary) {
  if (!seen.insert(id).second) {
    throw Error(ErrorCode::kDuplicateId, "duplicate dialogue id '" + id + "'");
  }
  CorpusRecord record;
  try {
    record.dialogue = ParseDialogue(dialogue_text, id);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + id + "': " + std::string(e.what()));
  }
  if (summary) record.summary = ReferenceSummary::FromText(id, *summary);
  corpus.push_back(std::move(record));
}

std::vector<int> IndexList(const std::set<int>& indices) {
  return {indices.begin(), indices.end()};
}

}  // namespace

std::vector<std::string> Dialogue::Speakers() const {
  std::vector<std::string> speakers;
  for (const Utterance& u : utterances) {
    if (std::find(speakers.begin(), speakers.end(), u.speaker) == speakers.end()) {
      speakers.push_back(u.speaker);
    }
  }
  return speakers;
}

ReferenceSummary ReferenceSummary::FromText(std::string dialogue_id,
                                            std::string text) {
  ReferenceSummary summary;
  summary.dialogue_id = std::move(dialogue_id);
  summary.sentences = SplitSentences(text);
  summary.text = std::move(text);
  return summary;
}

std::vector<std::string> KeywordAnnotation::Surfaces() const {
  std::vector<std::string> surfaces;
  surfaces.reserve(ranked.size());
  for (const Keyword& k : ranked) surfaces.push_back(k.surface);
  return surfaces;
}

bool AnnotatedDialogue::operator==(const AnnotatedDialogue& other) const {
  auto rd = [](const AnnotatedDialogue& a) {
    return a.redundant ? a.redundant->indices : std::set<int>{};
  };
  auto ts = [](const AnnotatedDialogue& a) {
    return a.topics ? a.topics->boundaries : std::set<int>{};
  };
  return dialogue == other.dialogue && keywords == other.keywords &&
         rd(*this) == rd(other) && ts(*this) == ts(other);
}

Dialogue ParseDialogue(std::string_view text, std::string id) {
  Dialogue dialogue;
  dialogue.id = std::move(id);
  for (const std::string& raw_line : SplitLines(text)) {
    const std::string line = NormalizeWhitespace(raw_line);
    if (line.empty()) continue;
    auto [speaker, rest] = SplitSpeaker(line);
    Utterance u;
    u.index = dialogue.size() + 1;
    u.speaker = std::move(speaker);
    u.words = SplitWhitespace(rest);
    u.raw_text = std::move(rest);
    if (u.words.empty()) {
      throw Error(ErrorCode::kMalformedLine, "empty utterance in '" + line + "'");
    }
    dialogue.utterances.push_back(std::move(u));
  }
  if (dialogue.utterances.empty()) {
    throw Error(ErrorCode::kEmptyDialogue, "dialogue '" + dialogue.id + "' has no lines");
  }
  return dialogue;
}

std::string RenderDialogue(const Dialogue& dialogue) {
  std::string out;
  for (const Utterance& u : dialogue.utterances) {
    if (!out.empty()) out.push_back('\n');
    out += u.speaker + ": " + Join(u.words, " ");
  }
  return out;
}

Corpus ParseCorpusJsonl(std::string_view content) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  int line_no = 0;
  for (const std::string& line : SplitLines(content)) {
    ++line_no;
    if (NormalizeWhitespace(line).empty()) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("dialogue") ||
        !record["dialogue"].is_string()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_no) +
                      ": need string fields 'id' and 'dialogue'");
    }
    std::optional<std::string> summary;
    if (record.contains("summary") && !record["summary"].is_null()) {
      if (!record["summary"].is_string()) {
        throw Error(ErrorCode::kMalformedRecord,
                    "line " + std::to_string(line_no) + ": 'summary' must be a string");
      }
      summary = record["summary"].get<std::string>();
    }
    AddRecord(corpus, seen, record["id"].get<std::string>(),
              record["dialogue"].get<std::string>(), summary);
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  if (format == CorpusFormat::kJsonl) return ParseCorpusJsonl(ReadFile(path));

  std::error_code ec;
  if (!std::filesystem::is_directory(path, ec)) {
    throw Error(ErrorCode::kIoError, path.string() + " is not a directory");
  }
  constexpr std::string_view kSummarySuffix = ".summary.txt";
  std::map<std::string, std::filesystem::path> dialogues;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > kSummarySuffix.size() &&
        name.ends_with(kSummarySuffix)) {
      continue;
    }
    if (name.size() > 4 && name.ends_with(".txt")) {
      dialogues.emplace(name.substr(0, name.size() - 4), entry.path());
    }
  }
  Corpus corpus;
  std::unordered_set<std::string> seen;
  for (const auto& [id, file] : dialogues) {
    std::optional<std::string> summary;
    const auto summary_path = path / (id + std::string(kSummarySuffix));
    if (std::filesystem::exists(summary_path)) summary = ReadFile(summary_path);
    AddRecord(corpus, seen, id, ReadFile(file), summary);
  }
  return corpus;
}

std::string CorpusToJsonl(const Corpus& corpus) {
  std::string out;
  for (const CorpusRecord& record : corpus) {
    Json j;
    j["id"] = record.dialogue.id;
    j["dialogue"] = RenderDialogue(record.dialogue);
    if (record.summary) j["summary"] = record.summary->text;
    out += j.dump() + "\n";
  }
  return out;
}

void ValidateAnnotated(const AnnotatedDialogue& annotated) {
  const Dialogue& d = annotated.dialogue;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kTagGrammarError, "dialogue '" + d.id + "': " + what);
  };
  if (d.utterances.empty()) fail("no utterances");
  for (const Utterance& u : d.utterances) {
    if (u.speaker.empty() || u.speaker != NormalizeWhitespace(u.speaker) ||
        u.speaker.find(": ") != std::string::npos) {
      fail("invalid speaker '" + u.speaker + "'");
    }
    for (const std::string& token : SplitWhitespace(u.speaker)) {
      if (IsTag(token)) fail("tag inside speaker '" + u.speaker + "'");
    }
    if (u.words.empty()) fail("empty utterance " + std::to_string(u.index));
    for (const std::string& w : u.words) {
      if (IsTag(w) || w.empty() || SplitWhitespace(w).size() != 1) {
        fail("invalid word '" + w + "' in utterance " + std::to_string(u.index));
      }
    }
  }
  auto check_range = [&](const std::set<int>& indices, const char* what) {
    for (int i : indices) {
      if (i < 1 || i > d.size()) {
        fail(std::string(what) + " index " + std::to_string(i) + " out of range");
      }
    }
  };
  if (annotated.redundant) check_range(annotated.redundant->indices, "redundant");
  if (annotated.topics) check_range(annotated.topics->boundaries, "topic");
  if (annotated.keywords) {
    if (annotated.keywords->speakers != d.Speakers()) {
      fail("keyword speakers must list the dialogue speakers in order");
    }
    for (const Keyword& k : annotated.keywords->ranked) {
      if (IsTag(k.surface) || k.surface.empty() ||
          SplitWhitespace(k.surface).size() != 1 ||
          k.surface != NormalizeWhitespace(k.surface)) {
        fail("invalid keyword '" + k.surface + "'");
      }
    }
  }
}

std::string RenderAnnotated(const AnnotatedDialogue& annotated) {
  std::string out;
  for (const Utterance& u : annotated.dialogue.utterances) {
    if (!out.empty()) out.push_back('\n');
    if (annotated.topics && annotated.topics->boundaries.count(u.index)) {
      out += std::string(kTopicTag) + " ";
    }
    out += u.speaker + ": ";
    if (annotated.redundant && annotated.redundant->indices.count(u.index)) {
      out += std::string(kRedundantTag) + " ";
    }
    out += Join(u.words, " ");
  }
  if (annotated.keywords) {
    out += "\n" + std::string(kKeyTag);
    for (const std::string& s : annotated.keywords->speakers) out += " " + s;
    for (const Keyword& k : annotated.keywords->ranked) out += " " + k.surface;
  }
  return out;
}

AnnotatedDialogue ParseAnnotated(std::string_view text, std::string id) {
  AnnotatedDialogue result;
  result.dialogue.id = std::move(id);
  std::set<int> redundant;
  std::set<int> topics;
  std::optional<std::string> key_line;
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kTagGrammarError, what);
  };

  for (const std::string& raw_line : SplitLines(text)) {
    const std::string line = NormalizeWhitespace(raw_line);
    if (line.empty()) continue;
    if (key_line) fail("'" + std::string(kKeyTag) + "' line must be the last line");
    if (StartsWithToken(line, kKeyTag)) {
      key_line = line.substr(kKeyTag.size());
      continue;
    }
    std::string rest = line;
    const int index = result.dialogue.size() + 1;
    if (StartsWithToken(rest, kTopicTag)) {
      topics.insert(index);
      rest = NormalizeWhitespace(rest.substr(kTopicTag.size()));
    }
    for (std::string_view tag : {kTopicTag, kRedundantTag, kKeyTag}) {
      if (StartsWithToken(rest, tag)) {
        fail("misplaced '" + std::string(tag) + "' in line '" + line + "'");
      }
    }
    auto [speaker, body] = SplitSpeaker(rest);
    for (const std::string& token : SplitWhitespace(speaker)) {
      if (IsTag(token)) fail("stray tag in speaker of line '" + line + "'");
    }
    Utterance u;
    u.index = index;
    u.speaker = std::move(speaker);
    u.words = SplitWhitespace(body);
    if (!u.words.empty() && u.words.front() == kRedundantTag) {
      redundant.insert(index);
      u.words.erase(u.words.begin());
    }
    if (u.words.empty()) {
      throw Error(ErrorCode::kMalformedLine, "empty utterance in '" + line + "'");
    }
    for (const std::string& w : u.words) {
      if (IsTag(w)) fail("stray '" + w + "' in line '" + line + "'");
    }
    u.raw_text = Join(u.words, " ");
    result.dialogue.utterances.push_back(std::move(u));
  }
  if (result.dialogue.utterances.empty()) fail("no utterance lines");

  // A render without annotations of a kind cannot be told apart from an
  // empty annotation, so empty sets parse as absent.
  if (!redundant.empty()) result.redundant = RedundancyAnnotation{redundant};
  if (!topics.empty()) result.topics = TopicAnnotation{topics};
  if (key_line) {
    KeywordAnnotation keywords;
    keywords.speakers = result.dialogue.Speakers();
    std::string_view rest = *key_line;
    for (const std::string& s : keywords.speakers) {
      const std::string expected = " " + s;
      if (rest.substr(0, expected.size()) != expected ||
          (rest.size() > expected.size() && rest[expected.size()] != ' ')) {
        fail("'" + std::string(kKeyTag) + "' line must start with speaker '" + s + "'");
      }
      rest.remove_prefix(expected.size());
    }
    for (std::string& w : SplitWhitespace(rest)) {
      if (IsTag(w)) fail("stray '" + w + "' on keyword line");
      keywords.ranked.push_back(Keyword{std::move(w), 0.0, 0, 0});
    }
    result.keywords = std::move(keywords);
  }
  return result;
}

std::string AnnotatedToJsonLine(const AnnotatedDialogue& annotated) {
  Json j;
  j["id"] = annotated.dialogue.id;
  j["dialogue"] = RenderDialogue(annotated.dialogue);
  if (annotated.keywords) {
    j["speakers"] = annotated.keywords->speakers;
    j["keywords"] = annotated.keywords->Surfaces();
  }
  if (annotated.redundant) j["redundant"] = IndexList(annotated.redundant->indices);
  if (annotated.topics) j["topics"] = IndexList(annotated.topics->boundaries);
  j["text"] = RenderAnnotated(annotated);
  return j.dump();
}

AnnotatedDialogue AnnotatedFromJsonLine(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  try {
    AnnotatedDialogue a;
    a.dialogue = ParseDialogue(j.at("dialogue").get<std::string>(),
                               j.at("id").get<std::string>());
    if (j.contains("keywords")) {
      KeywordAnnotation k;
      k.speakers = j.contains("speakers")
                       ? j["speakers"].get<std::vector<std::string>>()
                       : a.dialogue.Speakers();
      for (auto& s : j["keywords"].get<std::vector<std::string>>()) {
        k.ranked.push_back(Keyword{std::move(s), 0.0, 0, 0});
      }
      a.keywords = std::move(k);
    }
    if (j.contains("redundant")) {
      auto v = j["redundant"].get<std::vector<int>>();
      a.redundant = RedundancyAnnotation{{v.begin(), v.end()}};
    }
    if (j.contains("topics")) {
      auto v = j["topics"].get<std::vector<int>>();
      a.topics = TopicAnnotation{{v.begin(), v.end()}};
    }
    ValidateAnnotated(a);
    return a;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
}

}  // namespace dlgann
