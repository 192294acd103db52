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

#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "dlgann/annotate.h"
#include "dlgann/text.h"
#include "test_util.h"

namespace dlgann {
namespace {

using testing::ErrorOf;
using testing::MakeDialogue;
using Words = std::vector<std::string>;

KeywordAnnotation Keywords(const Dialogue& d, const Words& surfaces) {
  KeywordAnnotation k;
  k.speakers = d.Speakers();
  for (const auto& s : surfaces) k.ranked.push_back(Keyword{s, 0.0, 0, 0});
  return k;
}

TEST_CASE("ParseDialogue splits speaker and words") {
  const Dialogue d = ParseDialogue("Amanda: hi\nJerry: hello there", "d1");
  REQUIRE(d.size() == 2);
  CHECK(d.at(1).index == 1);
  CHECK(d.at(1).speaker == "Amanda");
  CHECK(d.at(1).words == Words{"hi"});
  CHECK(d.at(2).speaker == "Jerry");
  CHECK(d.at(2).words == Words{"hello", "there"});
  CHECK(d.Speakers() == Words{"Amanda", "Jerry"});
}

TEST_CASE("ParseDialogue keeps every non-blank line") {
  std::string text;
  for (int i = 0; i < 11; ++i) text += (i % 2 ? "B: line " : "A: line ") + std::to_string(i) + "\n\n";
  const Dialogue d = ParseDialogue(text, "x");
  CHECK(d.size() == 11);
  for (int i = 1; i <= 11; ++i) CHECK(d.at(i).index == i);
}

TEST_CASE("ParseDialogue errors") {
  CHECK(ErrorOf([] { ParseDialogue("Amanda hi", "x"); }) == ErrorCode::kMalformedLine);
  CHECK(ErrorOf([] { ParseDialogue(": hi", "x"); }) == ErrorCode::kMalformedLine);
  CHECK(ErrorOf([] { ParseDialogue("Amanda:   ", "x"); }) == ErrorCode::kMalformedLine);
  CHECK(ErrorOf([] { ParseDialogue("", "x"); }) == ErrorCode::kEmptyDialogue);
  CHECK(ErrorOf([] { ParseDialogue("\n  \n", "x"); }) == ErrorCode::kEmptyDialogue);
}

TEST_CASE("ParseDialogue splits at the first colon-space only") {
  const Dialogue d = ParseDialogue("Mary Ann: note: bring cake", "x");
  CHECK(d.at(1).speaker == "Mary Ann");
  CHECK(d.at(1).words == Words{"note:", "bring", "cake"});
}

TEST_CASE("Speakers lists first appearances in order") {
  const Dialogue d = MakeDialogue({{"B", "x"}, {"A", "y"}, {"B", "z"}, {"C", "w"}});
  CHECK(d.Speakers() == Words{"B", "A", "C"});
}

TEST_CASE("RenderDialogue is the inverse of ParseDialogue") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Dialogue d = testing::RandomDialogue(rng, 1, 10);
    CHECK(ParseDialogue(RenderDialogue(d), d.id) == d);
  }
}

TEST_CASE("ReferenceSummary splits sentences") {
  const auto s = ReferenceSummary::FromText("d", "Amanda baked cookies. Jerry will come.");
  CHECK(s.sentences.size() == 2);
}

TEST_CASE("LoadCorpus jsonl") {
  testing::TempDir dir;
  const auto path = dir.Write(
      "c.jsonl",
      R"({"id": "a", "dialogue": "A: hi\nB: hello", "summary": "A greets B."})" "\n"
      "\n"
      R"({"id": "b", "dialogue": "A: one\nB: two\nA: three"})" "\n");
  const Corpus corpus = LoadCorpus(path, CorpusFormat::kJsonl);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].dialogue.id == "a");
  CHECK(corpus[0].summary.has_value());
  CHECK(corpus[0].summary->text == "A greets B.");
  CHECK(corpus[1].dialogue.size() == 3);
  CHECK_FALSE(corpus[1].summary.has_value());
  CHECK(ParseCorpusJsonl(CorpusToJsonl(corpus)).size() == 2);
}

TEST_CASE("LoadCorpus errors") {
  testing::TempDir dir;
  const auto dup = dir.Write("dup.jsonl",
                             R"({"id": "a", "dialogue": "A: hi"})" "\n"
                             R"({"id": "a", "dialogue": "A: hey"})" "\n");
  CHECK(ErrorOf([&] { LoadCorpus(dup, CorpusFormat::kJsonl); }) == ErrorCode::kDuplicateId);
  const auto bad = dir.Write("bad.jsonl", "{not json\n");
  CHECK(ErrorOf([&] { LoadCorpus(bad, CorpusFormat::kJsonl); }) == ErrorCode::kMalformedRecord);
  const auto no_id = dir.Write("noid.jsonl", R"({"dialogue": "A: hi"})" "\n");
  CHECK(ErrorOf([&] { LoadCorpus(no_id, CorpusFormat::kJsonl); }) ==
        ErrorCode::kMalformedRecord);
  const auto bad_line = dir.Write("line.jsonl", R"({"id": "a", "dialogue": "no speaker"})" "\n");
  CHECK(ErrorOf([&] { LoadCorpus(bad_line, CorpusFormat::kJsonl); }) ==
        ErrorCode::kMalformedRecord);
  CHECK(ErrorOf([&] { LoadCorpus(dir.path() / "missing.jsonl", CorpusFormat::kJsonl); }) ==
        ErrorCode::kIoError);
}

TEST_CASE("LoadCorpus text-dir") {
  testing::TempDir dir;
  dir.Write("b.txt", "A: one\nB: two\n");
  dir.Write("a.txt", "A: hi\nB: hello\n");
  dir.Write("a.summary.txt", "A greets B.\n");
  const Corpus corpus = LoadCorpus(dir.path(), CorpusFormat::kTextDir);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].dialogue.id == "a");
  CHECK(corpus[0].summary.has_value());
  CHECK(corpus[1].dialogue.id == "b");
  CHECK_FALSE(corpus[1].summary.has_value());
}

TEST_CASE("RenderAnnotated keyword line") {
  AnnotatedDialogue a;
  a.dialogue = MakeDialogue({{"A", "hi"}, {"B", "party tonight"}});
  a.keywords = Keywords(a.dialogue, {"party"});
  CHECK(RenderAnnotated(a) == "A: hi\nB: party tonight\n#KEY# A B party");
}

TEST_CASE("RenderAnnotated redundancy and topic tags") {
  AnnotatedDialogue a;
  a.dialogue = MakeDialogue({{"A", "hi"}, {"B", "hello"}, {"A", "hi"}});
  a.redundant = RedundancyAnnotation{{3}};
  a.topics = TopicAnnotation{{2}};
  CHECK(RenderAnnotated(a) == "A: hi\n[TS] B: hello\nA: [RD] hi");

  a.redundant = RedundancyAnnotation{{2}};
  CHECK(RenderAnnotated(a) == "A: hi\n[TS] B: [RD] hello\nA: hi");

  AnnotatedDialogue first;
  first.dialogue = MakeDialogue({{"A", "hi"}});
  first.redundant = RedundancyAnnotation{{1}};
  CHECK(RenderAnnotated(first) == "A: [RD] hi");
}

TEST_CASE("RenderAnnotated without annotations equals the dialogue") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    AnnotatedDialogue a;
    a.dialogue = testing::RandomDialogue(rng, 1, 8);
    CHECK(RenderAnnotated(a) == RenderDialogue(a.dialogue));
  }
}

TEST_CASE("ParseAnnotated grammar errors") {
  CHECK(ErrorOf([] { ParseAnnotated("[RD] A: hi"); }) == ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("A: hi\n#KEY# A hi\nB: hello"); }) ==
        ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("A: hi [TS] there"); }) == ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("[TS] [TS] A: hi"); }) == ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("A: hi\n#KEY# B hi"); }) == ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("#KEY# A"); }) == ErrorCode::kTagGrammarError);
  CHECK(ErrorOf([] { ParseAnnotated("A: [RD]"); }) == ErrorCode::kMalformedLine);
}

TEST_CASE("ParseAnnotated reads tags back") {
  const AnnotatedDialogue a =
      ParseAnnotated("A: hi\n[TS] Mary Ann: [RD] hello there\n#KEY# A Mary Ann hello", "x");
  CHECK(a.dialogue.id == "x");
  CHECK(a.dialogue.at(2).speaker == "Mary Ann");
  CHECK(a.dialogue.at(2).words == Words{"hello", "there"});
  REQUIRE(a.redundant.has_value());
  CHECK(a.redundant->indices == std::set<int>{2});
  REQUIRE(a.topics.has_value());
  CHECK(a.topics->boundaries == std::set<int>{2});
  REQUIRE(a.keywords.has_value());
  CHECK(a.keywords->speakers == Words{"A", "Mary Ann"});
  CHECK(a.keywords->Surfaces() == Words{"hello"});
}

TEST_CASE("ValidateAnnotated rejects out-of-range indices and tag words") {
  AnnotatedDialogue a;
  a.dialogue = MakeDialogue({{"A", "hi"}, {"B", "hello"}});
  a.redundant = RedundancyAnnotation{{3}};
  CHECK(ErrorOf([&] { ValidateAnnotated(a); }) == ErrorCode::kTagGrammarError);
  a.redundant = RedundancyAnnotation{{0}};
  CHECK(ErrorOf([&] { ValidateAnnotated(a); }) == ErrorCode::kTagGrammarError);
  a.redundant.reset();
  a.keywords = Keywords(a.dialogue, {"#KEY#"});
  CHECK(ErrorOf([&] { ValidateAnnotated(a); }) == ErrorCode::kTagGrammarError);
  a.keywords = Keywords(a.dialogue, {"hello"});
  a.keywords->speakers = {"B", "A"};
  CHECK(ErrorOf([&] { ValidateAnnotated(a); }) == ErrorCode::kTagGrammarError);
}

TEST_CASE("Annotated text round trip") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const AnnotatedDialogue a = testing::RandomAnnotated(rng);
    ValidateAnnotated(a);
    const std::string text = RenderAnnotated(a);
    const AnnotatedDialogue back = ParseAnnotated(text, a.dialogue.id);
    CHECK(back == a);
    CHECK(RenderAnnotated(back) == text);
  }
}

TEST_CASE("Tag counts match annotation sizes") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 300; ++t) {
    const AnnotatedDialogue a = testing::RandomAnnotated(rng);
    const Words tokens = SplitWhitespace(RenderAnnotated(a));
    auto count = [&](std::string_view tag) {
      return static_cast<size_t>(std::count(tokens.begin(), tokens.end(), tag));
    };
    CHECK(count(kRedundantTag) == (a.redundant ? a.redundant->indices.size() : 0));
    CHECK(count(kTopicTag) == (a.topics ? a.topics->boundaries.size() : 0));
    CHECK(count(kKeyTag) == (a.keywords ? 1u : 0u));
  }
}

TEST_CASE("Annotated jsonl round trip") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const AnnotatedDialogue a = testing::RandomAnnotated(rng);
    const AnnotatedDialogue back = AnnotatedFromJsonLine(AnnotatedToJsonLine(a));
    CHECK(back == a);
    CHECK(back.redundant.has_value() == a.redundant.has_value());
    CHECK(back.topics.has_value() == a.topics.has_value());
  }
  CHECK(ErrorOf([] { AnnotatedFromJsonLine("{"); }) == ErrorCode::kSchemaError);
  CHECK(ErrorOf([] { AnnotatedFromJsonLine(R"({"id": "x"})"); }) == ErrorCode::kSchemaError);
  CHECK(ErrorOf([] {
          AnnotatedFromJsonLine(R"({"id": "x", "dialogue": "A: hi", "redundant": [4]})");
        }) == ErrorCode::kSchemaError);
}

}  // namespace
}  // namespace dlgann
