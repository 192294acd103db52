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

#include "dlgann/scoring.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace dlgann {
namespace {

using testing::ErrorOf;
using testing::MakeDialogue;
using Words = std::vector<std::string>;

SubwordLossRecord Record(std::vector<double> losses, std::vector<WordSpan> spans, int index = 2) {
  return SubwordLossRecord{index, std::move(losses), std::move(spans)};
}

TEST_CASE("BuildPairs pairs adjacent utterances") {
  const Dialogue d = MakeDialogue({{"A", "hi"}, {"B", "hello there"}, {"A", "bye"}});
  const auto pairs = BuildPairs(d);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].response_index == 2);
  CHECK(pairs[0].context_words == Words{"hi"});
  CHECK(pairs[0].response_words == Words{"hello", "there"});
  CHECK(pairs[1].response_index == 3);
  CHECK(pairs[1].context_words == Words{"hello", "there"});

  CHECK(BuildPairs(MakeDialogue({{"A", "x"}, {"B", "y"}})).size() == 1);
  std::vector<std::pair<std::string, std::string>> lines(11, {"A", "w"});
  CHECK(BuildPairs(MakeDialogue(lines)).size() == 10);
  CHECK(ErrorOf([] { BuildPairs(MakeDialogue({{"A", "x"}})); }) == ErrorCode::kTooShort);
}

TEST_CASE("BuildSequence closes each utterance with EOS") {
  const Dialogue d = MakeDialogue({{"A", "hi"}, {"B", "hello there"}});
  const std::vector<SequenceToken> expected = {
      {"hi", false}, {"", true}, {"hello", false}, {"there", false}, {"", true}};
  CHECK(BuildSequence(d) == expected);
}

TEST_CASE("WordLosses averages subwords per span") {
  const auto rec = Record({2.0, 4.0, 1.0, 0.5}, {{0, 2}, {2, 3}});
  const std::vector<WordLoss> expected = {{1, 3.0}, {2, 1.0}};
  CHECK(WordLosses(rec) == expected);

  const auto single = Record({2.5, 0.1}, {{0, 1}});
  CHECK(WordLosses(single) == std::vector<WordLoss>{{1, 2.5}});
}

TEST_CASE("UtteranceLoss includes the EOS loss") {
  CHECK(UtteranceLoss(Record({2.0, 4.0, 1.0, 0.5}, {{0, 2}, {2, 3}})) == 1.875);
  CHECK(UtteranceLoss(Record({0.0, 0.0, 0.0}, {{0, 1}, {1, 2}})) == 0.0);
  CHECK(UtteranceLoss(Record({3.0, 1.0}, {{0, 1}})) == 2.0);
}

TEST_CASE("ValidateRecord rejects bad spans and values") {
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2, 3, 4}, {{0, 1}, {2, 3}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2, 3, 4}, {{0, 2}, {1, 3}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2, 3}, {{0, 2}, {2, 3}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2, 3, 4}, {{0, 1}, {1, 2}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2}, {{0, 0}, {0, 1}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({-1, 2}, {{0, 1}})); }) ==
        ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([] { ValidateRecord(Record({NAN, 2}, {{0, 1}})); }) ==
        ErrorCode::kNonFiniteValue);
  CHECK(ErrorOf([] { ValidateRecord(Record({1, 2, 3, 4}, {{0, 2}, {2, 3}})); }) ==
        std::nullopt);
}

TEST_CASE("Word losses recover known word values") {
  // Each word's subwords all carry the word's value, so averaging must give
  // it back; the utterance loss is the subword-count-weighted mean.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pieces(1, 4), words(1, 8);
  std::uniform_real_distribution<double> value(0.0, 12.0);
  for (int t = 0; t < 500; ++t) {
    SubwordLossRecord rec;
    rec.response_index = 2;
    std::vector<double> truth;
    double total = 0.0;
    const int w = words(rng);
    for (int j = 0; j < w; ++j) {
      const double v = value(rng);
      const int p = pieces(rng);
      const int begin = static_cast<int>(rec.subword_losses.size());
      for (int k = 0; k < p; ++k) rec.subword_losses.push_back(v);
      rec.word_spans.push_back({begin, begin + p});
      truth.push_back(v);
      total += v * p;
    }
    const double eos = value(rng);
    rec.subword_losses.push_back(eos);
    total += eos;
    const auto got = WordLosses(rec);
    REQUIRE(got.size() == truth.size());
    for (size_t j = 0; j < truth.size(); ++j) {
      CHECK(got[j].word_index == static_cast<int>(j) + 1);
      CHECK(std::abs(got[j].loss - truth[j]) <= 1e-9);
    }
    const double expected = total / rec.subword_losses.size();
    CHECK(std::abs(UtteranceLoss(rec) - expected) <= 1e-9);
    const auto [lo, hi] = std::minmax_element(rec.subword_losses.begin(), rec.subword_losses.end());
    CHECK(UtteranceLoss(rec) >= *lo - 1e-12);
    CHECK(UtteranceLoss(rec) <= *hi + 1e-12);
  }
}

TEST_CASE("Cosine") {
  CHECK(Cosine({1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(Cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(Cosine({1, 1}, {-2, -2}) == doctest::Approx(-1.0));
  CHECK(ErrorOf([] { Cosine({1, 0}, {1, 0, 0}); }) == ErrorCode::kDimensionMismatch);
  CHECK(ErrorOf([] { Cosine({0, 0}, {1, 0}); }) == ErrorCode::kZeroEmbedding);
}

const char* kTwoBundles =
    R"({"schema": 1, "id": "a", "dim": 2, "eos_embeddings": [[1, 0], [0.6, 0.8]],)"
    R"( "pairs": [{"response_index": 2, "subword_losses": [2, 4, 1, 0.5], "word_spans": [[0, 2], [2, 3]]}]})"
    "\n"
    R"({"schema": 1, "id": "b", "dim": 2, "eos_embeddings": [[1, 0], [1, 0], [0, 1]],)"
    R"( "pairs": [{"response_index": 3, "subword_losses": [1, 1], "word_spans": [[0, 1]]},)"
    R"( {"response_index": 2, "subword_losses": [3, 1], "word_spans": [[0, 1]]}]})"
    "\n";

TEST_CASE("ParseScoresJsonl reads bundles") {
  const ScoreMap m = ParseScoresJsonl(kTwoBundles);
  REQUIRE(m.size() == 2);
  const ScoreBundle& a = m.at("a");
  CHECK(a.dim == 2);
  CHECK(a.num_utterances() == 2);
  CHECK(a.record(2).subword_losses == std::vector<double>{2, 4, 1, 0.5});
  const ScoreBundle& b = m.at("b");
  REQUIRE(b.records.size() == 2);
  CHECK(b.records[0].response_index == 2);
  CHECK(b.records[1].response_index == 3);
  CHECK(ParseScoresJsonl(ExportScores(m)) == m);
}

std::string Line(const std::string& body) { return "{\"schema\": 1, \"id\": \"a\", " + body + "}\n"; }

TEST_CASE("ParseScoresJsonl errors") {
  const std::string pair = R"("pairs": [{"response_index": 2, "subword_losses": [1, 1], "word_spans": [[0, 1]]}])";
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 3, "eos_embeddings": [[1, 0], [0, 1]], )" + pair));
        }) == ErrorCode::kDimensionMismatch);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 2, "eos_embeddings": [[1, 0], [NaN, 1]], )" + pair));
        }) == ErrorCode::kNonFiniteValue);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 2, "eos_embeddings": [[1, 0], [Infinity, 1]], )" + pair));
        }) == ErrorCode::kNonFiniteValue);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 2, "eos_embeddings": [[1, 0], [0, 0]], )" + pair));
        }) == ErrorCode::kZeroEmbedding);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 2, "eos_embeddings": [[1, 0], [0, 1], [1, 1]], )" + pair));
        }) == ErrorCode::kMissingRecord);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(Line(R"("dim": 2, "eos_embeddings": [[1, 0], [0, 1]], "pairs": [)"
                                R"({"response_index": 2, "subword_losses": [1, 1, 1], "word_spans": [[0, 1]]}])"));
        }) == ErrorCode::kSpanCoverageError);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(R"({"id": "a", "dim": 2, "eos_embeddings": [[1, 0], [0, 1]], )" + pair + "}");
        }) == ErrorCode::kSchemaError);
  CHECK(ErrorOf([&] {
          ParseScoresJsonl(R"({"schema": 2, "id": "a", "dim": 2, "eos_embeddings": [[1, 0], [0, 1]], )" +
                           pair + "}");
        }) == ErrorCode::kSchemaError);
  CHECK(ErrorOf([&] { ParseScoresJsonl(Line(R"("dim": 2, )" + pair)); }) ==
        ErrorCode::kSchemaError);
  CHECK(ErrorOf([] { ParseScoresJsonl("{oops\n"); }) == ErrorCode::kSchemaError);
  const std::string ok = Line(R"("dim": 2, "eos_embeddings": [[1, 0], [0, 1]], )" + pair);
  CHECK(ErrorOf([&] { ParseScoresJsonl(ok + ok); }) == ErrorCode::kSchemaError);
}

TEST_CASE("ImportScores reports missing files") {
  CHECK(ErrorOf([] { ImportScores("/nonexistent/scores.jsonl"); }) == ErrorCode::kIoError);
}

TEST_CASE("CheckBundleMatches") {
  const ScoreMap m = ParseScoresJsonl(kTwoBundles);
  const Dialogue a = MakeDialogue({{"A", "hi"}, {"B", "hello there"}}, "a");
  CHECK(ErrorOf([&] { CheckBundleMatches(a, m.at("a")); }) == std::nullopt);
  const Dialogue longer = MakeDialogue({{"A", "hi"}, {"B", "hello there"}, {"A", "x"}}, "a");
  CHECK(ErrorOf([&] { CheckBundleMatches(longer, m.at("a")); }) == ErrorCode::kBundleMismatch);
  const Dialogue wrong_words = MakeDialogue({{"A", "hi"}, {"B", "hello"}}, "a");
  CHECK(ErrorOf([&] { CheckBundleMatches(wrong_words, m.at("a")); }) ==
        ErrorCode::kBundleMismatch);
}

TEST_CASE("Export and import round trip") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    ScoreMap m;
    const int count = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < count; ++i) {
      Dialogue d = testing::RandomDialogue(rng, 2, 9, "d" + std::to_string(i));
      ScoreBundle b = testing::RandomBundle(rng, d, std::uniform_int_distribution<int>(1, 8)(rng));
      for (auto& rec : b.records) {
        for (double& x : rec.subword_losses) x += std::uniform_real_distribution<double>(0, 1)(rng);
      }
      m[d.id] = b;
    }
    const std::string text = ExportScores(m);
    const ScoreMap back = ParseScoresJsonl(text);
    CHECK(back == m);
    CHECK(ExportScores(back) == text);
  }
}

TEST_CASE("ParseVectorsJsonl") {
  const VectorMap m = ParseVectorsJsonl(
      R"({"schema": 1, "id": "v", "dim": 2, "eos_embeddings": [[1, 0], [0, 2]]})" "\n");
  REQUIRE(m.count("v") == 1);
  CHECK(m.at("v").size() == 2);
  CHECK(ErrorOf([] {
          ParseVectorsJsonl(R"({"schema": 1, "id": "v", "dim": 2, "eos_embeddings": [[1, 0], [0]]})");
        }) == ErrorCode::kDimensionMismatch);
  CHECK(ErrorOf([] {
          ParseVectorsJsonl(R"({"schema": 1, "id": "v", "dim": 2, "eos_embeddings": [[0, 0]]})");
        }) == ErrorCode::kZeroEmbedding);
}

TEST_CASE("OracleScore is deterministic and well formed") {
  const Dialogue d = MakeDialogue({{"A", "hello"}, {"B", "hi there"}, {"A", "café time"}});
  const ScoreBundle b = OracleScore(d, 42);
  CHECK(b == OracleScore(d, 42));
  CHECK(ErrorOf([&] { ValidateBundle(b); }) == std::nullopt);
  CHECK(ErrorOf([&] { CheckBundleMatches(d, b); }) == std::nullopt);
  CHECK(b.dim == 16);
  CHECK(b.record(2).subword_losses == std::vector<double>{2, 5, 1});
  CHECK(b.record(3).subword_losses == std::vector<double>{4, 4, 1});
  for (const auto& v : b.eos_embeddings) {
    double norm = 0;
    for (double x : v) {
      norm += x * x;
      CHECK(static_cast<double>(static_cast<float>(x)) == x);
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(b.eos_embeddings != OracleScore(d, 43).eos_embeddings);
  CHECK(ParseScoresJsonl(BundleToJsonLine(b)).at(d.id) == b);
}

TEST_CASE("OracleScore embeddings depend only on the prefix") {
  const Dialogue d1 = MakeDialogue({{"A", "hello"}, {"B", "hi there"}, {"A", "one"}}, "x");
  const Dialogue d2 = MakeDialogue({{"C", "hello"}, {"D", "hi there"}, {"A", "two"}}, "y");
  const ScoreBundle b1 = OracleScore(d1, 1), b2 = OracleScore(d2, 1);
  CHECK(b1.embedding(1) == b2.embedding(1));
  CHECK(b1.embedding(2) == b2.embedding(2));
  CHECK(b1.embedding(3) != b2.embedding(3));
  // Word boundaries matter: "ab c" and "a bc" hash differently.
  const ScoreBundle b3 = OracleScore(MakeDialogue({{"A", "ab c"}, {"B", "x"}}), 1);
  const ScoreBundle b4 = OracleScore(MakeDialogue({{"A", "a bc"}, {"B", "x"}}), 1);
  CHECK(b3.embedding(1) != b4.embedding(1));
  CHECK(ErrorOf([] { OracleScore(MakeDialogue({{"A", "x"}}), 1); }) == ErrorCode::kTooShort);
}

}  // namespace
}  // namespace dlgann
