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

#include "dlgann/eval.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "dlgann/text.h"
#include "test_util.h"

namespace dlgann {
namespace {

using Words = std::vector<std::string>;

// Longest common subsequence by enumerating every subsequence of a.
size_t BruteForceLcs(const Words& a, const Words& b) {
  size_t best = 0;
  const size_t n = a.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Words sub;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    size_t j = 0;
    for (const auto& w : b) {
      if (j < sub.size() && sub[j] == w) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

TEST_CASE("PRF from counts") {
  const PRF p = PRF::FromCounts(1, 2, 3);
  CHECK(p.precision == doctest::Approx(0.5));
  CHECK(p.recall == doctest::Approx(1.0 / 3.0));
  CHECK(p.f1 == 0.4);
  const PRF zero = PRF::FromCounts(0, 0, 0);
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);
  CHECK(PRF::FromCounts(0, 3, 0).f1 == 0.0);
}

TEST_CASE("KeywordPRF on the worked example") {
  // Extracted {party, friday}; reference content words {party, cake, tomorrow}.
  const auto summary = ReferenceSummary::FromText("d", "The party has cake tomorrow.");
  const PRF p = KeywordPRF({"party", "Friday"}, summary, DefaultStopwords());
  CHECK(p.precision == doctest::Approx(0.5));
  CHECK(p.recall == doctest::Approx(1.0 / 3.0));
  CHECK(p.f1 == doctest::Approx(0.4));
}

TEST_CASE("KeywordPRF normalizes and deduplicates") {
  const auto summary = ReferenceSummary::FromText("d", "Party! party, Cake.");
  const PRF p = KeywordPRF({"PARTY", "party?", "cake", "the"}, summary, DefaultStopwords());
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f1 == 1.0);
  const PRF empty = KeywordPRF({}, summary, DefaultStopwords());
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(KeywordPRF({"x"}, summary, WordSet{}).f1 == 0.0);
}

TEST_CASE("ROUGE hand cases") {
  const RougeScore r1 = RougeN("the cat sat", "the cat ran", 1);
  CHECK(r1.variant == RougeVariant::kRouge1);
  CHECK(r1.prf.f1 == doctest::Approx(2.0 / 3.0));
  const RougeScore r2 = RougeN("the cat sat", "the cat ran", 2);
  CHECK(r2.prf.f1 == doctest::Approx(0.5));
  const RougeScore rl = RougeL("the cat sat", "the cat ran");
  CHECK(rl.prf.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(RougeVariantName(RougeVariant::kRouge1) == "rouge-1");
  CHECK(RougeVariantName(RougeVariant::kRouge2) == "rouge-2");
  CHECK(RougeVariantName(RougeVariant::kRougeL) == "rouge-l");
}

TEST_CASE("ROUGE-N counts clipped multiset overlap") {
  const RougeScore r = RougeN("a a a b", "a b b", 1);
  CHECK(r.prf.precision == doctest::Approx(2.0 / 4.0));
  CHECK(r.prf.recall == doctest::Approx(2.0 / 3.0));
  CHECK(RougeN("Hello, World!", "hello world", 2).prf.f1 == 1.0);
  CHECK(RougeN("", "hello world", 1).prf.f1 == 0.0);
  CHECK(RougeN("single", "single", 2).prf.f1 == 0.0);
  CHECK_THROWS_AS(RougeN("a", "a", 3), std::invalid_argument);
}

TEST_CASE("LcsLength matches exhaustive search") {
  std::mt19937_64 rng(31);
  const Words vocab = {"a", "b", "c", "d"};
  std::uniform_int_distribution<int> len(0, 10), pick(0, 3);
  for (int t = 0; t < 500; ++t) {
    Words a(len(rng)), b(len(rng));
    for (auto& w : a) w = vocab[pick(rng)];
    for (auto& w : b) w = vocab[pick(rng)];
    CHECK(LcsLength(a, b) == BruteForceLcs(a, b));
    CHECK(LcsLength(a, b) == LcsLength(b, a));
  }
}

TEST_CASE("ROUGE properties") {
  std::mt19937_64 rng(41);
  const Words vocab = {"the", "cat", "sat", "on", "mat", "dog", "ran"};
  std::uniform_int_distribution<int> len(0, 12), pick(0, 6);
  auto random_text = [&] {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s += vocab[pick(rng)] + " ";
    return s;
  };
  for (int t = 0; t < 300; ++t) {
    const std::string c = random_text(), r = random_text();
    for (const RougeScore& s : {RougeN(c, r, 1), RougeN(c, r, 2), RougeL(c, r)}) {
      CHECK(s.prf.precision >= 0.0);
      CHECK(s.prf.precision <= 1.0);
      CHECK(s.prf.recall >= 0.0);
      CHECK(s.prf.recall <= 1.0);
      CHECK(s.prf.f1 <= std::max(s.prf.precision, s.prf.recall) + 1e-12);
    }
    // Swapping candidate and reference swaps precision and recall.
    const RougeScore a = RougeL(c, r), b = RougeL(r, c);
    CHECK(a.prf.precision == doctest::Approx(b.prf.recall));
    CHECK(a.prf.f1 == doctest::Approx(b.prf.f1));
    if (!NormalizedTokens(c).empty()) {
      CHECK(RougeN(c, c, 1).prf.f1 == doctest::Approx(1.0));
      CHECK(RougeL(c, c).prf.f1 == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("MacroAverage") {
  const PRF m = MacroAverage({PRF{1, 1, 1}, PRF{0.5, 0.25, 0.4}});
  CHECK(m.precision == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.625));
  CHECK(m.f1 == doctest::Approx(0.7));
  const PRF empty = MacroAverage({});
  CHECK(empty.f1 == 0.0);
}

}  // namespace
}  // namespace dlgann
