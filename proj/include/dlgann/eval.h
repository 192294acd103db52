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

#ifndef DLGANN_EVAL_H_
#define DLGANN_EVAL_H_

#include <string>
#include <string_view>
#include <vector>

#include "dlgann/corpus.h"
#include "dlgann/text.h"

namespace dlgann {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // F1 from match counts: 2m / (|candidate| + |reference|), which equals the
  // harmonic mean of P and R without its rounding.
  static PRF FromCounts(size_t matched, size_t candidate_total, size_t reference_total);
};

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

std::string_view RougeVariantName(RougeVariant variant);

struct RougeScore {
  RougeVariant variant = RougeVariant::kRouge1;
  PRF prf;
};

// Extracted surfaces and the reference summary are both normalized
// (lowercase, punctuation stripped, stopwords removed) and deduplicated to
// sets before comparison. An empty side scores 0 for the ratio it divides.
PRF KeywordPRF(const std::vector<std::string>& extracted,
               const ReferenceSummary& summary, const WordSet& stopwords);

// n-gram multiset overlap on NormalizedTokens. n must be 1 or 2.
RougeScore RougeN(std::string_view candidate, std::string_view reference, int n);

// Longest common subsequence over NormalizedTokens.
RougeScore RougeL(std::string_view candidate, std::string_view reference);

size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Unweighted mean of each field.
PRF MacroAverage(const std::vector<PRF>& scores);

}  // namespace dlgann

#endif  // DLGANN_EVAL_H_
