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
#include <map>
#include <set>
#include <stdexcept>

namespace dlgann {
namespace {

std::set<std::string> NormalizedSet(const std::vector<std::string>& tokens,
                                    const WordSet& stopwords) {
  std::set<std::string> out;
  for (const std::string& t : tokens) {
    if (!stopwords.count(t)) out.insert(t);
  }
  return out;
}

std::map<std::vector<std::string>, size_t> NGramCounts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, size_t> counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

PRF PRF::FromCounts(size_t matched, size_t candidate_total, size_t reference_total) {
  PRF out;
  if (candidate_total > 0) {
    out.precision = static_cast<double>(matched) / static_cast<double>(candidate_total);
  }
  if (reference_total > 0) {
    out.recall = static_cast<double>(matched) / static_cast<double>(reference_total);
  }
  if (matched > 0) {
    out.f1 = 2.0 * static_cast<double>(matched) /
             static_cast<double>(candidate_total + reference_total);
  }
  return out;
}

std::string_view RougeVariantName(RougeVariant variant) {
  switch (variant) {
    case RougeVariant::kRouge1: return "rouge-1";
    case RougeVariant::kRouge2: return "rouge-2";
    case RougeVariant::kRougeL: return "rouge-l";
  }
  return "rouge";
}

PRF KeywordPRF(const std::vector<std::string>& extracted,
               const ReferenceSummary& summary, const WordSet& stopwords) {
  std::vector<std::string> extracted_tokens;
  for (const std::string& surface : extracted) {
    for (std::string& t : NormalizedTokens(surface)) {
      extracted_tokens.push_back(std::move(t));
    }
  }
  const auto e = NormalizedSet(extracted_tokens, stopwords);
  const auto g = NormalizedSet(NormalizedTokens(summary.text), stopwords);
  size_t matched = 0;
  for (const std::string& w : e) matched += g.count(w);
  return PRF::FromCounts(matched, e.size(), g.size());
}

RougeScore RougeN(std::string_view candidate, std::string_view reference, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("ROUGE-N supports n = 1 or 2");
  const auto cand = NGramCounts(NormalizedTokens(candidate), n);
  const auto ref = NGramCounts(NormalizedTokens(reference), n);
  size_t cand_total = 0, ref_total = 0, matched = 0;
  for (const auto& [gram, count] : cand) cand_total += count;
  for (const auto& [gram, count] : ref) {
    ref_total += count;
    auto it = cand.find(gram);
    if (it != cand.end()) matched += std::min(count, it->second);
  }
  return {n == 1 ? RougeVariant::kRouge1 : RougeVariant::kRouge2,
          PRF::FromCounts(matched, cand_total, ref_total)};
}

size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore RougeL(std::string_view candidate, std::string_view reference) {
  const auto cand = NormalizedTokens(candidate);
  const auto ref = NormalizedTokens(reference);
  return {RougeVariant::kRougeL,
          PRF::FromCounts(LcsLength(cand, ref), cand.size(), ref.size())};
}

PRF MacroAverage(const std::vector<PRF>& scores) {
  PRF out;
  if (scores.empty()) return out;
  for (const PRF& s : scores) {
    out.precision += s.precision;
    out.recall += s.recall;
    out.f1 += s.f1;
  }
  const double n = static_cast<double>(scores.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

}  // namespace dlgann
