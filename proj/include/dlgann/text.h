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

#ifndef DLGANN_TEXT_H_
#define DLGANN_TEXT_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dlgann {

using WordSet = std::unordered_set<std::string>;

// Collapses runs of spaces and tabs to one space and strips both ends
// (including a trailing '\r').
std::string NormalizeWhitespace(std::string_view text);

std::vector<std::string> SplitWhitespace(std::string_view text);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

std::string AsciiLower(std::string_view text);

// Removes every ASCII punctuation character. Non-ASCII bytes are kept.
std::string StripPunctuation(std::string_view text);

// Evaluation tokenizer: whitespace split, lowercase, punctuation stripped,
// empty tokens dropped.
std::vector<std::string> NormalizedTokens(std::string_view text);

// Splits on '.', '!' or '?' followed by whitespace. The trailing remainder,
// if non-blank, is the last sentence. Sentences are whitespace-normalized.
std::vector<std::string> SplitSentences(std::string_view text);

// Number of UTF-8 code points.
size_t Utf8Length(std::string_view text);

// Fixed English stopword list shipped with the tool (version 1). Entries are
// lowercase and punctuation-free so they compare against NormalizedTokens.
const WordSet& DefaultStopwords();
inline constexpr std::string_view kStopwordListVersion = "en-v1";

// One word per line; blank lines and lines starting with '#' are ignored.
// Words are lowercased and punctuation-stripped on load.
WordSet LoadStopwords(const std::string& path);

// Shortest decimal text that round-trips through the same type.
std::string FormatDouble(double value);
std::string FormatFloat(float value);

}  // namespace dlgann

#endif  // DLGANN_TEXT_H_
