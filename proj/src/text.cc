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

#include "dlgann/text.h"

#include <array>
#include <charconv>
#include <fstream>

#include "dlgann/error.h"

namespace dlgann {
namespace {

bool IsBlank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool IsSpace(char c) { return IsBlank(c) || c == '\n' || c == '\f' || c == '\v'; }

bool IsAsciiPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) ||
         (u >= 91 && u <= 96) || (u >= 123 && u <= 126);
}

// NLTK's English list with apostrophes removed, so that "don't" matches the
// normalized token "dont".
constexpr std::array kStopwords = {
    "i",        "me",      "my",       "myself",  "we",       "our",
    "ours",     "ourselves", "you",    "youre",   "youve",    "youll",
    "youd",     "your",    "yours",    "yourself", "yourselves", "he",
    "him",      "his",     "himself",  "she",     "shes",     "her",
    "hers",     "herself", "it",       "its",     "itself",   "they",
    "them",     "their",   "theirs",   "themselves", "what",  "which",
    "who",      "whom",    "this",     "that",    "thatll",   "these",
    "those",    "am",      "is",       "are",     "was",      "were",
    "be",       "been",    "being",    "have",    "has",      "had",
    "having",   "do",      "does",     "did",     "doing",    "a",
    "an",       "the",     "and",      "but",     "if",       "or",
    "because",  "as",      "until",    "while",   "of",       "at",
    "by",       "for",     "with",     "about",   "against",  "between",
    "into",     "through", "during",   "before",  "after",    "above",
    "below",    "to",      "from",     "up",      "down",     "in",
    "out",      "on",      "off",      "over",    "under",    "again",
    "further",  "then",    "once",     "here",    "there",    "when",
    "where",    "why",     "how",      "all",     "any",      "both",
    "each",     "few",     "more",     "most",    "other",    "some",
    "such",     "no",      "nor",      "not",     "only",     "own",
    "same",     "so",      "than",     "too",     "very",     "s",
    "t",        "can",     "will",     "just",    "don",      "dont",
    "should",   "shouldve", "now",     "d",       "ll",       "m",
    "o",        "re",      "ve",       "y",       "ain",      "aren",
    "arent",    "couldn",  "couldnt",  "didn",    "didnt",    "doesn",
    "doesnt",   "hadn",    "hadnt",    "hasn",    "hasnt",    "haven",
    "havent",   "isn",     "isnt",     "ma",      "mightn",   "mightnt",
    "mustn",    "mustnt",  "needn",    "neednt",  "shan",     "shant",
    "shouldn",  "shouldnt", "wasn",    "wasnt",   "weren",    "werent",
    "won",      "wont",    "wouldn",   "wouldnt",
};

}  // namespace

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string StripPunctuation(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!IsAsciiPunct(c)) out.push_back(c);
  }
  return out;
}

std::vector<std::string> NormalizedTokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string& word : SplitWhitespace(text)) {
    std::string token = StripPunctuation(AsciiLower(word));
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> sentences;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && i + 1 < text.size() &&
        IsSpace(text[i + 1])) {
      std::string sentence = NormalizeWhitespace(text.substr(start, i + 1 - start));
      if (!sentence.empty()) sentences.push_back(std::move(sentence));
      start = i + 1;
    }
  }
  std::string tail = NormalizeWhitespace(text.substr(start));
  if (!tail.empty()) sentences.push_back(std::move(tail));
  return sentences;
}

size_t Utf8Length(std::string_view text) {
  size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

const WordSet& DefaultStopwords() {
  static const WordSet* words = new WordSet(kStopwords.begin(), kStopwords.end());
  return *words;
}

WordSet LoadStopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open stopword file " + path);
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    std::string word = NormalizeWhitespace(line);
    if (word.empty() || word[0] == '#') continue;
    word = StripPunctuation(AsciiLower(word));
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

std::string FormatDouble(double value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string FormatFloat(float value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace dlgann
