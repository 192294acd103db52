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
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "dlgann/error.h"
#include "dlgann/text.h"
#include "json.hpp"

namespace dlgann {
namespace {

using Json = nlohmann::json;

void CheckFinite(double v, const std::string& where) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kNonFiniteValue, "non-finite value in " + where);
  }
}

// Rewrites bare NaN / Infinity / -Infinity tokens (outside strings) into
// marker strings that the number reader maps back to non-finite values.
std::string QuoteNonFiniteLiterals(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) {
        out.push_back(line[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (std::string_view literal : {"-Infinity", "Infinity", "NaN"}) {
      if (line.substr(i, literal.size()) == literal) {
        out += "\"" + std::string(literal) + "\"";
        i += literal.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

double ReadNumber(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::kSchemaError, "expected a number in " + where);
}

int ReadInt(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    throw Error(ErrorCode::kSchemaError, "expected an integer in " + where);
  }
  return j.get<int>();
}

const Json& Field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw Error(ErrorCode::kSchemaError,
                std::string("missing field '") + name + "' in " + where);
  }
  return obj[name];
}

const Json& ArrayField(const Json& obj, const char* name, const std::string& where) {
  const Json& v = Field(obj, name, where);
  if (!v.is_array()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("field '") + name + "' must be an array in " + where);
  }
  return v;
}

std::vector<std::vector<double>> ReadEmbeddings(const Json& j, const std::string& where) {
  std::vector<std::vector<double>> out;
  for (const Json& row : ArrayField(j, "eos_embeddings", where)) {
    if (!row.is_array()) throw Error(ErrorCode::kSchemaError, "embedding row in " + where);
    std::vector<double> v;
    v.reserve(row.size());
    for (const Json& x : row) {
      // Stored as 32-bit decimals; narrowing recovers the written float.
      v.push_back(static_cast<double>(static_cast<float>(ReadNumber(x, where))));
    }
    out.push_back(std::move(v));
  }
  return out;
}

void CheckSchemaVersion(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaError, "record is not an object");
  const Json& schema = Field(j, "schema", "score record");
  if (!schema.is_number_integer() || schema.get<int>() != kScoreSchemaVersion) {
    throw Error(ErrorCode::kSchemaError,
                "unsupported schema " + schema.dump() + ", expected " +
                    std::to_string(kScoreSchemaVersion));
  }
}

std::string ReadContent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Calls fn(json) for every non-blank line.
template <typename Fn>
void ForEachJsonLine(std::string_view content, Fn fn) {
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (NormalizeWhitespace(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(QuoteNonFiniteLiterals(line));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    fn(j);
  }
}

ScoreBundle BundleFromJson(const Json& j) {
  CheckSchemaVersion(j);
  const Json& id = Field(j, "id", "score record");
  if (!id.is_string()) throw Error(ErrorCode::kSchemaError, "'id' must be a string");

  ScoreBundle bundle;
  bundle.dialogue_id = id.get<std::string>();
  const std::string where = "scores for '" + bundle.dialogue_id + "'";
  bundle.dim = ReadInt(Field(j, "dim", where), where + " dim");

  bundle.eos_embeddings = ReadEmbeddings(j, where);

  std::map<int, SubwordLossRecord> by_index;
  for (const Json& pair : ArrayField(j, "pairs", where)) {
    SubwordLossRecord rec;
    rec.response_index = ReadInt(Field(pair, "response_index", where), where);
    for (const Json& x : ArrayField(pair, "subword_losses", where)) {
      rec.subword_losses.push_back(ReadNumber(x, where));
    }
    for (const Json& span : ArrayField(pair, "word_spans", where)) {
      if (!span.is_array() || span.size() != 2) {
        throw Error(ErrorCode::kSchemaError, "word span must be [start, end] in " + where);
      }
      rec.word_spans.push_back(WordSpan{ReadInt(span[0], where), ReadInt(span[1], where)});
    }
    if (!by_index.emplace(rec.response_index, rec).second) {
      throw Error(ErrorCode::kSchemaError,
                  "duplicate response_index " + std::to_string(rec.response_index) +
                      " in " + where);
    }
  }
  const int n = bundle.num_utterances();
  for (const auto& [index, rec] : by_index) {
    if (index < 2 || index > n) {
      throw Error(ErrorCode::kSchemaError,
                  "response_index " + std::to_string(index) + " outside [2, " +
                      std::to_string(n) + "] in " + where);
    }
  }
  for (int i = 2; i <= n; ++i) {
    auto it = by_index.find(i);
    if (it == by_index.end()) {
      throw Error(ErrorCode::kMissingRecord,
                  "no loss record for response " + std::to_string(i) + " in " + where);
    }
    bundle.records.push_back(std::move(it->second));
  }
  ValidateBundle(bundle);
  return bundle;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001B3ULL;

uint64_t FnvMix(uint64_t h, std::string_view bytes) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

uint64_t FnvMix(uint64_t h, unsigned char byte) {
  h ^= byte;
  return h * kFnvPrime;
}

}  // namespace

std::vector<ContextResponsePair> BuildPairs(const Dialogue& dialogue) {
  if (dialogue.size() < 2) {
    throw Error(ErrorCode::kTooShort,
                "dialogue '" + dialogue.id + "' needs at least 2 utterances");
  }
  std::vector<ContextResponsePair> pairs;
  pairs.reserve(dialogue.size() - 1);
  for (int i = 2; i <= dialogue.size(); ++i) {
    pairs.push_back({i, dialogue.at(i - 1).words, dialogue.at(i).words});
  }
  return pairs;
}

std::vector<SequenceToken> BuildSequence(const Dialogue& dialogue) {
  std::vector<SequenceToken> tokens;
  for (const Utterance& u : dialogue.utterances) {
    for (const std::string& w : u.words) tokens.push_back({w, false});
    tokens.push_back({"", true});
  }
  return tokens;
}

void ValidateRecord(const SubwordLossRecord& record) {
  const std::string where = "record " + std::to_string(record.response_index);
  const int n = static_cast<int>(record.subword_losses.size());
  if (n < 1) {
    throw Error(ErrorCode::kSpanCoverageError, where + " has no EOS loss");
  }
  for (double v : record.subword_losses) {
    CheckFinite(v, where);
    if (v < 0.0) {
      throw Error(ErrorCode::kSpanCoverageError, where + " has a negative loss");
    }
  }
  int expected = 0;
  for (const WordSpan& span : record.word_spans) {
    if (span.begin != expected || span.end <= span.begin) {
      throw Error(ErrorCode::kSpanCoverageError,
                  where + ": span [" + std::to_string(span.begin) + ", " +
                      std::to_string(span.end) + ") does not continue at " +
                      std::to_string(expected));
    }
    expected = span.end;
  }
  if (expected != n - 1) {
    throw Error(ErrorCode::kSpanCoverageError,
                where + ": spans cover [0, " + std::to_string(expected) +
                    ") but " + std::to_string(n - 1) + " subwords precede EOS");
  }
}

std::vector<WordLoss> WordLosses(const SubwordLossRecord& record) {
  ValidateRecord(record);
  std::vector<WordLoss> out;
  out.reserve(record.word_spans.size());
  for (size_t j = 0; j < record.word_spans.size(); ++j) {
    const WordSpan& span = record.word_spans[j];
    double sum = 0.0;
    for (int t = span.begin; t < span.end; ++t) sum += record.subword_losses[t];
    out.push_back({static_cast<int>(j) + 1, sum / (span.end - span.begin)});
  }
  return out;
}

double UtteranceLoss(const SubwordLossRecord& record) {
  ValidateRecord(record);
  double sum = 0.0;
  for (double v : record.subword_losses) sum += v;
  return sum / static_cast<double>(record.subword_losses.size());
}

WordLossTable BuildWordLossTable(const ScoreBundle& bundle) {
  WordLossTable table;
  table.reserve(bundle.records.size());
  for (const SubwordLossRecord& rec : bundle.records) {
    table.push_back({rec.response_index, WordLosses(rec), UtteranceLoss(rec)});
  }
  return table;
}

void ValidateBundle(const ScoreBundle& bundle) {
  const std::string where = "scores for '" + bundle.dialogue_id + "'";
  if (bundle.dim <= 0) {
    throw Error(ErrorCode::kSchemaError, "dim must be positive in " + where);
  }
  const int n = bundle.num_utterances();
  if (n < 1) throw Error(ErrorCode::kSchemaError, "no embeddings in " + where);
  for (int i = 1; i <= n; ++i) {
    const auto& v = bundle.embedding(i);
    if (static_cast<int>(v.size()) != bundle.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding " + std::to_string(i) + " has length " +
                      std::to_string(v.size()) + ", dim is " +
                      std::to_string(bundle.dim) + " in " + where);
    }
    bool nonzero = false;
    for (double x : v) {
      CheckFinite(x, "embedding " + std::to_string(i) + " of " + where);
      nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) {
      throw Error(ErrorCode::kZeroEmbedding,
                  "embedding " + std::to_string(i) + " is zero in " + where);
    }
  }
  if (static_cast<int>(bundle.records.size()) != n - 1) {
    throw Error(ErrorCode::kMissingRecord,
                where + " has " + std::to_string(bundle.records.size()) +
                    " loss records for " + std::to_string(n) + " utterances");
  }
  for (int i = 2; i <= n; ++i) {
    const SubwordLossRecord& rec = bundle.record(i);
    if (rec.response_index != i) {
      throw Error(ErrorCode::kMissingRecord,
                  "no loss record for response " + std::to_string(i) + " in " + where);
    }
    try {
      ValidateRecord(rec);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
}

void CheckBundleMatches(const Dialogue& dialogue, const ScoreBundle& bundle) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kBundleMismatch, "dialogue '" + dialogue.id + "': " + what);
  };
  if (bundle.num_utterances() != dialogue.size()) {
    fail(std::to_string(bundle.num_utterances()) + " embeddings for " +
         std::to_string(dialogue.size()) + " utterances");
  }
  if (static_cast<int>(bundle.records.size()) != dialogue.size() - 1) {
    fail(std::to_string(bundle.records.size()) + " loss records for " +
         std::to_string(dialogue.size()) + " utterances");
  }
  for (int i = 2; i <= dialogue.size(); ++i) {
    const SubwordLossRecord& rec = bundle.records[i - 2];
    if (rec.response_index != i) fail("loss records out of order");
    if (rec.word_spans.size() != dialogue.at(i).words.size()) {
      fail("response " + std::to_string(i) + " has " +
           std::to_string(rec.word_spans.size()) + " word spans for " +
           std::to_string(dialogue.at(i).words.size()) + " words");
    }
  }
}

ScoreMap ParseScoresJsonl(std::string_view content) {
  ScoreMap bundles;
  ForEachJsonLine(content, [&](const Json& j) {
    ScoreBundle bundle = BundleFromJson(j);
    std::string id = bundle.dialogue_id;
    if (!bundles.emplace(id, std::move(bundle)).second) {
      throw Error(ErrorCode::kSchemaError, "duplicate score record for '" + id + "'");
    }
  });
  return bundles;
}

ScoreMap ImportScores(const std::filesystem::path& path) {
  return ParseScoresJsonl(ReadContent(path));
}

VectorMap ParseVectorsJsonl(std::string_view content) {
  VectorMap vectors;
  ForEachJsonLine(content, [&](const Json& j) {
    CheckSchemaVersion(j);
    const Json& id = Field(j, "id", "vector record");
    if (!id.is_string()) throw Error(ErrorCode::kSchemaError, "'id' must be a string");
    // Validate through a bundle shell so the embedding checks stay in one place.
    ScoreBundle shell;
    shell.dialogue_id = id.get<std::string>();
    const std::string where = "vectors for '" + shell.dialogue_id + "'";
    shell.dim = ReadInt(Field(j, "dim", where), where + " dim");
    shell.eos_embeddings = ReadEmbeddings(j, where);
    for (int i = 2; i <= shell.num_utterances(); ++i) {
      shell.records.push_back({i, {0.0}, {}});
    }
    ValidateBundle(shell);
    if (!vectors.emplace(shell.dialogue_id, std::move(shell.eos_embeddings)).second) {
      throw Error(ErrorCode::kSchemaError,
                  "duplicate vector record for '" + shell.dialogue_id + "'");
    }
  });
  return vectors;
}

VectorMap ImportVectors(const std::filesystem::path& path) {
  return ParseVectorsJsonl(ReadContent(path));
}

std::string BundleToJsonLine(const ScoreBundle& bundle) {
  std::string out = "{\"schema\":" + std::to_string(kScoreSchemaVersion);
  out += ",\"id\":" + Json(bundle.dialogue_id).dump();
  out += ",\"dim\":" + std::to_string(bundle.dim);
  out += ",\"eos_embeddings\":[";
  for (size_t i = 0; i < bundle.eos_embeddings.size(); ++i) {
    if (i > 0) out += ",";
    out += "[";
    const auto& v = bundle.eos_embeddings[i];
    for (size_t k = 0; k < v.size(); ++k) {
      if (k > 0) out += ",";
      out += FormatFloat(static_cast<float>(v[k]));
    }
    out += "]";
  }
  out += "],\"pairs\":[";
  for (size_t r = 0; r < bundle.records.size(); ++r) {
    const SubwordLossRecord& rec = bundle.records[r];
    if (r > 0) out += ",";
    out += "{\"response_index\":" + std::to_string(rec.response_index);
    out += ",\"subword_losses\":[";
    for (size_t t = 0; t < rec.subword_losses.size(); ++t) {
      if (t > 0) out += ",";
      out += FormatDouble(rec.subword_losses[t]);
    }
    out += "],\"word_spans\":[";
    for (size_t s = 0; s < rec.word_spans.size(); ++s) {
      if (s > 0) out += ",";
      out += "[" + std::to_string(rec.word_spans[s].begin) + "," +
             std::to_string(rec.word_spans[s].end) + "]";
    }
    out += "]}";
  }
  out += "]}";
  return out;
}

std::string ExportScores(const ScoreMap& bundles) {
  std::string out;
  for (const auto& [id, bundle] : bundles) out += BundleToJsonLine(bundle) + "\n";
  return out;
}

ScoreBundle OracleScore(const Dialogue& dialogue, uint64_t seed, int dim) {
  if (dialogue.size() < 2) {
    throw Error(ErrorCode::kTooShort,
                "dialogue '" + dialogue.id + "' needs at least 2 utterances");
  }
  ScoreBundle bundle;
  bundle.dialogue_id = dialogue.id;
  bundle.dim = dim;

  uint64_t state = FnvMix(kFnvOffset, std::to_string(seed));
  for (const Utterance& u : dialogue.utterances) {
    for (const std::string& w : u.words) {
      state = FnvMix(FnvMix(state, w), 0x1F);
    }
    state = FnvMix(state, 0x1E);

    std::vector<double> v(dim);
    double norm = 0.0;
    for (int k = 0; k < dim; ++k) {
      const uint64_t bits = SplitMix64(state ^ SplitMix64(static_cast<uint64_t>(k)));
      v[k] = static_cast<double>(bits >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      norm += v[k] * v[k];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      v[0] = 1.0;
      norm = 1.0;
    }
    for (double& x : v) x = static_cast<double>(static_cast<float>(x / norm));
    bundle.eos_embeddings.push_back(std::move(v));
  }

  for (int i = 2; i <= dialogue.size(); ++i) {
    SubwordLossRecord rec;
    rec.response_index = i;
    const auto& words = dialogue.at(i).words;
    for (size_t j = 0; j < words.size(); ++j) {
      rec.subword_losses.push_back(static_cast<double>(Utf8Length(words[j])));
      rec.word_spans.push_back({static_cast<int>(j), static_cast<int>(j) + 1});
    }
    rec.subword_losses.push_back(1.0);
    bundle.records.push_back(std::move(rec));
  }
  return bundle;
}

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors with different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroEmbedding, "cosine of a zero vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace dlgann
