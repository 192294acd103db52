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

#include "dlgann/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dlgann/baselines.h"
#include "dlgann/eval.h"
#include "dlgann/scoring.h"
#include "json.hpp"

namespace dlgann::cli {
namespace {

using Json = nlohmann::json;

// Raised inside a command for failures that are not library errors.
struct CommandError {
  int exit_code;
  std::string message;
};

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteOutput(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.output.empty() || config.output == "-") {
    out << content;
    return;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + config.output);
  file << content;
}

void Require(const std::string& value, const char* flag, int exit_code = kExitSchema) {
  if (value.empty()) {
    throw CommandError{exit_code, std::string("missing required input ") + flag};
  }
}

Corpus LoadInput(const RunConfig& config) {
  Require(config.input, "--input");
  CorpusFormat format = CorpusFormat::kJsonl;
  if (config.input_format == "text-dir" ||
      (config.input_format == "auto" && std::filesystem::is_directory(config.input))) {
    format = CorpusFormat::kTextDir;
  }
  return LoadCorpus(config.input, format);
}

WordSet LoadStopwordSet(const RunConfig& config) {
  return config.stopwords.empty() ? DefaultStopwords() : LoadStopwords(config.stopwords);
}

// Outcome of one record processed by a worker.
template <typename T>
struct Outcome {
  std::optional<T> value;
  int exit_code = kExitOk;
  std::string message;
};

// Applies fn to 0..n-1 on up to `workers` threads. Results keep input order.
template <typename T, typename Fn>
std::vector<Outcome<T>> ParallelMap(size_t n, int workers, Fn fn) {
  std::vector<Outcome<T>> results(n);
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i].value = fn(i);
      } catch (const Error& e) {
        results[i].exit_code = ExitCodeFor(e.code());
        results[i].message = e.what();
      } catch (const CommandError& e) {
        results[i].exit_code = e.exit_code;
        results[i].message = e.message;
      } catch (const std::exception& e) {
        results[i].exit_code = kExitFailure;
        results[i].message = e.what();
      }
    }
  };
  const size_t threads = std::min<size_t>(std::max(workers, 1), std::max<size_t>(n, 1));
  if (threads <= 1) {
    run();
    return results;
  }
  std::vector<std::thread> pool;
  for (size_t t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  return results;
}

// Reports every failed record and returns the first failure's exit code.
template <typename T>
int ReportFailures(const std::vector<Outcome<T>>& results, std::ostream& err) {
  int code = kExitOk;
  for (const auto& r : results) {
    if (r.exit_code == kExitOk) continue;
    err << "error: " << r.message << "\n";
    if (code == kExitOk) code = r.exit_code;
  }
  return code;
}

std::string RenderCorpus(const std::vector<Outcome<AnnotatedDialogue>>& results,
                         OutputFormat format) {
  std::string out;
  for (size_t i = 0; i < results.size(); ++i) {
    const AnnotatedDialogue& a = *results[i].value;
    if (format == OutputFormat::kJsonl) {
      out += AnnotatedToJsonLine(a) + "\n";
    } else {
      if (i > 0) out += "\n";
      out += RenderAnnotated(a) + "\n";
    }
  }
  return out;
}

// Runs fn and maps library errors to exit codes.
template <typename Fn>
int Guard(std::ostream& err, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const CommandError& e) {
    err << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

std::string TsvRow(const std::string& id, std::string_view metric, const PRF& prf) {
  return id + "\t" + std::string(metric) + "\t" + FormatDouble(prf.precision) + "\t" +
         FormatDouble(prf.recall) + "\t" + FormatDouble(prf.f1) + "\n";
}

constexpr std::string_view kTsvHeader = "id\tmetric\tprecision\trecall\tf1\n";
constexpr std::string_view kMacroId = "macro";

// Reads annotator or baseline output in either format. Text files carry no
// ids; their blank-line separated blocks align with the corpus order.
std::vector<AnnotatedDialogue> ReadAnnotatedFile(const std::string& path,
                                                 const Corpus& corpus) {
  const std::string content = ReadAll(path);
  const size_t first = content.find_first_not_of(" \t\r\n");
  std::vector<AnnotatedDialogue> out;
  if (first != std::string::npos && content[first] == '{') {
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
      if (NormalizeWhitespace(line).empty()) continue;
      out.push_back(AnnotatedFromJsonLine(line));
    }
    return out;
  }
  std::vector<std::string> blocks(1);
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (NormalizeWhitespace(line).empty()) {
      if (!blocks.back().empty()) blocks.emplace_back();
    } else {
      blocks.back() += line + "\n";
    }
  }
  if (blocks.back().empty()) blocks.pop_back();
  if (blocks.size() != corpus.size()) {
    throw Error(ErrorCode::kSchemaError,
                "annotated text has " + std::to_string(blocks.size()) +
                    " dialogues, corpus has " + std::to_string(corpus.size()));
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    try {
      out.push_back(ParseAnnotated(blocks[i], corpus[i].dialogue.id));
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError,
                  "dialogue '" + corpus[i].dialogue.id + "': " + e.what());
    }
  }
  return out;
}

std::map<std::string, const CorpusRecord*> IndexById(const Corpus& corpus) {
  std::map<std::string, const CorpusRecord*> index;
  for (const CorpusRecord& r : corpus) index[r.dialogue.id] = &r;
  return index;
}

const CorpusRecord& ReferenceFor(const std::map<std::string, const CorpusRecord*>& index,
                                 const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw CommandError{kExitIdMismatch, "no reference dialogue for id '" + id + "'"};
  }
  if (!it->second->summary) {
    throw Error(ErrorCode::kMissingSummary, "dialogue '" + id + "' has no reference summary");
  }
  return *it->second;
}

int KeywordPoolSize(const Dialogue& d) {
  int n = 0;
  for (int i = 2; i <= d.size(); ++i) n += static_cast<int>(d.at(i).words.size()) - 1;
  return n;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidHParams:
      return kExitInvalidHParams;
    case ErrorCode::kMissingBundle:
    case ErrorCode::kBundleMismatch:
    case ErrorCode::kTagCountMismatch:
      return kExitIdMismatch;
    case ErrorCode::kIoError:
      return kExitFailure;
    default:
      return kExitSchema;
  }
}

HParams RunConfig::ResolveHParams() const {
  HParams h;
  if (preset == "samsum") {
    h = HParams::Samsum();
  } else if (preset == "ami") {
    h = HParams::Ami();
  } else {
    throw Error(ErrorCode::kInvalidHParams, "unknown preset '" + preset + "'");
  }
  if (r_ke) h.r_ke = *r_ke;
  if (t_rd) h.t_rd = *t_rd;
  if (r_ts) h.r_ts = *r_ts;
  ValidateHParams(h);
  return h;
}

int EffectiveWorkers(int requested) {
  int workers = requested > 0 ? requested
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("DIALOG_ANNOTATE_WORKERS")) {
    const int limit = std::atoi(cap);
    if (limit > 0) workers = std::min(workers, limit);
  }
  return workers;
}

int CmdAnnotate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const HParams hparams = config.ResolveHParams();
    const TaskSet tasks = TaskSet::Parse(config.tasks);
    const Corpus corpus = LoadInput(config);
    Require(config.scores, "--scores");
    const ScoreMap scores = ImportScores(config.scores);

    auto results = ParallelMap<AnnotatedDialogue>(
        corpus.size(), EffectiveWorkers(config.workers), [&](size_t i) {
          const Dialogue& d = corpus[i].dialogue;
          auto it = scores.find(d.id);
          if (it == scores.end()) {
            throw CommandError{kExitIdMismatch, "no score record for dialogue '" + d.id + "'"};
          }
          return Annotate(d, it->second, hparams, tasks);
        });
    if (int code = ReportFailures(results, err); code != kExitOk) return code;
    WriteOutput(config, RenderCorpus(results, config.format), out);
    return kExitOk;
  });
}

int CmdEstimate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadInput(config);
    if (corpus.empty()) throw CommandError{kExitSchema, "corpus is empty"};
    const CorpusStats stats = ComputeStats(corpus, LoadStopwordSet(config));
    std::string table;
    table += "n\t" + std::to_string(stats.n) + "\n";
    table += "avg_turns\t" + FormatDouble(stats.avg_turns) + "\n";
    table += "avg_dialogue_tokens\t" + FormatDouble(stats.avg_dialogue_tokens) + "\n";
    table += "avg_summary_tokens\t" + FormatDouble(stats.avg_summary_tokens) + "\n";
    table += "avg_summary_tokens_no_stopwords\t" +
             FormatDouble(stats.avg_summary_tokens_no_stopwords) + "\n";
    table += "avg_summary_sentences\t" + FormatDouble(stats.avg_summary_sentences) + "\n";
    table += "r_ke_estimate\t" + FormatDouble(EstimateKeywordRatio(stats)) + "\n";
    table += "r_ts_estimate\t" + FormatDouble(EstimateTopicRatio(stats)) + "\n";
    WriteOutput(config, table, out);
    return kExitOk;
  });
}

int CmdEvalKeywords(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadInput(config);
    Require(config.annotated, "--annotated");
    const WordSet stopwords = LoadStopwordSet(config);
    const auto index = IndexById(corpus);
    std::string report(kTsvHeader);
    std::vector<PRF> scores;
    for (const AnnotatedDialogue& a : ReadAnnotatedFile(config.annotated, corpus)) {
      const CorpusRecord& ref = ReferenceFor(index, a.dialogue.id);
      if (!a.keywords) {
        throw Error(ErrorCode::kSchemaError,
                    "dialogue '" + a.dialogue.id + "' carries no keyword annotation");
      }
      std::vector<std::string> extracted = a.keywords->Surfaces();
      if (config.include_speakers) {
        extracted.insert(extracted.begin(), a.keywords->speakers.begin(),
                         a.keywords->speakers.end());
      }
      const PRF prf = KeywordPRF(extracted, *ref.summary, stopwords);
      scores.push_back(prf);
      report += TsvRow(a.dialogue.id, "keywords", prf);
    }
    report += TsvRow(std::string(kMacroId), "keywords", MacroAverage(scores));
    WriteOutput(config, report, out);
    return kExitOk;
  });
}

int CmdEvalRouge(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadInput(config);
    Require(config.predictions, "--predictions");
    const auto index = IndexById(corpus);
    std::vector<PRF> r1, r2, rl;
    std::string report(kTsvHeader);
    std::istringstream in(ReadAll(config.predictions));
    std::string line;
    while (std::getline(in, line)) {
      if (NormalizeWhitespace(line).empty()) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::kSchemaError, e.what());
      }
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
          !j.contains("summary") || !j["summary"].is_string()) {
        throw Error(ErrorCode::kSchemaError, "prediction needs string 'id' and 'summary'");
      }
      const std::string id = j["id"].get<std::string>();
      const std::string candidate = j["summary"].get<std::string>();
      const std::string& reference = ReferenceFor(index, id).summary->text;
      const RougeScore s1 = RougeN(candidate, reference, 1);
      const RougeScore s2 = RougeN(candidate, reference, 2);
      const RougeScore sl = RougeL(candidate, reference);
      for (const RougeScore& s : {s1, s2, sl}) {
        report += TsvRow(id, RougeVariantName(s.variant), s.prf);
      }
      r1.push_back(s1.prf);
      r2.push_back(s2.prf);
      rl.push_back(sl.prf);
    }
    report += TsvRow(std::string(kMacroId), RougeVariantName(RougeVariant::kRouge1),
                     MacroAverage(r1));
    report += TsvRow(std::string(kMacroId), RougeVariantName(RougeVariant::kRouge2),
                     MacroAverage(r2));
    report += TsvRow(std::string(kMacroId), RougeVariantName(RougeVariant::kRougeL),
                     MacroAverage(rl));
    WriteOutput(config, report, out);
    return kExitOk;
  });
}

int CmdBaseline(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadInput(config);
    const HParams hparams = config.ResolveHParams();
    const int workers = EffectiveWorkers(config.workers);
    std::vector<Outcome<AnnotatedDialogue>> results;

    if (config.baseline == "rule-rd") {
      Require(config.pos, "--pos");
      const PosMap pos = ImportPos(config.pos);
      results = ParallelMap<AnnotatedDialogue>(corpus.size(), workers, [&](size_t i) {
        const Dialogue& d = corpus[i].dialogue;
        auto it = pos.find(d.id);
        if (it == pos.end()) {
          throw CommandError{kExitIdMismatch, "no POS record for dialogue '" + d.id + "'"};
        }
        AnnotatedDialogue a{d, std::nullopt, RuleRedundant({d, it->second}), std::nullopt};
        return a;
      });
    } else if (config.baseline == "c99") {
      Require(config.vectors, "--vectors");
      const VectorMap vectors = ImportVectors(config.vectors);
      results = ParallelMap<AnnotatedDialogue>(corpus.size(), workers, [&](size_t i) {
        const Dialogue& d = corpus[i].dialogue;
        auto it = vectors.find(d.id);
        if (it == vectors.end()) {
          throw CommandError{kExitIdMismatch, "no vectors for dialogue '" + d.id + "'"};
        }
        if (static_cast<int>(it->second.size()) != d.size()) {
          throw Error(ErrorCode::kBundleMismatch,
                      "dialogue '" + d.id + "': " + std::to_string(it->second.size()) +
                          " vectors for " + std::to_string(d.size()) + " utterances");
        }
        std::optional<int> target = config.boundaries;
        if (config.boundaries_from == "r_ts") target = SelectionCount(hparams.r_ts, d.size() - 1);
        AnnotatedDialogue a{d, std::nullopt, std::nullopt, C99Segment(it->second, target)};
        return a;
      });
    } else if (config.baseline == "textrank") {
      const WordSet stopwords = LoadStopwordSet(config);
      results = ParallelMap<AnnotatedDialogue>(corpus.size(), workers, [&](size_t i) {
        const Dialogue& d = corpus[i].dialogue;
        const int k = config.k ? *config.k : SelectionCount(hparams.r_ke, KeywordPoolSize(d));
        KeywordAnnotation keywords;
        keywords.speakers = d.Speakers();
        for (RankedWord& w : TextRankKeywords(d, k, stopwords)) {
          keywords.ranked.push_back({std::move(w.word), w.score, 0, 0});
        }
        AnnotatedDialogue a{d, std::move(keywords), std::nullopt, std::nullopt};
        return a;
      });
    } else {
      throw CommandError{kExitFailure, "unknown baseline '" + config.baseline + "'"};
    }
    if (int code = ReportFailures(results, err); code != kExitOk) return code;
    WriteOutput(config, RenderCorpus(results, config.format), out);
    return kExitOk;
  });
}

int CmdGrid(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadInput(config);
    Require(config.scores, "--scores");
    const ScoreMap scores = ImportScores(config.scores);
    Grid grid = config.preset == "ami" ? Grid::Ami() : Grid::Samsum();
    if (!config.r_ke_values.empty() || !config.t_rd_values.empty() ||
        !config.r_ts_values.empty()) {
      grid = Grid{config.r_ke_values, config.t_rd_values, config.r_ts_values};
    }
    GridOptions options;
    options.objective = ParseObjective(config.objective);
    options.boundary_target = config.target;
    options.base = config.ResolveHParams();
    options.stopwords = LoadStopwordSet(config);
    if (!config.out_dir.empty()) options.output_dir = config.out_dir;
    WriteOutput(config, GridToTsv(GridSearch(corpus, scores, grid, options)), out);
    return kExitOk;
  });
}

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Unsupervised dialogue annotation: keywords, redundancy and topics"};
  app.require_subcommand(1);
  std::string format = "jsonl";

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", config.input, "Corpus jsonl file or text directory")
        ->required();
    cmd->add_option("--input-format", config.input_format)
        ->check(CLI::IsMember({"auto", "jsonl", "text-dir"}));
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", config.output, "Output path ('-' for stdout)");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Annotated output format")
        ->check(CLI::IsMember({"text", "jsonl"}));
  };
  auto add_hparams = [&](CLI::App* cmd) {
    cmd->add_option("--preset", config.preset, "Default hyper-parameters")
        ->check(CLI::IsMember({"samsum", "ami"}));
    cmd->add_option_function<double>("--r-ke", [&](const double& v) { config.r_ke = v; },
                                     "Keyword ratio in percent");
    cmd->add_option_function<double>("--t-rd", [&](const double& v) { config.t_rd = v; },
                                     "Redundancy cosine threshold");
    cmd->add_option_function<double>("--r-ts", [&](const double& v) { config.r_ts = v; },
                                     "Topic boundary ratio in percent");
  };
  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", config.workers, "Worker threads (0: all cores)");
  };
  auto add_stopwords = [&](CLI::App* cmd) {
    cmd->add_option("--stopwords", config.stopwords, "Stopword file (default: built-in)");
  };

  auto* annotate = app.add_subcommand("annotate", "Annotate a corpus from score bundles");
  add_input(annotate);
  annotate->add_option("--scores", config.scores, "Score jsonl")->required();
  annotate->add_option("--tasks", config.tasks, "Subset of ke,rd,ts");
  add_hparams(annotate);
  add_format(annotate);
  add_output(annotate);
  add_workers(annotate);

  auto* estimate = app.add_subcommand("estimate", "Corpus statistics and ratio estimates");
  add_input(estimate);
  add_stopwords(estimate);
  add_output(estimate);

  auto* eval = app.add_subcommand("eval", "Evaluate annotations or summaries");
  eval->require_subcommand(1);
  auto* eval_keywords = eval->add_subcommand("keywords", "Keyword P/R/F1 against summaries");
  add_input(eval_keywords);
  eval_keywords->add_option("--annotated", config.annotated, "Annotated file")->required();
  eval_keywords->add_flag("--include-speakers", config.include_speakers,
                          "Count speaker names as extracted keywords");
  add_stopwords(eval_keywords);
  add_output(eval_keywords);
  auto* eval_rouge = eval->add_subcommand("rouge", "ROUGE-1/2/L of predicted summaries");
  add_input(eval_rouge);
  eval_rouge->add_option("--predictions", config.predictions, "jsonl with id and summary")
      ->required();
  add_output(eval_rouge);

  auto* baseline = app.add_subcommand("baseline", "Comparison annotators");
  baseline->require_subcommand(1);
  auto* rule_rd = baseline->add_subcommand("rule-rd", "Content-free utterances as redundant");
  add_input(rule_rd);
  rule_rd->add_option("--pos", config.pos, "POS jsonl");
  auto* c99 = baseline->add_subcommand("c99", "C99 topic segmentation");
  add_input(c99);
  c99->add_option("--vectors", config.vectors, "Vector jsonl (score schema)");
  c99->add_option_function<int>("--boundaries", [&](const int& v) { config.boundaries = v; },
                                "Fixed boundary count per dialogue");
  c99->add_option("--boundaries-from", config.boundaries_from,
                  "Derive the boundary count from a ratio")
      ->check(CLI::IsMember({"r_ts"}));
  auto* textrank = baseline->add_subcommand("textrank", "TextRank keywords");
  add_input(textrank);
  textrank->add_option_function<int>("--k", [&](const int& v) { config.k = v; },
                                     "Keywords per dialogue (default: r_ke budget)");
  add_stopwords(textrank);
  for (CLI::App* cmd : {rule_rd, c99, textrank}) {
    add_hparams(cmd);
    add_format(cmd);
    add_output(cmd);
    add_workers(cmd);
  }

  auto* grid = app.add_subcommand("grid", "Sweep hyper-parameters");
  add_input(grid);
  grid->add_option("--scores", config.scores, "Score jsonl")->required();
  add_hparams(grid);
  grid->add_option("--objective", config.objective)
      ->check(CLI::IsMember({"none", "keyword_f1", "boundary_count_target"}));
  grid->add_option_function<double>("--target", [&](const double& v) { config.target = v; },
                                    "Mean boundaries per dialogue to aim for");
  grid->add_option("--r-ke-values", config.r_ke_values)->delimiter(',');
  grid->add_option("--t-rd-values", config.t_rd_values)->delimiter(',');
  grid->add_option("--r-ts-values", config.r_ts_values)->delimiter(',');
  grid->add_option("--out-dir", config.out_dir, "Directory for annotated variants");
  add_stopwords(grid);
  add_output(grid);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }
  config.format = format == "text" ? OutputFormat::kText : OutputFormat::kJsonl;

  if (annotate->parsed()) return CmdAnnotate(config, out, err);
  if (estimate->parsed()) return CmdEstimate(config, out, err);
  if (eval_keywords->parsed()) return CmdEvalKeywords(config, out, err);
  if (eval_rouge->parsed()) return CmdEvalRouge(config, out, err);
  if (grid->parsed()) return CmdGrid(config, out, err);
  for (CLI::App* cmd : {rule_rd, c99, textrank}) {
    if (cmd->parsed()) {
      config.baseline = cmd->get_name();
      return CmdBaseline(config, out, err);
    }
  }
  return kExitFailure;
}

}  // namespace dlgann::cli
