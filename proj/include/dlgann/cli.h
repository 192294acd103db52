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

#ifndef DLGANN_CLI_H_
#define DLGANN_CLI_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dlgann/annotate.h"
#include "dlgann/error.h"
#include "dlgann/hparams.h"

namespace dlgann::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // usage, I/O and anything unclassified
inline constexpr int kExitSchema = 2;
inline constexpr int kExitIdMismatch = 3;
inline constexpr int kExitInvalidHParams = 4;

int ExitCodeFor(ErrorCode code);

enum class OutputFormat { kText, kJsonl };

struct RunConfig {
  std::string input;
  std::string input_format = "auto";  // auto | jsonl | text-dir
  std::string scores;
  std::string annotated;
  std::string predictions;
  std::string pos;
  std::string vectors;
  std::string stopwords;  // empty: built-in list
  std::string output = "-";
  std::string out_dir;
  OutputFormat format = OutputFormat::kJsonl;

  std::string preset = "samsum";
  std::optional<double> r_ke, t_rd, r_ts;
  std::string tasks = "ke,rd,ts";

  std::string baseline;  // rule-rd | c99 | textrank
  std::optional<int> k;
  std::optional<int> boundaries;
  std::string boundaries_from;  // "" | "r_ts"

  std::string objective = "none";
  std::optional<double> target;
  std::vector<double> r_ke_values, t_rd_values, r_ts_values;

  bool include_speakers = false;
  int workers = 0;  // 0: hardware concurrency

  // Preset values overridden by any explicit r_ke / t_rd / r_ts.
  HParams ResolveHParams() const;
};

// Worker count after applying the DIALOG_ANNOTATE_WORKERS cap.
int EffectiveWorkers(int requested);

int CmdAnnotate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEstimate(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEvalKeywords(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEvalRouge(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdBaseline(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdGrid(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command line (args[0] is the program name).
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlgann::cli

#endif  // DLGANN_CLI_H_
