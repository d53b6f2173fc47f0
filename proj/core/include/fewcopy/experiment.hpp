// Copyright 2026 The fewcopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fewcopy {

/// Parsed experiment configuration. Configs are strict JSON documents with
/// schema "fewcopy-config-v1"; unknown fields are rejected, the seed is
/// mandatory. See the README for the per-protocol knobs.
struct ExperimentConfig {
  std::string protocol;
  uint64_t seed = 0;
  int threads = 1;
  std::string raw_json;  // canonical echo for the report

  static ExperimentConfig load(const std::filesystem::path &path);
  static ExperimentConfig from_json_text(const std::string &text,
                                         const std::filesystem::path &base_dir);

  // full parsed document, opaque here to keep nlohmann out of the public
  // header; experiment.cpp casts it back
  std::shared_ptr<void> doc;
  std::filesystem::path base_dir;
};

struct RunPaths {
  std::filesystem::path report_json;
  std::filesystem::path rounds_csv;
  std::vector<std::filesystem::path> extra_files;  // records, snapshot sets
};

/// Execute the configured protocol, write <stem>.report.json and
/// <stem>.rounds.csv (plus record files for sqst/shadows) under out_dir.
/// Deterministic for a fixed config+seed except the wall_clock_ms field.
RunPaths run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                        const std::string &stem);

/// Cumulative confidence curve (copies, c_min) from a per-round CSV or a
/// report referencing one. Writes a two-column CSV and returns the rows.
std::vector<std::pair<uint64_t, double>> emit_confidence_curve(
    const std::filesystem::path &report_or_csv, const std::filesystem::path &out_csv);

}  // namespace fewcopy
