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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fewcopy/errors.hpp"
#include "fewcopy/experiment.hpp"
#include "fewcopy/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

fewcopy::ExperimentConfig load_with_overrides(const std::string &path,
                                              std::optional<uint64_t> seed,
                                              std::optional<int> threads) {
  std::ifstream in(path);
  if (!in) throw fewcopy::ConfigError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (seed || threads) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw fewcopy::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (seed) j["seed"] = *seed;
    if (threads) j["threads"] = *threads;
    text = j.dump(2);
  }
  return fewcopy::ExperimentConfig::from_json_text(
      text, std::filesystem::path(path).parent_path());
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"fewcopy: few-copy entanglement detection and partial tomography runner"};
  app.set_version_flag("--version", fewcopy::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", curve_input, curve_output;
  std::optional<uint64_t> seed_override;
  std::optional<int> threads_override;

  CLI::App *run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_option("--out", out_dir, "output directory (default: current)");
  run->add_option("--threads", threads_override, "override the worker count");

  CLI::App *curve = app.add_subcommand("curve", "confidence-vs-copies curve from a run");
  curve->add_option("input", curve_input, "report JSON or per-round CSV")->required();
  curve->add_option("--out", curve_output, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      fewcopy::ExperimentConfig config =
          load_with_overrides(config_path, seed_override, threads_override);
      std::string stem = std::filesystem::path(config_path).stem().string();
      fewcopy::RunPaths paths = fewcopy::run_experiment(config, out_dir, stem);
      std::cout << "report: " << paths.report_json.string() << "\n";
      if (!paths.rounds_csv.empty()) {
        std::cout << "rounds: " << paths.rounds_csv.string() << "\n";
      }
      for (const auto &p : paths.extra_files) {
        std::cout << "record: " << p.string() << "\n";
      }
    } else if (curve->parsed()) {
      auto rows = fewcopy::emit_confidence_curve(curve_input, curve_output);
      std::cout << "curve: " << curve_output << " (" << rows.size() << " rows)\n";
    }
  } catch (const fewcopy::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fewcopy::CapacityError &e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::invalid_argument &e) {
    // everything the protocols validate came out of the config
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
