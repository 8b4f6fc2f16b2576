// Copyright 2026 The Anyplay Authors
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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anyplay/experiment.h"
#include "anyplay/report.h"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 result-check failure,
// 4 I/O or parse error.
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitIo = 4;

int DefaultJobs() {
  if (const char* env = std::getenv("ANYPLAY_JOBS")) {
    const int jobs = std::atoi(env);
    if (jobs >= 1) return jobs;
  }
  return 1;
}

std::vector<int> ParseIntentList(const std::string& text) {
  std::vector<int> intents;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    intents.push_back(std::stoi(item));
  }
  return intents;
}

// Score table with NA cells: first column is the row label, remaining
// columns are score vectors named by the header row.
int RunPearsonCommand(const std::string& csv_path) {
  const std::string text = anyplay::ReadTextFile(csv_path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw anyplay::ParseError("empty score table");
  }
  std::vector<std::string> names;
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) names.push_back(cell);
  }
  if (names.size() < 3) {
    throw anyplay::ParseError(
        "score table needs a label column and at least two score columns");
  }
  const size_t num_scores = names.size() - 1;
  std::vector<std::vector<std::optional<double>>> columns(num_scores);
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    size_t column = 0;
    while (std::getline(row, cell, ',')) {
      if (column > 0) {
        if (column - 1 >= num_scores) {
          throw anyplay::ParseError("line " + std::to_string(line_number) +
                                    ": too many columns");
        }
        if (cell == "NA" || cell == "N/A" || cell == "na" || cell.empty()) {
          columns[column - 1].push_back(std::nullopt);
        } else {
          try {
            columns[column - 1].push_back(std::stod(cell));
          } catch (const std::exception&) {
            throw anyplay::ParseError("line " + std::to_string(line_number) +
                                      ": bad number '" + cell + "'");
          }
        }
      }
      ++column;
    }
    while (column - 1 < num_scores) {
      columns[column - 1].push_back(std::nullopt);
      ++column;
    }
  }

  std::ostringstream out;
  out << "score";
  for (size_t i = 1; i < names.size(); ++i) out << "," << names[i];
  out << "\n";
  for (size_t a = 0; a < num_scores; ++a) {
    out << names[a + 1];
    for (size_t b = 0; b < num_scores; ++b) {
      out << ",";
      try {
        out << anyplay::FormatDouble(
            anyplay::Pearson(columns[a], columns[b]));
      } catch (const anyplay::DegenerateInput&) {
        out << "NA";
      }
    }
    out << "\n";
  }
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative signaling-game laboratory: train agent pools, "
               "evaluate cross-play matrices, and reproduce the intent-count "
               "sweep"};
  app.require_subcommand(1);

  std::string train_config_path;
  int train_jobs = DefaultJobs();
  CLI::App* train = app.add_subcommand(
      "train-pool", "Train every pool member declared in a config file");
  train->add_option("config", train_config_path, "experiment config file")
      ->required();
  train->add_option("--jobs", train_jobs, "worker threads");

  std::string crossplay_dir;
  anyplay::CrossplayOptions crossplay_options;
  long long crossplay_games = -1;
  std::uint64_t crossplay_seed = 0;
  bool crossplay_seed_set = false;
  std::string crossplay_out;
  int crossplay_jobs = DefaultJobs();
  CLI::App* crossplay = app.add_subcommand(
      "crossplay", "Cross-play matrix, score report, and heatmap for a "
                   "trained pool directory");
  crossplay->add_option("dir", crossplay_dir, "pool artifact directory")
      ->required();
  crossplay->add_option("--games", crossplay_games, "games per pairing");
  crossplay->add_option("--seed", crossplay_seed, "matrix base seed")
      ->each([&](const std::string&) { crossplay_seed_set = true; });
  crossplay->add_option("--out", crossplay_out, "output directory");
  crossplay->add_option("--jobs", crossplay_jobs, "worker threads");

  anyplay::Fig4Options fig4_options;
  std::string fig4_intents = "1,2,3,4,5,6";
  std::string fig4_out = "fig4";
  int fig4_jobs = DefaultJobs();
  CLI::App* fig4 = app.add_subcommand(
      "reproduce-fig4",
      "Train pools across intent counts and emit their cross-play matrices");
  fig4->add_option("--seeds", fig4_options.seeds, "independent runs per count");
  fig4->add_option("--intents", fig4_intents, "comma-separated intent counts");
  fig4->add_option("--out", fig4_out, "output directory");
  fig4->add_option("--jobs", fig4_jobs, "worker threads");
  fig4->add_option("--seed-base", fig4_options.seed_base,
                   "base seed for run derivation");
  fig4->add_option("--games", fig4_options.n_games, "games per pairing");

  std::string pearson_csv;
  CLI::App* pearson = app.add_subcommand(
      "pearson", "Pairwise correlation matrix over a score table with NA "
                 "cells");
  pearson->add_option("scores", pearson_csv, "score table CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      anyplay::RunTrainPool(anyplay::LoadExperimentConfig(train_config_path),
                            train_jobs);
      return 0;
    }
    if (crossplay->parsed()) {
      if (crossplay_games >= 0) crossplay_options.n_games = crossplay_games;
      if (crossplay_seed_set) crossplay_options.base_seed = crossplay_seed;
      if (!crossplay_out.empty()) crossplay_options.out_dir = crossplay_out;
      crossplay_options.jobs = crossplay_jobs;
      anyplay::RunCrossplay(crossplay_dir, crossplay_options);
      return 0;
    }
    if (fig4->parsed()) {
      fig4_options.intents = ParseIntentList(fig4_intents);
      fig4_options.out_dir = fig4_out;
      fig4_options.jobs = fig4_jobs;
      anyplay::RunReproduceFig4(fig4_options);
      return 0;
    }
    if (pearson->parsed()) {
      return RunPearsonCommand(pearson_csv);
    }
  } catch (const anyplay::AcceptanceFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const anyplay::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const anyplay::EmptyCell& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const anyplay::RestartExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const anyplay::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const anyplay::VersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const anyplay::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
