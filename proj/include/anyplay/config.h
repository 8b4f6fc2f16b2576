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

#ifndef ANYPLAY_CONFIG_H_
#define ANYPLAY_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anyplay/anyplay.h"
#include "anyplay/env.h"
#include "anyplay/qlearn.h"

namespace anyplay {

// One trained algorithm in the pool: `count` runs with per-member seeds
// either listed explicitly or derived as seed_base + index.
struct PoolSpec {
  std::string label;
  std::string algorithm;  // "baseline" or "anyplay"
  int count = 1;
  int num_intents = 1;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> seed_base;
  bool zsc_exempt = false;

  std::uint64_t SeedFor(int member_index) const;
};

struct EvalConfig {
  long long n_games = 2500;
  std::uint64_t base_seed = 0;
};

// Flat INI-style experiment file: `key = value` lines, `#` comments, one
// [env]/[train]/[anyplay]/[eval] section each and one [pool] section per
// algorithm. `output_dir` is a top-level key above the first section.
struct ExperimentConfig {
  EnvConfig env;
  TrainConfig train;
  AnyPlayConfig anyplay;
  EvalConfig eval;
  std::vector<PoolSpec> pools;
  std::string output_dir;
};

// Throws ConfigError naming the offending section or key.
ExperimentConfig ParseExperimentConfig(const std::string& text);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

const char* EvalProtocolName(EvalProtocol protocol);
EvalProtocol ParseEvalProtocol(const std::string& text, int* fixed_intent);

}  // namespace anyplay

#endif  // ANYPLAY_CONFIG_H_
