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

#ifndef ANYPLAY_EXPERIMENT_H_
#define ANYPLAY_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anyplay/config.h"
#include "anyplay/xplay.h"

namespace anyplay {

// A result check in an experiment pipeline failed; mapped to exit code 3.
struct AcceptanceFailure : Error {
  using Error::Error;
};

// Pool directory manifest ("pool.manifest"), written by train-pool and read
// back by crossplay.
struct ManifestEntry {
  std::string run_id;
  std::string label;
  std::string algorithm;  // baseline | anyplay
  std::uint64_t seed = 0;
  bool zsc_exempt = false;
  int num_intents = 1;
  std::string p1_file;
  std::string p2_file;
};

struct PoolManifest {
  std::string env_fingerprint;
  long long n_games = 2500;
  std::uint64_t base_seed = 0;
  std::vector<ManifestEntry> entries;
};

std::string SerializeManifest(const PoolManifest& manifest);
PoolManifest ParseManifest(const std::string& text);

// Loads manifest + policy files; throws FingerprintMismatch when members
// disagree on the environment.
AgentPool LoadPool(const std::filesystem::path& dir,
                   PoolManifest* manifest_out = nullptr);

// Trains every pool member from its seed and writes two policy files and a
// diagnostics file per run plus the manifest into config.output_dir.
// Re-running with the same config reproduces the directory byte-for-byte.
// Partial outputs are removed on failure.
void RunTrainPool(const ExperimentConfig& config, int jobs);

struct CrossplayOptions {
  std::optional<long long> n_games;         // default: manifest value
  std::optional<std::uint64_t> base_seed;   // default: manifest value
  std::optional<std::filesystem::path> out_dir;  // default: artifact dir
  int jobs = 1;
};

// Builds the full member matrix and writes matrix.csv, matrix.stderr.csv,
// matrix.svg, scores.txt, and pearson.csv.
void RunCrossplay(const std::filesystem::path& artifact_dir,
                  const CrossplayOptions& options);

inline constexpr std::uint64_t kFig4DefaultSeedBase = 20220509;

struct Fig4Options {
  int seeds = 10;
  std::vector<int> intents = {1, 2, 3, 4, 5, 6};
  std::filesystem::path out_dir = "fig4";
  int jobs = 1;
  std::uint64_t seed_base = kFig4DefaultSeedBase;
  long long n_games = 2500;
};

// Per-run seed for the intent-count sweep.
inline std::uint64_t Fig4RunSeed(std::uint64_t seed_base, int num_intents,
                                 int run_index) {
  return Mix64(Mix64(seed_base ^ static_cast<std::uint64_t>(num_intents)) ^
               static_cast<std::uint64_t>(run_index));
}

// Trains `seeds` augmented runs per intent count, emits one cross-play
// matrix (CSV + stderr CSV + SVG) per count and a summary file, then checks
// the sweep's two endpoint properties: the single-intent matrix must be
// bimodal at the maximum and minimum pairing scores with both present
// off-diagonal, and the four-intent matrix must be uniform at the
// convention-free optimum. Throws AcceptanceFailure naming the failing
// matrix; all outputs are written first.
void RunReproduceFig4(const Fig4Options& options);

}  // namespace anyplay

#endif  // ANYPLAY_EXPERIMENT_H_
