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

#ifndef ANYPLAY_XPLAY_H_
#define ANYPLAY_XPLAY_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "anyplay/env.h"
#include "anyplay/policy.h"

namespace anyplay {

struct PairingResult {
  double mean = 0.0;
  double std_err = 0.0;  // sample std / sqrt(n); 0 when all returns equal
  long long n_games = 0;
};

struct PoolMember {
  std::string run_id;
  std::string label;  // algorithm label; scores aggregate by this
  PolicyArtifact p1;
  PolicyArtifact p2;
};

// Evaluation pool. `zsc_exempt` is the set of labels not designed for
// zero-shot coordination; they form the partner set of the one-sided score
// and are themselves reported without one.
struct AgentPool {
  std::vector<PoolMember> members;
  std::set<std::string> zsc_exempt;

  std::vector<std::string> Labels() const;  // unique, in first-seen order
};

// Row-major P x P grid: row = Player 1 provider, column = Player 2 provider;
// the diagonal is self-play.
struct CrossPlayMatrix {
  std::vector<std::string> run_ids;
  std::vector<PairingResult> cells;

  int size() const { return static_cast<int>(run_ids.size()); }
  const PairingResult& At(int i, int j) const {
    return cells[static_cast<size_t>(i) * run_ids.size() + j];
  }
  PairingResult& At(int i, int j) {
    return cells[static_cast<size_t>(i) * run_ids.size() + j];
  }
};

// Monte Carlo estimate of the pairing value over n_games greedy episodes.
// The Player 1 artifact is conditioned per its stored protocol: a frozen (or
// fixed) intent when present, a fresh uniform intent per episode when the
// table is intent-conditioned without one, and no conditioning otherwise.
// Throws FingerprintMismatch / RoleMismatch.
PairingResult PlayMatch(const PolicyArtifact& p1, const PolicyArtifact& p2,
                        const Env& env, long long n_games,
                        std::uint64_t seed);

// Full pairwise matrix; cell (i, j) uses PairingSeed(base_seed, i, j) so the
// result is bit-identical regardless of execution order or thread count.
CrossPlayMatrix BuildCrossPlayMatrix(const AgentPool& pool, const Env& env,
                                     long long n_games,
                                     std::uint64_t base_seed, int jobs = 1);

struct ScoreEntry {
  double mean = 0.0;
  double std_err = 0.0;
  long long n_games = 0;
};

struct ScoreRow {
  std::optional<ScoreEntry> self_play;
  std::optional<ScoreEntry> intra_xp;
  std::optional<ScoreEntry> inter_xp;
  std::optional<ScoreEntry> one_szsc_xp;  // absent for exempt labels
};

inline constexpr std::array<const char*, 4> kScoreNames = {
    "self_play", "intra_xp", "inter_xp", "one_szsc_xp"};

struct ScoreReport {
  std::vector<std::string> labels;
  std::map<std::string, ScoreRow> rows;
  // Pearson over the per-label score vectors; absent where undefined.
  std::array<std::array<std::optional<double>, 4>, 4> pearson;
};

// Aggregates the four scores per label from the matrix cells:
// self-play over the label's diagonal cells, intra over ordered pairs of
// distinct members with the same label, inter over pairs whose labels
// differ, and the one-sided score over pairs of a non-exempt label with
// exempt members (both orientations). Standard errors are pooled over all
// constituent games. Throws EmptyCell when a label has fewer than two
// members (intra) or when the exempt set is empty while a non-exempt label
// needs the one-sided score.
ScoreReport AggregateScores(const CrossPlayMatrix& matrix,
                            const AgentPool& pool);

// Sample Pearson correlation with pairwise deletion of absent positions.
// Throws DegenerateInput when fewer than three pairs remain or either
// retained vector is constant.
double Pearson(std::span<const std::optional<double>> xs,
               std::span<const std::optional<double>> ys);
double Pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace anyplay

#endif  // ANYPLAY_XPLAY_H_
