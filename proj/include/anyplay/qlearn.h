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

#ifndef ANYPLAY_QLEARN_H_
#define ANYPLAY_QLEARN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "anyplay/env.h"
#include "anyplay/rng.h"

namespace anyplay {

// Marker for table keys without an intent component (Player 2 tables and the
// self-play baseline's Player 1 table).
inline constexpr int kNoIntent = -1;

struct QKey {
  ObservationKey obs;
  int intent = kNoIntent;
  auto operator<=>(const QKey&) const = default;
};

// Tabular action-value function over (observation [+ intent], action id).
// Absent entries read as zero. Ordered storage keeps serialization and
// iteration deterministic.
struct QTable {
  Role role = Role::kPlayer1;
  std::map<std::pair<QKey, int>, double> values;

  double Get(const QKey& key, int action) const {
    const auto it = values.find({key, action});
    return it == values.end() ? 0.0 : it->second;
  }
  void Set(const QKey& key, int action, double value) {
    values[{key, action}] = value;
  }
};

// Argmax of Q(key, a) over `legal`; ties resolve to the lowest action id.
// `legal` must be nonempty and sorted in canonical order.
int GreedyAction(const QTable& table, const QKey& key,
                 std::span<const int> legal);

// With probability epsilon a uniform legal action, otherwise greedy. Always
// consumes one uniform double; consumes one bounded draw when exploring.
int EpsilonGreedy(const QTable& table, const QKey& key,
                  std::span<const int> legal, double epsilon, Rng& rng);

// One-step Q-learning update; returns the temporal-difference error
// (target minus the previous value). `next_key` must be absent when done.
double QUpdate(QTable& table, const QKey& key, int action, double reward,
               const std::optional<QKey>& next_key,
               std::span<const int> next_legal, bool done, double alpha,
               double gamma);

struct TrainConfig {
  int num_episodes = 50000;
  double alpha = 0.1;
  double gamma = 1.0;  // returns are undiscounted
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_anneal_fraction = 0.8;
  int epoch_size = 500;
  std::uint64_t seed = 0;
};

// Throws ConfigError on out-of-range values.
void ValidateTrainConfig(const TrainConfig& config);

// Linear anneal from epsilon_start to epsilon_end over the first
// epsilon_anneal_fraction of episodes, constant afterwards.
double EpsilonAt(const TrainConfig& config, int episode);

struct TrainDiagnostics {
  // Per-epoch averages over the behaviour episodes of that epoch.
  std::vector<double> return_ma;       // extrinsic return
  std::vector<double> intent_loss_ma;  // 0 when no discriminator

  // Per-epoch deterministic probes of the current greedy policies; the
  // lambda controller reads these rather than the exploration-mixed
  // averages above.
  std::vector<double> greedy_return;
  std::vector<double> greedy_intent_loss;

  std::vector<double> lambda_history;  // one entry per training attempt
  int restart_count = 0;
  long long episodes_run = 0;  // total, across restarts
  double random_policy_return = 0.0;
};

struct BaselineArtifacts {
  QTable p1;
  QTable p2;
  TrainDiagnostics diagnostics;
};

// Independent two-learner Q-learning in self-play. Each learner receives one
// terminal update per episode with the shared team reward accumulated from
// its decision to the end of the episode.
BaselineArtifacts TrainBaseline(const Env& env, const TrainConfig& config,
                                std::uint64_t seed);

// Greedy policy maps extracted from tables (total over the decision
// observations; absent entries fall back to the zero-value tie-break).
P1PolicyMap GreedyP1Policy(const QTable& table, const Env& env, int intent);
P2PolicyMap GreedyP2Policy(const QTable& table, const Env& env);

}  // namespace anyplay

#endif  // ANYPLAY_QLEARN_H_
