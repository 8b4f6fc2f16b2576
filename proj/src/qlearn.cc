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

#include "anyplay/qlearn.h"

#include <string>

#include "train_core.h"

namespace anyplay {

int GreedyAction(const QTable& table, const QKey& key,
                 std::span<const int> legal) {
  int best = legal[0];
  double best_value = table.Get(key, best);
  for (size_t i = 1; i < legal.size(); ++i) {
    const double value = table.Get(key, legal[i]);
    if (value > best_value) {
      best = legal[i];
      best_value = value;
    }
  }
  return best;
}

int EpsilonGreedy(const QTable& table, const QKey& key,
                  std::span<const int> legal, double epsilon, Rng& rng) {
  const double u = rng.UniformDouble();
  if (u < epsilon) {
    return legal[rng.UniformInt(static_cast<int>(legal.size()))];
  }
  return GreedyAction(table, key, legal);
}

double QUpdate(QTable& table, const QKey& key, int action, double reward,
               const std::optional<QKey>& next_key,
               std::span<const int> next_legal, bool done, double alpha,
               double gamma) {
  double target = reward;
  if (!done) {
    double best_next = table.Get(*next_key, next_legal[0]);
    for (size_t i = 1; i < next_legal.size(); ++i) {
      best_next =
          std::max(best_next, table.Get(*next_key, next_legal[i]));
    }
    target += gamma * best_next;
  }
  const double old_value = table.Get(key, action);
  const double td_error = target - old_value;
  table.Set(key, action, old_value + alpha * td_error);
  return td_error;
}

void ValidateTrainConfig(const TrainConfig& config) {
  if (config.num_episodes < 0) {
    throw ConfigError("num_episodes must be >= 0");
  }
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw ConfigError("alpha must be in (0, 1]");
  }
  if (!(config.epsilon_end >= 0.0 &&
        config.epsilon_start >= config.epsilon_end &&
        config.epsilon_start <= 1.0)) {
    throw ConfigError("require 0 <= epsilon_end <= epsilon_start <= 1");
  }
  if (!(config.epsilon_anneal_fraction > 0.0 &&
        config.epsilon_anneal_fraction <= 1.0)) {
    throw ConfigError("epsilon_anneal_fraction must be in (0, 1]");
  }
  if (config.epoch_size < 1) {
    throw ConfigError("epoch_size must be >= 1");
  }
  if (config.gamma < 0.0 || config.gamma > 1.0) {
    throw ConfigError("gamma must be in [0, 1]");
  }
}

double EpsilonAt(const TrainConfig& config, int episode) {
  const double anneal_episodes =
      config.epsilon_anneal_fraction * config.num_episodes;
  if (anneal_episodes <= 0.0) return config.epsilon_end;
  const double t = std::min(1.0, episode / anneal_episodes);
  return config.epsilon_start +
         (config.epsilon_end - config.epsilon_start) * t;
}

BaselineArtifacts TrainBaseline(const Env& env, const TrainConfig& config,
                                std::uint64_t seed) {
  internal::TrainResult result = internal::RunTraining(
      env, config, /*anyplay_config=*/nullptr, /*lambda=*/0.0, seed);
  return {std::move(result.p1), std::move(result.p2),
          std::move(result.diagnostics)};
}

P1PolicyMap GreedyP1Policy(const QTable& table, const Env& env, int intent) {
  const auto legal = env.P1ActionIds();
  P1PolicyMap policy;
  for (int k = 0; k < env.config().num_objects; ++k) {
    const ObservationKey obs = ObjectSeen(k);
    const int action = GreedyAction(table, {obs, intent}, legal);
    policy[obs] = P1ActionFromId(action, env.config());
  }
  return policy;
}

P2PolicyMap GreedyP2Policy(const QTable& table, const Env& env) {
  const auto legal = env.P2ActionIds();
  P2PolicyMap policy;
  std::vector<ObservationKey> keys;
  for (int m = 0; m < env.config().num_messages; ++m) {
    keys.push_back(MessageHeard(m));
  }
  for (int k = 0; k < env.config().num_objects; ++k) {
    keys.push_back(CurtainRevealed(k));
  }
  for (const ObservationKey& obs : keys) {
    const int action = GreedyAction(table, {obs, kNoIntent}, legal);
    policy[obs] = P2ActionFromId(action, env.config());
  }
  return policy;
}

}  // namespace anyplay
