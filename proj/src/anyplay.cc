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

#include "anyplay/anyplay.h"

#include <cmath>
#include <string>

#include "train_core.h"

namespace anyplay {

int SampleIntent(int num_intents, Rng& rng) {
  return rng.UniformInt(num_intents);
}

std::vector<double> Discriminator::Predict(const ObservationKey& key) const {
  std::vector<double> probs(num_intents_, 0.0);
  const auto it = logits_.find(key);
  if (it == logits_.end()) {
    const double uniform = 1.0 / num_intents_;
    for (double& p : probs) p = uniform;
    return probs;
  }
  const std::vector<double>& logits = it->second;
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  double sum = 0.0;
  for (int i = 0; i < num_intents_; ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double Discriminator::Update(const ObservationKey& key, int intent,
                             double eta) {
  const std::vector<double> probs = Predict(key);
  const double loss = DiscLoss(probs, intent);
  auto [it, inserted] =
      logits_.try_emplace(key, std::vector<double>(num_intents_, 0.0));
  std::vector<double>& logits = it->second;
  for (int i = 0; i < num_intents_; ++i) {
    const double grad = probs[i] - (i == intent ? 1.0 : 0.0);
    logits[i] -= eta * grad;
  }
  return loss;
}

double DiscLoss(std::span<const double> probs, int intent) {
  return -std::log(probs[intent]);
}

double IntrinsicReward(const Discriminator& disc, const ObservationKey& key,
                       int intent, double lambda) {
  return lambda * std::log(disc.Predict(key)[intent]);
}

void ValidateAnyPlayConfig(const AnyPlayConfig& config) {
  if (config.num_intents < 1) {
    throw ConfigError("num_intents must be >= 1");
  }
  if (config.lambda < 0.0) {
    throw ConfigError("lambda must be >= 0");
  }
  if (config.eta <= 0.0) {
    throw ConfigError("eta must be > 0");
  }
  if (config.max_restarts < 0) {
    throw ConfigError("max_restarts must be >= 0");
  }
  if (config.lambda_multiplier <= 1.0) {
    throw ConfigError("lambda_multiplier must be > 1");
  }
  if (config.warmup_epochs == 0 &&
      !(config.warmup_fraction > 0.0 && config.warmup_fraction <= 1.0)) {
    throw ConfigError("warmup_fraction must be in (0, 1]");
  }
  if (config.eval_protocol == EvalProtocol::kFixedIntent &&
      (config.fixed_intent < 0 || config.fixed_intent >= config.num_intents)) {
    throw ConfigError("fixed intent out of range");
  }
}

int ResolveWarmupEpochs(const AnyPlayConfig& config,
                        const TrainConfig& train) {
  if (config.warmup_epochs > 0) return config.warmup_epochs;
  const int total_epochs =
      (train.num_episodes + train.epoch_size - 1) / train.epoch_size;
  const int warmup = static_cast<int>(
      std::lround(config.warmup_fraction * total_epochs));
  return std::max(1, warmup);
}

LambdaDecision LambdaController(const TrainDiagnostics& diagnostics,
                                double lambda, int epoch,
                                const AnyPlayConfig& config,
                                const TrainConfig& train) {
  const int warmup = ResolveWarmupEpochs(config, train);
  if (epoch != warmup) return {LambdaDecision::Kind::kContinue, lambda};

  // Initial intent loss of the untrained (uniform) discriminator.
  const double initial_loss = std::log(static_cast<double>(config.num_intents));
  const double current_loss =
      diagnostics.greedy_intent_loss.at(static_cast<size_t>(epoch) - 1);
  const bool intent_ok =
      initial_loss <= 1e-12 ||
      (initial_loss - current_loss) / initial_loss >=
          config.intent_loss_drop_threshold;
  if (!intent_ok) {
    return {LambdaDecision::Kind::kRestart, lambda * config.lambda_multiplier};
  }

  const double current_return =
      diagnostics.greedy_return.at(static_cast<size_t>(epoch) - 1);
  const bool return_ok = current_return - diagnostics.random_policy_return >=
                         config.return_gain_threshold;
  if (!return_ok) {
    return {LambdaDecision::Kind::kRestart, lambda / config.lambda_multiplier};
  }
  return {LambdaDecision::Kind::kContinue, lambda};
}

AnyPlayArtifacts TrainAnyPlay(const Env& env, const TrainConfig& train,
                              const AnyPlayConfig& config,
                              std::uint64_t seed) {
  ValidateAnyPlayConfig(config);
  double lambda = config.lambda;
  TrainDiagnostics aggregate;
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t attempt_seed =
        attempt == 0
            ? seed
            : Mix64(seed + internal::kRestartStride *
                               static_cast<std::uint64_t>(attempt));
    internal::TrainResult result =
        internal::RunTraining(env, train, &config, lambda, attempt_seed);
    aggregate.lambda_history.push_back(lambda);
    aggregate.episodes_run += result.diagnostics.episodes_run;

    if (!result.restart_requested) {
      AnyPlayArtifacts artifacts;
      artifacts.specializer = std::move(result.p1);
      artifacts.accommodator = std::move(result.p2);
      artifacts.discriminator = std::move(*result.discriminator);
      artifacts.diagnostics = std::move(result.diagnostics);
      artifacts.diagnostics.lambda_history = aggregate.lambda_history;
      artifacts.diagnostics.restart_count = attempt;
      artifacts.diagnostics.episodes_run = aggregate.episodes_run;
      if (config.eval_protocol == EvalProtocol::kFrozenBestIntent) {
        artifacts.frozen_intent =
            SelectFrozenIntent(artifacts.specializer, artifacts.accommodator,
                               env, config.num_intents);
      } else if (config.eval_protocol == EvalProtocol::kFixedIntent) {
        artifacts.frozen_intent = config.fixed_intent;
      }
      return artifacts;
    }

    if (attempt >= config.max_restarts) {
      throw RestartExhausted(
          "lambda controller exceeded max_restarts=" +
          std::to_string(config.max_restarts) +
          " (last lambda " + FormatDouble(lambda) + ")");
    }
    lambda = result.next_lambda;
  }
}

int SelectFrozenIntent(const QTable& specializer, const QTable& accommodator,
                       const Env& env, int num_intents) {
  const P2PolicyMap p2 = GreedyP2Policy(accommodator, env);
  int best = 0;
  double best_value = env.ExactReturn(GreedyP1Policy(specializer, env, 0), p2);
  for (int z = 1; z < num_intents; ++z) {
    const double value =
        env.ExactReturn(GreedyP1Policy(specializer, env, z), p2);
    if (value > best_value) {
      best = z;
      best_value = value;
    }
  }
  return best;
}

}  // namespace anyplay
