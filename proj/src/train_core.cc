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

#include "train_core.h"

#include <cmath>
#include <utility>

namespace anyplay::internal {

namespace {

// Exact extrinsic return of the current greedy policy pair; for augmented
// runs, averaged over the intents the specializer can be conditioned on.
double GreedyReturnProbe(const Env& env, const QTable& p1, const QTable& p2,
                         bool augmented, int num_intents) {
  const P2PolicyMap p2_policy = GreedyP2Policy(p2, env);
  if (!augmented) {
    return env.ExactReturn(GreedyP1Policy(p1, env, kNoIntent), p2_policy);
  }
  double sum = 0.0;
  for (int z = 0; z < num_intents; ++z) {
    sum += env.ExactReturn(GreedyP1Policy(p1, env, z), p2_policy);
  }
  return sum / num_intents;
}

// Mean discriminator loss over the observations induced by the greedy
// specializer, across all (intent, object) combinations.
double GreedyIntentLossProbe(const Env& env, const QTable& p1,
                             const Discriminator& disc, int num_intents) {
  const auto legal = env.P1ActionIds();
  double sum = 0.0;
  int count = 0;
  for (int z = 0; z < num_intents; ++z) {
    for (int k = 0; k < env.config().num_objects; ++k) {
      EpisodeState state;
      state.object_id = k;
      const int action = GreedyAction(p1, {ObjectSeen(k), z}, legal);
      const StepResult step =
          env.Step(state, P1ActionFromId(action, env.config()));
      sum += DiscLoss(disc.Predict(step.obs_p2), z);
      ++count;
    }
  }
  return sum / count;
}

}  // namespace

TrainResult RunTraining(const Env& env, const TrainConfig& train,
                        const AnyPlayConfig* anyplay_config, double lambda,
                        std::uint64_t main_seed) {
  ValidateTrainConfig(train);
  const bool augmented = anyplay_config != nullptr;
  const int num_intents = augmented ? anyplay_config->num_intents : 1;

  TrainResult result;
  result.p1.role = Role::kPlayer1;
  result.p2.role = Role::kPlayer2;
  if (augmented) {
    result.discriminator.emplace(num_intents, anyplay_config->eta);
  }
  TrainDiagnostics& diag = result.diagnostics;
  diag.random_policy_return = env.UniformRandomReturn();

  Rng rng(main_seed);
  // Intents come from their own substream so the main stream's draw order
  // matches the baseline trainer exactly.
  Rng intent_rng(Mix64(main_seed ^ kIntentStreamSalt));

  const std::vector<int> p1_legal = env.P1ActionIds();
  const std::vector<int> p2_legal = env.P2ActionIds();

  double epoch_return_sum = 0.0;
  double epoch_loss_sum = 0.0;
  int epoch_count = 0;

  for (int episode = 0; episode < train.num_episodes; ++episode) {
    const double epsilon = EpsilonAt(train, episode);
    int intent = kNoIntent;
    if (augmented) intent = SampleIntent(num_intents, intent_rng);

    const ResetResult reset = env.Reset(rng);
    const QKey p1_key{reset.obs_p1, augmented ? intent : kNoIntent};
    const int a1 = EpsilonGreedy(result.p1, p1_key, p1_legal, epsilon, rng);
    const StepResult step1 =
        env.Step(reset.state, P1ActionFromId(a1, env.config()));

    double intent_loss = 0.0;
    double combined0 = step1.reward;
    if (augmented) {
      intent_loss = result.discriminator->Update(step1.obs_p2, intent);
      combined0 = step1.reward + -(lambda * intent_loss);
    }

    double extrinsic = step1.reward;
    if (step1.done) {
      QUpdate(result.p1, p1_key, a1, combined0, std::nullopt, {}, true,
              train.alpha, train.gamma);
    } else {
      const QKey p2_key{step1.obs_p2, kNoIntent};
      const int a2 = EpsilonGreedy(result.p2, p2_key, p2_legal, epsilon, rng);
      const StepResult step2 =
          env.Step(step1.next_state, P2ActionFromId(a2, env.config()));
      extrinsic += step2.reward;
      // Terminal decision-point updates: each learner is credited with the
      // shared reward accumulated from its decision to the episode's end.
      QUpdate(result.p1, p1_key, a1, combined0 + step2.reward, std::nullopt,
              {}, true, train.alpha, train.gamma);
      QUpdate(result.p2, p2_key, a2, step2.reward, std::nullopt, {}, true,
              train.alpha, train.gamma);
    }

    epoch_return_sum += extrinsic;
    epoch_loss_sum += intent_loss;
    ++epoch_count;
    ++diag.episodes_run;

    const bool epoch_end = (episode + 1) % train.epoch_size == 0 ||
                           episode + 1 == train.num_episodes;
    if (!epoch_end) continue;

    diag.return_ma.push_back(epoch_return_sum / epoch_count);
    diag.intent_loss_ma.push_back(epoch_loss_sum / epoch_count);
    epoch_return_sum = 0.0;
    epoch_loss_sum = 0.0;
    epoch_count = 0;

    diag.greedy_return.push_back(GreedyReturnProbe(
        env, result.p1, result.p2, augmented, num_intents));
    diag.greedy_intent_loss.push_back(
        augmented ? GreedyIntentLossProbe(env, result.p1,
                                          *result.discriminator, num_intents)
                  : 0.0);

    if (augmented) {
      const int epoch_index = static_cast<int>(diag.return_ma.size());
      const LambdaDecision decision = LambdaController(
          diag, lambda, epoch_index, *anyplay_config, train);
      if (decision.kind == LambdaDecision::Kind::kRestart) {
        result.restart_requested = true;
        result.next_lambda = decision.new_lambda;
        return result;
      }
    }
  }
  return result;
}

}  // namespace anyplay::internal
