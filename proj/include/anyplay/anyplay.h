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

#ifndef ANYPLAY_ANYPLAY_H_
#define ANYPLAY_ANYPLAY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "anyplay/env.h"
#include "anyplay/qlearn.h"
#include "anyplay/rng.h"

namespace anyplay {

// Intrinsic-diversity augmentation for the two-learner self-play trainer.
// One learner (the specializer) is conditioned on a per-episode latent
// intent; a discriminator predicts the intent from the partner's
// (accommodator's) observations, and its log-likelihood scaled by lambda is
// added to the shared reward.

// Uniform draw from {0 .. num_intents-1}; consumes exactly one rng draw
// regardless of num_intents.
int SampleIntent(int num_intents, Rng& rng);

// Per-observation logit vector over N intents with softmax readout. Unseen
// observations read as all-zero logits (uniform prediction).
class Discriminator {
 public:
  Discriminator(int num_intents, double learning_rate)
      : num_intents_(num_intents), eta_(learning_rate) {}

  int num_intents() const { return num_intents_; }
  double learning_rate() const { return eta_; }

  // Softmax of the key's logits, stabilized by subtracting the max logit.
  std::vector<double> Predict(const ObservationKey& key) const;

  // Cross-entropy gradient step on the key's logits; returns the loss
  // computed from the pre-update prediction.
  double Update(const ObservationKey& key, int intent, double eta);
  double Update(const ObservationKey& key, int intent) {
    return Update(key, intent, eta_);
  }

  const std::map<ObservationKey, std::vector<double>>& logits() const {
    return logits_;
  }
  std::map<ObservationKey, std::vector<double>>& mutable_logits() {
    return logits_;
  }

 private:
  int num_intents_;
  double eta_;
  std::map<ObservationKey, std::vector<double>> logits_;
};

// Categorical cross-entropy: -log(probs[intent]).
double DiscLoss(std::span<const double> probs, int intent);

// lambda * log q(intent | key); always <= 0 and equal to -lambda * DiscLoss.
double IntrinsicReward(const Discriminator& disc, const ObservationKey& key,
                       int intent, double lambda);

enum class EvalProtocol { kFrozenBestIntent, kUniformIntent, kFixedIntent };

struct AnyPlayConfig {
  int num_intents = 1;
  double lambda = 16.0;
  double eta = 0.2;
  // Warmup for the restart controller, as a fraction of total epochs; an
  // explicit warmup_epochs >= 1 takes precedence.
  double warmup_fraction = 0.5;
  int warmup_epochs = 0;  // 0: derive from warmup_fraction
  double intent_loss_drop_threshold = 0.05;
  double return_gain_threshold = 0.5;
  double lambda_multiplier = 2.0;
  int max_restarts = 8;
  EvalProtocol eval_protocol = EvalProtocol::kFrozenBestIntent;
  int fixed_intent = 0;  // used when eval_protocol == kFixedIntent
};

void ValidateAnyPlayConfig(const AnyPlayConfig& config);

// max(1, round(warmup_fraction * total epochs)) unless warmup_epochs is set.
int ResolveWarmupEpochs(const AnyPlayConfig& config, const TrainConfig& train);

struct LambdaDecision {
  enum class Kind { kContinue, kRestart };
  Kind kind = Kind::kContinue;
  double new_lambda = 0.0;
};

// Restart heuristic, evaluated once when `epoch` equals the resolved warmup
// epoch: if the greedy-policy intent loss has not dropped by the relative
// threshold from its analytic initial value log(N), lambda is too low
// (restart with lambda * multiplier); otherwise if the greedy-policy return
// has not gained the threshold over the uniform-random-policy return, lambda
// is too high (restart with lambda / multiplier). Any other epoch continues.
LambdaDecision LambdaController(const TrainDiagnostics& diagnostics,
                                double lambda, int epoch,
                                const AnyPlayConfig& config,
                                const TrainConfig& train);

struct AnyPlayArtifacts {
  QTable specializer;    // Player 1, keys carry the intent component
  QTable accommodator;   // Player 2
  Discriminator discriminator{1, 0.0};
  std::optional<int> frozen_intent;  // set under kFrozenBestIntent
  TrainDiagnostics diagnostics;
};

// Full training run with intent sampling, discriminator updates, intrinsic
// reward shaping, and the lambda restart controller. Per episode the intent
// is drawn from a separate seeded substream so that the main stream consumes
// draws in exactly the same order as TrainBaseline; with num_intents == 1
// the resulting tables are bit-identical to the baseline's for the same
// seed. Throws RestartExhausted when the controller exceeds max_restarts.
AnyPlayArtifacts TrainAnyPlay(const Env& env, const TrainConfig& train,
                              const AnyPlayConfig& config,
                              std::uint64_t seed);

// Intent whose greedy specializer policy scores best (exact return) against
// the run's own greedy accommodator; ties resolve to the lowest intent. Uses
// only the training partner, so the choice stays zero-shot.
int SelectFrozenIntent(const QTable& specializer, const QTable& accommodator,
                       const Env& env, int num_intents);

}  // namespace anyplay

#endif  // ANYPLAY_ANYPLAY_H_
