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

#ifndef ANYPLAY_TRAIN_CORE_H_
#define ANYPLAY_TRAIN_CORE_H_

#include <cstdint>
#include <optional>

#include "anyplay/anyplay.h"
#include "anyplay/env.h"
#include "anyplay/qlearn.h"

namespace anyplay::internal {

// Seed salt for the intent substream; keeping intents off the main stream
// preserves draw-order parity between augmented and baseline training.
inline constexpr std::uint64_t kIntentStreamSalt = 0x1D1CEF00DC0FFEEULL;

// Stride mixed into the run seed for restart attempts > 0.
inline constexpr std::uint64_t kRestartStride = 0x9E3779B97F4A7C15ULL;

struct TrainResult {
  QTable p1;
  QTable p2;
  std::optional<Discriminator> discriminator;
  TrainDiagnostics diagnostics;
  bool restart_requested = false;
  double next_lambda = 0.0;
};

// One training attempt. With anyplay_config == nullptr this is the plain
// self-play baseline; otherwise the intrinsic augmentation runs with the
// given lambda and the restart controller is consulted at each epoch
// boundary (aborting the attempt when it asks for a restart).
TrainResult RunTraining(const Env& env, const TrainConfig& train,
                        const AnyPlayConfig* anyplay_config, double lambda,
                        std::uint64_t main_seed);

}  // namespace anyplay::internal

#endif  // ANYPLAY_TRAIN_CORE_H_
