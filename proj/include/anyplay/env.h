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

#ifndef ANYPLAY_ENV_H_
#define ANYPLAY_ENV_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anyplay/error.h"
#include "anyplay/rng.h"

namespace anyplay {

// Two-player referential signaling game. Player 1 privately observes one of
// K objects and either leaves, sends one of M messages, or lifts a curtain
// (revealing the object to Player 2 at a penalty). Player 2 then leaves or
// guesses the object. The team reward is shared.

struct EnvConfig {
  int num_objects = 2;   // K
  int num_messages = 2;  // M
  double reward_p1_leave = 1.0;
  double reward_p2_leave = 0.5;
  double curtain_penalty = -5.0;
  double reward_correct = 10.0;
  double reward_incorrect = -10.0;
};

enum class Role { kPlayer1, kPlayer2 };

enum class Phase { kP1Turn, kP2Turn, kTerminal };

struct P1Action {
  enum class Kind { kLeave, kSendMessage, kLiftCurtain };
  Kind kind = Kind::kLeave;
  int message = 0;  // valid iff kind == kSendMessage
  auto operator<=>(const P1Action&) const = default;
};

struct P2Action {
  enum class Kind { kLeave, kGuess };
  Kind kind = Kind::kLeave;
  int object = 0;  // valid iff kind == kGuess
  auto operator<=>(const P2Action&) const = default;
};

// Observation keys double as table keys for learners and the discriminator.
// Ordering (kind, then index) matches the canonical id layout used by the
// policy file format.
enum class ObsKind {
  kObjectSeen,       // Player 1: the hidden object
  kInitial,          // Player 2: before Player 1 acted
  kMessageHeard,     // Player 2: message m received
  kCurtainRevealed,  // Player 2: curtain lifted, object visible
  kP1Left,           // Player 2: terminal, Player 1 left
};

struct ObservationKey {
  Role role = Role::kPlayer1;
  ObsKind kind = ObsKind::kObjectSeen;
  int index = 0;  // object or message id; 0 for kinds without payload
  auto operator<=>(const ObservationKey&) const = default;
};

inline ObservationKey ObjectSeen(int object) {
  return {Role::kPlayer1, ObsKind::kObjectSeen, object};
}
inline ObservationKey P2Initial() {
  return {Role::kPlayer2, ObsKind::kInitial, 0};
}
inline ObservationKey MessageHeard(int message) {
  return {Role::kPlayer2, ObsKind::kMessageHeard, message};
}
inline ObservationKey CurtainRevealed(int object) {
  return {Role::kPlayer2, ObsKind::kCurtainRevealed, object};
}
inline ObservationKey P1Left() {
  return {Role::kPlayer2, ObsKind::kP1Left, 0};
}

struct EpisodeState {
  int object_id = 0;
  Phase phase = Phase::kP1Turn;
  std::optional<P1Action> p1_action;
  double accumulated_reward = 0.0;
  int step_count = 0;
};

struct StepResult {
  EpisodeState next_state;
  ObservationKey obs_p1;
  ObservationKey obs_p2;
  double reward = 0.0;  // shared team reward for this step
  bool done = false;
};

struct ResetResult {
  EpisodeState state;
  ObservationKey obs_p1;
  ObservationKey obs_p2;
};

// Canonical action ids. Player 1: Leave=0, SendMessage(m)=1+m,
// LiftCurtain=1+M. Player 2: Leave=0, Guess(k)=1+k. Greedy tie-breaking is
// defined as the lowest id in this ordering.
int ActionId(const P1Action& action, const EnvConfig& config);
int ActionId(const P2Action& action, const EnvConfig& config);
P1Action P1ActionFromId(int id, const EnvConfig& config);
P2Action P2ActionFromId(int id, const EnvConfig& config);

// Canonical observation ids, per role. Player 1: ObjectSeen(k)=k.
// Player 2: Initial=0, MessageHeard(m)=1+m, CurtainRevealed(k)=1+M+k,
// P1Left=1+M+K.
int ObservationId(const ObservationKey& key, const EnvConfig& config);
ObservationKey ObservationFromId(Role role, int id, const EnvConfig& config);

using P1PolicyMap = std::map<ObservationKey, P1Action>;
using P2PolicyMap = std::map<ObservationKey, P2Action>;

class Env {
 public:
  const EnvConfig& config() const { return config_; }

  // Draws the hidden object uniformly (one rng draw) and starts an episode.
  ResetResult Reset(Rng& rng) const;

  StepResult Step(const EpisodeState& state, const P1Action& action) const;
  StepResult Step(const EpisodeState& state, const P2Action& action) const;

  std::vector<P1Action> P1Actions() const;
  std::vector<P2Action> P2Actions() const;
  std::vector<int> P1ActionIds() const;
  std::vector<int> P2ActionIds() const;

  // Action ids legal for the player to move; throws PhaseError on terminal
  // states.
  std::vector<int> LegalActionIds(const EpisodeState& state) const;

  // Player 2's current observation implied by the episode state.
  ObservationKey P2ObservationFor(const EpisodeState& state) const;

  // Exact expected undiscounted return of a deterministic policy pair,
  // averaged over the uniform object draw. Throws IncompletePolicy if a
  // reachable observation has no mapped action.
  double ExactReturn(const P1PolicyMap& p1, const P2PolicyMap& p2) const;

  // Exact expected return when both players act uniformly at random.
  double UniformRandomReturn() const;

  // Canonical "key=value;..." serialization of the config; stored in policy
  // artifacts and required to match at evaluation time.
  std::string Fingerprint() const;

 private:
  friend Env MakeEnv(const EnvConfig&);
  explicit Env(const EnvConfig& config) : config_(config) {}

  double ReturnForObject(int object, const P1PolicyMap& p1,
                         const P2PolicyMap& p2) const;

  EnvConfig config_;
};

// Validates the config (throws ConfigError) and returns an immutable
// environment value.
Env MakeEnv(const EnvConfig& config);

// Round-trips of Env::Fingerprint.
EnvConfig ParseEnvFingerprint(const std::string& fingerprint);

// Shortest decimal string that parses back to exactly the same double.
std::string FormatDouble(double value);

}  // namespace anyplay

#endif  // ANYPLAY_ENV_H_
