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

#include "anyplay/env.h"

#include <cmath>
#include <set>

#include "doctest.h"

namespace anyplay {
namespace {

Env DefaultEnv() { return MakeEnv(EnvConfig{}); }

// Deterministic play-through used by reward-composition checks.
double SimulateEpisode(const Env& env, int object, const P1Action& a1,
                       const std::optional<P2Action>& a2) {
  EpisodeState state;
  state.object_id = object;
  StepResult step1 = env.Step(state, a1);
  if (step1.done) return step1.reward;
  StepResult step2 = env.Step(step1.next_state, *a2);
  return step1.reward + step2.reward;
}

TEST_CASE("action enumerations match the configured sizes") {
  const Env env = DefaultEnv();
  CHECK(env.P1Actions().size() == 4);
  CHECK(env.P2Actions().size() == 3);

  EnvConfig wide;
  wide.num_objects = 3;
  const Env env3 = MakeEnv(wide);
  CHECK(env3.P1Actions().size() == 4);
  CHECK(env3.P2Actions().size() == 4);
}

TEST_CASE("invalid configs are rejected") {
  EnvConfig degenerate;
  degenerate.num_objects = 1;
  CHECK_THROWS_AS(MakeEnv(degenerate), ConfigError);

  EnvConfig no_messages;
  no_messages.num_messages = 0;
  CHECK_THROWS_AS(MakeEnv(no_messages), ConfigError);

  EnvConfig bad_order;
  bad_order.reward_p2_leave = 2.0;  // above reward_p1_leave
  CHECK_THROWS_AS(MakeEnv(bad_order), ConfigError);

  EnvConfig positive_penalty;
  positive_penalty.curtain_penalty = 1.0;
  CHECK_THROWS_AS(MakeEnv(positive_penalty), ConfigError);
}

TEST_CASE("reset starts a Player 1 turn with the private observation") {
  const Env env = DefaultEnv();
  Rng rng(123);
  const ResetResult reset = env.Reset(rng);
  CHECK(reset.state.phase == Phase::kP1Turn);
  CHECK(!reset.state.p1_action.has_value());
  CHECK(reset.obs_p1 == ObjectSeen(reset.state.object_id));
  CHECK(reset.obs_p2 == P2Initial());
}

TEST_CASE("reset object draw is uniform within 5 sigma") {
  const Env env = DefaultEnv();
  Rng rng(2024);
  const int n = 10000;
  int count0 = 0;
  for (int i = 0; i < n; ++i) {
    if (env.Reset(rng).state.object_id == 0) ++count0;
  }
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(count0 - n / 2) < 5.0 * sigma);
}

TEST_CASE("reset is deterministic for a fixed seed") {
  const Env env = DefaultEnv();
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(env.Reset(a).state.object_id == env.Reset(b).state.object_id);
  }
}

TEST_CASE("step follows the game transitions") {
  const Env env = DefaultEnv();
  EpisodeState start;
  start.object_id = 1;

  SUBCASE("leave ends the episode with the terminal observation") {
    const StepResult step = env.Step(start, P1Action{P1Action::Kind::kLeave});
    CHECK(step.done);
    CHECK(step.reward == 1.0);
    CHECK(step.obs_p2 == P1Left());
    CHECK(step.next_state.phase == Phase::kTerminal);
    CHECK(step.next_state.step_count == 1);
  }

  SUBCASE("message hands the turn to Player 2") {
    const StepResult step =
        env.Step(start, P1Action{P1Action::Kind::kSendMessage, 1});
    CHECK(!step.done);
    CHECK(step.reward == 0.0);
    CHECK(step.obs_p2 == MessageHeard(1));
    CHECK(step.next_state.phase == Phase::kP2Turn);
  }

  SUBCASE("curtain reveals the object at a penalty") {
    const StepResult step =
        env.Step(start, P1Action{P1Action::Kind::kLiftCurtain});
    CHECK(step.reward == -5.0);
    CHECK(step.obs_p2 == CurtainRevealed(1));
  }

  SUBCASE("episode totals compose additively") {
    CHECK(SimulateEpisode(env, 1, P1Action{P1Action::Kind::kLiftCurtain},
                          P2Action{P2Action::Kind::kGuess, 1}) == 5.0);
    CHECK(SimulateEpisode(env, 0, P1Action{P1Action::Kind::kLeave},
                          std::nullopt) == 1.0);
    CHECK(SimulateEpisode(env, 0, P1Action{P1Action::Kind::kSendMessage, 0},
                          P2Action{P2Action::Kind::kGuess, 1}) == -10.0);
    CHECK(SimulateEpisode(env, 0, P1Action{P1Action::Kind::kLiftCurtain},
                          P2Action{P2Action::Kind::kLeave}) == -4.5);
  }
}

TEST_CASE("phase errors on wrong-role or terminal actions") {
  const Env env = DefaultEnv();
  EpisodeState start;
  CHECK_THROWS_AS(env.Step(start, P2Action{P2Action::Kind::kLeave}),
                  PhaseError);

  const StepResult mid =
      env.Step(start, P1Action{P1Action::Kind::kSendMessage, 0});
  CHECK_THROWS_AS(env.Step(mid.next_state, P1Action{P1Action::Kind::kLeave}),
                  PhaseError);

  const StepResult done = env.Step(start, P1Action{P1Action::Kind::kLeave});
  CHECK_THROWS_AS(env.Step(done.next_state, P2Action{P2Action::Kind::kLeave}),
                  PhaseError);
  CHECK_THROWS_AS(env.LegalActionIds(done.next_state), PhaseError);
}

TEST_CASE("legal action ids per phase") {
  const Env env = DefaultEnv();
  EpisodeState start;
  CHECK(env.LegalActionIds(start) == std::vector<int>{0, 1, 2, 3});
  const StepResult mid =
      env.Step(start, P1Action{P1Action::Kind::kSendMessage, 0});
  CHECK(env.LegalActionIds(mid.next_state) == std::vector<int>{0, 1, 2});
}

TEST_CASE("exact return matches the game's canonical policies") {
  const Env env = DefaultEnv();

  P1PolicyMap curtain;
  P1PolicyMap convention;
  P1PolicyMap leave;
  for (int k = 0; k < 2; ++k) {
    curtain[ObjectSeen(k)] = P1Action{P1Action::Kind::kLiftCurtain};
    convention[ObjectSeen(k)] = P1Action{P1Action::Kind::kSendMessage, k};
    leave[ObjectSeen(k)] = P1Action{P1Action::Kind::kLeave};
  }

  P2PolicyMap responder;
  for (int k = 0; k < 2; ++k) {
    responder[CurtainRevealed(k)] = P2Action{P2Action::Kind::kGuess, k};
    responder[MessageHeard(k)] = P2Action{P2Action::Kind::kGuess, k};
  }
  P2PolicyMap reversed = responder;
  reversed[MessageHeard(0)] = P2Action{P2Action::Kind::kGuess, 1};
  reversed[MessageHeard(1)] = P2Action{P2Action::Kind::kGuess, 0};

  CHECK(env.ExactReturn(curtain, responder) == 5.0);
  CHECK(env.ExactReturn(convention, responder) == 10.0);
  CHECK(env.ExactReturn(convention, reversed) == -10.0);
  CHECK(env.ExactReturn(leave, responder) == 1.0);

  P2PolicyMap empty;
  CHECK_THROWS_AS(env.ExactReturn(convention, empty), IncompletePolicy);
}

TEST_CASE("Player 2 observation space enumerates distinctly") {
  const Env env = DefaultEnv();
  std::set<int> ids;
  const std::vector<ObservationKey> keys = {P2Initial(),        MessageHeard(0),
                                            MessageHeard(1),    CurtainRevealed(0),
                                            CurtainRevealed(1), P1Left()};
  for (const ObservationKey& key : keys) {
    ids.insert(ObservationId(key, env.config()));
  }
  // 1 initial + M messages + K curtains + 1 terminal leave.
  CHECK(ids.size() == 6);
}

TEST_CASE("observation and action ids round-trip") {
  EnvConfig config;
  config.num_objects = 3;
  config.num_messages = 2;
  for (int id = 0; id < 3; ++id) {
    CHECK(ObservationId(ObservationFromId(Role::kPlayer1, id, config),
                        config) == id);
  }
  for (int id = 0; id <= 1 + 2 + 3; ++id) {
    CHECK(ObservationId(ObservationFromId(Role::kPlayer2, id, config),
                        config) == id);
  }
  for (int id = 0; id < 4; ++id) {
    CHECK(ActionId(P1ActionFromId(id, config), config) == id);
    CHECK(ActionId(P2ActionFromId(id, config), config) == id);
  }
  CHECK_THROWS_AS(P1ActionFromId(5, config), std::out_of_range);
}

TEST_CASE("exact return agrees with Monte Carlo simulation") {
  const Env env = DefaultEnv();
  Rng policy_rng(7);
  const auto p1_actions = env.P1Actions();
  const auto p2_actions = env.P2Actions();

  for (int trial = 0; trial < 5; ++trial) {
    P1PolicyMap p1;
    P2PolicyMap p2;
    for (int k = 0; k < 2; ++k) {
      p1[ObjectSeen(k)] = p1_actions[static_cast<size_t>(
          policy_rng.UniformInt(static_cast<int>(p1_actions.size())))];
      p2[CurtainRevealed(k)] = p2_actions[static_cast<size_t>(
          policy_rng.UniformInt(static_cast<int>(p2_actions.size())))];
    }
    for (int m = 0; m < 2; ++m) {
      p2[MessageHeard(m)] = p2_actions[static_cast<size_t>(
          policy_rng.UniformInt(static_cast<int>(p2_actions.size())))];
    }

    const double exact = env.ExactReturn(p1, p2);
    Rng sim_rng(1000 + trial);
    const int n = 10000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const ResetResult reset = env.Reset(sim_rng);
      const StepResult step1 = env.Step(reset.state, p1.at(reset.obs_p1));
      double total = step1.reward;
      if (!step1.done) {
        total += env.Step(step1.next_state, p2.at(step1.obs_p2)).reward;
      }
      sum += total;
      sum_sq += total * total;
    }
    const double mean = sum / n;
    const double var = (sum_sq - n * mean * mean) / (n - 1);
    const double bound = 4.0 * std::sqrt(std::max(var, 0.0) / n);
    if (bound == 0.0) {
      CHECK(mean == exact);
    } else {
      CHECK(std::abs(mean - exact) < bound);
    }
  }
}

TEST_CASE("uniform random play value is exact") {
  const Env env = DefaultEnv();
  // Hand enumeration: leave 1; each message (0.5+0+0)/3; curtain
  // -5 + (0.5+10-10)/3; averaged over the four Player 1 actions.
  CHECK(env.UniformRandomReturn() == doctest::Approx(-0.875).epsilon(1e-12));
}

TEST_CASE("fingerprint round-trips through its parser") {
  EnvConfig config;
  config.num_objects = 3;
  config.reward_p2_leave = 0.25;
  const Env env = MakeEnv(config);
  const EnvConfig parsed = ParseEnvFingerprint(env.Fingerprint());
  CHECK(parsed.num_objects == 3);
  CHECK(parsed.num_messages == 2);
  CHECK(parsed.reward_p2_leave == 0.25);
  CHECK(MakeEnv(parsed).Fingerprint() == env.Fingerprint());

  CHECK_THROWS_AS(ParseEnvFingerprint("num_objects=2"), ConfigError);
  CHECK_THROWS_AS(ParseEnvFingerprint("bogus"), ConfigError);
}

}  // namespace
}  // namespace anyplay
