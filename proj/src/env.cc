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

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace anyplay {

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double ParseDoubleOrThrow(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("invalid numeric value for " + what + ": '" + text +
                      "'");
  }
  return value;
}

int ParseIntOrThrow(const std::string& text, const std::string& what) {
  int value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("invalid integer value for " + what + ": '" + text +
                      "'");
  }
  return value;
}

}  // namespace

int ActionId(const P1Action& action, const EnvConfig& config) {
  switch (action.kind) {
    case P1Action::Kind::kLeave:
      return 0;
    case P1Action::Kind::kSendMessage:
      return 1 + action.message;
    case P1Action::Kind::kLiftCurtain:
      return 1 + config.num_messages;
  }
  throw std::out_of_range("bad P1Action kind");
}

int ActionId(const P2Action& action, const EnvConfig& config) {
  (void)config;
  switch (action.kind) {
    case P2Action::Kind::kLeave:
      return 0;
    case P2Action::Kind::kGuess:
      return 1 + action.object;
  }
  throw std::out_of_range("bad P2Action kind");
}

P1Action P1ActionFromId(int id, const EnvConfig& config) {
  if (id == 0) return {P1Action::Kind::kLeave, 0};
  if (id >= 1 && id <= config.num_messages) {
    return {P1Action::Kind::kSendMessage, id - 1};
  }
  if (id == 1 + config.num_messages) return {P1Action::Kind::kLiftCurtain, 0};
  throw std::out_of_range("P1 action id out of range: " + std::to_string(id));
}

P2Action P2ActionFromId(int id, const EnvConfig& config) {
  if (id == 0) return {P2Action::Kind::kLeave, 0};
  if (id >= 1 && id <= config.num_objects) {
    return {P2Action::Kind::kGuess, id - 1};
  }
  throw std::out_of_range("P2 action id out of range: " + std::to_string(id));
}

int ObservationId(const ObservationKey& key, const EnvConfig& config) {
  switch (key.kind) {
    case ObsKind::kObjectSeen:
      return key.index;
    case ObsKind::kInitial:
      return 0;
    case ObsKind::kMessageHeard:
      return 1 + key.index;
    case ObsKind::kCurtainRevealed:
      return 1 + config.num_messages + key.index;
    case ObsKind::kP1Left:
      return 1 + config.num_messages + config.num_objects;
  }
  throw std::out_of_range("bad ObsKind");
}

ObservationKey ObservationFromId(Role role, int id, const EnvConfig& config) {
  if (role == Role::kPlayer1) {
    if (id < 0 || id >= config.num_objects) {
      throw std::out_of_range("P1 observation id out of range: " +
                              std::to_string(id));
    }
    return ObjectSeen(id);
  }
  if (id == 0) return P2Initial();
  if (id >= 1 && id <= config.num_messages) return MessageHeard(id - 1);
  if (id <= config.num_messages + config.num_objects) {
    return CurtainRevealed(id - 1 - config.num_messages);
  }
  if (id == 1 + config.num_messages + config.num_objects) return P1Left();
  throw std::out_of_range("P2 observation id out of range: " +
                          std::to_string(id));
}

Env MakeEnv(const EnvConfig& config) {
  if (config.num_objects < 2) {
    throw ConfigError("num_objects must be >= 2, got " +
                      std::to_string(config.num_objects));
  }
  if (config.num_messages < 1) {
    throw ConfigError("num_messages must be >= 1, got " +
                      std::to_string(config.num_messages));
  }
  if (config.curtain_penalty > 0.0) {
    throw ConfigError("curtain_penalty must be <= 0");
  }
  if (!(config.reward_correct > config.reward_p1_leave &&
        config.reward_p1_leave > config.reward_p2_leave &&
        config.reward_p2_leave > config.reward_incorrect)) {
    throw ConfigError(
        "reward ordering violated: require reward_correct > reward_p1_leave "
        "> reward_p2_leave > reward_incorrect");
  }
  return Env(config);
}

ResetResult Env::Reset(Rng& rng) const {
  EpisodeState state;
  state.object_id = rng.UniformInt(config_.num_objects);
  state.phase = Phase::kP1Turn;
  return {state, ObjectSeen(state.object_id), P2Initial()};
}

ObservationKey Env::P2ObservationFor(const EpisodeState& state) const {
  if (!state.p1_action.has_value()) return P2Initial();
  switch (state.p1_action->kind) {
    case P1Action::Kind::kLeave:
      return P1Left();
    case P1Action::Kind::kSendMessage:
      return MessageHeard(state.p1_action->message);
    case P1Action::Kind::kLiftCurtain:
      return CurtainRevealed(state.object_id);
  }
  throw std::out_of_range("bad P1Action kind");
}

StepResult Env::Step(const EpisodeState& state, const P1Action& action) const {
  if (state.phase == Phase::kTerminal) {
    throw PhaseError("step on terminal state");
  }
  if (state.phase != Phase::kP1Turn) {
    throw PhaseError("Player 1 action applied on Player 2's turn");
  }
  if (action.kind == P1Action::Kind::kSendMessage &&
      (action.message < 0 || action.message >= config_.num_messages)) {
    throw std::out_of_range("message id out of range");
  }

  StepResult result;
  result.next_state = state;
  result.next_state.p1_action = action;
  result.next_state.step_count = state.step_count + 1;
  result.obs_p1 = ObjectSeen(state.object_id);

  switch (action.kind) {
    case P1Action::Kind::kLeave:
      result.reward = config_.reward_p1_leave;
      result.next_state.phase = Phase::kTerminal;
      result.done = true;
      break;
    case P1Action::Kind::kSendMessage:
      result.reward = 0.0;
      result.next_state.phase = Phase::kP2Turn;
      break;
    case P1Action::Kind::kLiftCurtain:
      result.reward = config_.curtain_penalty;
      result.next_state.phase = Phase::kP2Turn;
      break;
  }
  result.next_state.accumulated_reward =
      state.accumulated_reward + result.reward;
  result.obs_p2 = P2ObservationFor(result.next_state);
  return result;
}

StepResult Env::Step(const EpisodeState& state, const P2Action& action) const {
  if (state.phase == Phase::kTerminal) {
    throw PhaseError("step on terminal state");
  }
  if (state.phase != Phase::kP2Turn) {
    throw PhaseError("Player 2 action applied on Player 1's turn");
  }
  if (action.kind == P2Action::Kind::kGuess &&
      (action.object < 0 || action.object >= config_.num_objects)) {
    throw std::out_of_range("guess id out of range");
  }

  StepResult result;
  result.next_state = state;
  result.next_state.phase = Phase::kTerminal;
  result.next_state.step_count = state.step_count + 1;
  result.done = true;
  result.obs_p1 = ObjectSeen(state.object_id);
  result.obs_p2 = P2ObservationFor(state);

  if (action.kind == P2Action::Kind::kLeave) {
    result.reward = config_.reward_p2_leave;
  } else {
    result.reward = action.object == state.object_id
                        ? config_.reward_correct
                        : config_.reward_incorrect;
  }
  result.next_state.accumulated_reward =
      state.accumulated_reward + result.reward;
  return result;
}

std::vector<P1Action> Env::P1Actions() const {
  std::vector<P1Action> actions;
  actions.push_back({P1Action::Kind::kLeave, 0});
  for (int m = 0; m < config_.num_messages; ++m) {
    actions.push_back({P1Action::Kind::kSendMessage, m});
  }
  actions.push_back({P1Action::Kind::kLiftCurtain, 0});
  return actions;
}

std::vector<P2Action> Env::P2Actions() const {
  std::vector<P2Action> actions;
  actions.push_back({P2Action::Kind::kLeave, 0});
  for (int k = 0; k < config_.num_objects; ++k) {
    actions.push_back({P2Action::Kind::kGuess, k});
  }
  return actions;
}

std::vector<int> Env::P1ActionIds() const {
  std::vector<int> ids(static_cast<size_t>(config_.num_messages) + 2);
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

std::vector<int> Env::P2ActionIds() const {
  std::vector<int> ids(static_cast<size_t>(config_.num_objects) + 1);
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

std::vector<int> Env::LegalActionIds(const EpisodeState& state) const {
  switch (state.phase) {
    case Phase::kP1Turn:
      return P1ActionIds();
    case Phase::kP2Turn:
      return P2ActionIds();
    case Phase::kTerminal:
      throw PhaseError("no legal actions in a terminal state");
  }
  throw std::out_of_range("bad phase");
}

double Env::ReturnForObject(int object, const P1PolicyMap& p1,
                            const P2PolicyMap& p2) const {
  EpisodeState state;
  state.object_id = object;
  state.phase = Phase::kP1Turn;

  const ObservationKey obs1 = ObjectSeen(object);
  const auto it1 = p1.find(obs1);
  if (it1 == p1.end()) {
    throw IncompletePolicy("Player 1 policy missing observation id " +
                           std::to_string(ObservationId(obs1, config_)));
  }
  StepResult step1 = Step(state, it1->second);
  double total = step1.reward;
  if (step1.done) return total;

  const auto it2 = p2.find(step1.obs_p2);
  if (it2 == p2.end()) {
    throw IncompletePolicy("Player 2 policy missing observation id " +
                           std::to_string(ObservationId(step1.obs_p2,
                                                        config_)));
  }
  StepResult step2 = Step(step1.next_state, it2->second);
  total += step2.reward;
  return total;
}

double Env::ExactReturn(const P1PolicyMap& p1, const P2PolicyMap& p2) const {
  double sum = 0.0;
  for (int k = 0; k < config_.num_objects; ++k) {
    sum += ReturnForObject(k, p1, p2);
  }
  return sum / config_.num_objects;
}

double Env::UniformRandomReturn() const {
  const auto p1_actions = P1Actions();
  const auto p2_actions = P2Actions();
  double sum = 0.0;
  int terms = 0;
  for (int k = 0; k < config_.num_objects; ++k) {
    EpisodeState state;
    state.object_id = k;
    for (const P1Action& a1 : p1_actions) {
      StepResult step1 = Step(state, a1);
      if (step1.done) {
        sum += step1.reward * static_cast<double>(p2_actions.size());
        terms += static_cast<int>(p2_actions.size());
        continue;
      }
      for (const P2Action& a2 : p2_actions) {
        StepResult step2 = Step(step1.next_state, a2);
        sum += step1.reward + step2.reward;
        ++terms;
      }
    }
  }
  return sum / terms;
}

std::string Env::Fingerprint() const {
  std::ostringstream out;
  out << "num_objects=" << config_.num_objects
      << ";num_messages=" << config_.num_messages
      << ";reward_p1_leave=" << FormatDouble(config_.reward_p1_leave)
      << ";reward_p2_leave=" << FormatDouble(config_.reward_p2_leave)
      << ";curtain_penalty=" << FormatDouble(config_.curtain_penalty)
      << ";reward_correct=" << FormatDouble(config_.reward_correct)
      << ";reward_incorrect=" << FormatDouble(config_.reward_incorrect);
  return out.str();
}

EnvConfig ParseEnvFingerprint(const std::string& fingerprint) {
  EnvConfig config;
  std::istringstream in(fingerprint);
  std::string item;
  int seen = 0;
  while (std::getline(in, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed environment fingerprint entry: '" + item +
                        "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "num_objects") {
      config.num_objects = ParseIntOrThrow(value, key);
    } else if (key == "num_messages") {
      config.num_messages = ParseIntOrThrow(value, key);
    } else if (key == "reward_p1_leave") {
      config.reward_p1_leave = ParseDoubleOrThrow(value, key);
    } else if (key == "reward_p2_leave") {
      config.reward_p2_leave = ParseDoubleOrThrow(value, key);
    } else if (key == "curtain_penalty") {
      config.curtain_penalty = ParseDoubleOrThrow(value, key);
    } else if (key == "reward_correct") {
      config.reward_correct = ParseDoubleOrThrow(value, key);
    } else if (key == "reward_incorrect") {
      config.reward_incorrect = ParseDoubleOrThrow(value, key);
    } else {
      throw ConfigError("unknown environment fingerprint key: '" + key + "'");
    }
    ++seen;
  }
  if (seen != 7) {
    throw ConfigError("environment fingerprint must carry 7 keys, got " +
                      std::to_string(seen));
  }
  return config;
}

}  // namespace anyplay
