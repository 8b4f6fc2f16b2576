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

#include "anyplay/config.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace anyplay {

namespace {

std::string Trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

struct KeyValue {
  std::string section;  // "" for top-level keys
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<KeyValue> Tokenize(const std::string& text) {
  std::vector<KeyValue> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unterminated section header");
      }
      section = Trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": empty section name");
      }
      entries.push_back({section, "", "", line_number});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": empty key");
    }
    entries.push_back({section, key, value, line_number});
  }
  return entries;
}

long long ToInt(const KeyValue& kv) {
  long long value = 0;
  const char* first = kv.value.data();
  const char* last = kv.value.data() + kv.value.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                      "' expects an integer, got '" + kv.value + "'");
  }
  return value;
}

std::uint64_t ToU64(const KeyValue& kv) {
  std::uint64_t value = 0;
  const char* first = kv.value.data();
  const char* last = kv.value.data() + kv.value.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                      "' expects an unsigned integer, got '" + kv.value +
                      "'");
  }
  return value;
}

double ToDouble(const KeyValue& kv) {
  double value = 0.0;
  const char* first = kv.value.data();
  const char* last = kv.value.data() + kv.value.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                      "' expects a number, got '" + kv.value + "'");
  }
  return value;
}

bool ToBool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key +
                    "' expects true/false, got '" + kv.value + "'");
}

std::vector<std::uint64_t> ToU64List(const KeyValue& kv) {
  std::vector<std::uint64_t> values;
  std::istringstream in(kv.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string trimmed = Trim(item);
    std::uint64_t value = 0;
    const char* first = trimmed.data();
    const char* last = trimmed.data() + trimmed.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      throw ConfigError("line " + std::to_string(kv.line) + ": key '" +
                        kv.key + "' expects a comma-separated seed list");
    }
    values.push_back(value);
  }
  return values;
}

[[noreturn]] void UnknownKey(const KeyValue& kv) {
  const std::string where =
      kv.section.empty() ? "top level" : "section [" + kv.section + "]";
  throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" +
                    kv.key + "' in " + where);
}

}  // namespace

std::uint64_t PoolSpec::SeedFor(int member_index) const {
  if (!seeds.empty()) return seeds[static_cast<size_t>(member_index)];
  return *seed_base + static_cast<std::uint64_t>(member_index);
}

const char* EvalProtocolName(EvalProtocol protocol) {
  switch (protocol) {
    case EvalProtocol::kFrozenBestIntent:
      return "frozen_best";
    case EvalProtocol::kUniformIntent:
      return "uniform";
    case EvalProtocol::kFixedIntent:
      return "fixed";
  }
  return "frozen_best";
}

EvalProtocol ParseEvalProtocol(const std::string& text, int* fixed_intent) {
  if (text == "frozen_best") return EvalProtocol::kFrozenBestIntent;
  if (text == "uniform") return EvalProtocol::kUniformIntent;
  if (text.rfind("fixed:", 0) == 0) {
    const std::string z = text.substr(6);
    int value = 0;
    const char* first = z.data();
    const char* last = z.data() + z.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || value < 0) {
      throw ConfigError("bad fixed intent in eval_protocol '" + text + "'");
    }
    if (fixed_intent != nullptr) *fixed_intent = value;
    return EvalProtocol::kFixedIntent;
  }
  throw ConfigError(
      "eval_protocol must be frozen_best, uniform, or fixed:<z>; got '" +
      text + "'");
}

ExperimentConfig ParseExperimentConfig(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> sections_seen;
  PoolSpec* pool = nullptr;
  std::vector<bool> exempt_explicit;

  for (const KeyValue& kv : Tokenize(text)) {
    if (kv.key.empty()) {  // section header
      sections_seen.insert(kv.section);
      if (kv.section == "pool") {
        config.pools.emplace_back();
        exempt_explicit.push_back(false);
        pool = &config.pools.back();
      } else if (kv.section != "env" && kv.section != "train" &&
                 kv.section != "anyplay" && kv.section != "eval") {
        throw ConfigError("line " + std::to_string(kv.line) +
                          ": unknown section [" + kv.section + "]");
      }
      continue;
    }

    if (kv.section.empty()) {
      if (kv.key == "output_dir") {
        config.output_dir = kv.value;
      } else {
        UnknownKey(kv);
      }
    } else if (kv.section == "env") {
      if (kv.key == "num_objects") {
        config.env.num_objects = static_cast<int>(ToInt(kv));
      } else if (kv.key == "num_messages") {
        config.env.num_messages = static_cast<int>(ToInt(kv));
      } else if (kv.key == "reward_p1_leave") {
        config.env.reward_p1_leave = ToDouble(kv);
      } else if (kv.key == "reward_p2_leave") {
        config.env.reward_p2_leave = ToDouble(kv);
      } else if (kv.key == "curtain_penalty") {
        config.env.curtain_penalty = ToDouble(kv);
      } else if (kv.key == "reward_correct") {
        config.env.reward_correct = ToDouble(kv);
      } else if (kv.key == "reward_incorrect") {
        config.env.reward_incorrect = ToDouble(kv);
      } else {
        UnknownKey(kv);
      }
    } else if (kv.section == "train") {
      if (kv.key == "num_episodes") {
        config.train.num_episodes = static_cast<int>(ToInt(kv));
      } else if (kv.key == "alpha") {
        config.train.alpha = ToDouble(kv);
      } else if (kv.key == "gamma") {
        config.train.gamma = ToDouble(kv);
      } else if (kv.key == "epsilon_start") {
        config.train.epsilon_start = ToDouble(kv);
      } else if (kv.key == "epsilon_end") {
        config.train.epsilon_end = ToDouble(kv);
      } else if (kv.key == "epsilon_anneal_fraction") {
        config.train.epsilon_anneal_fraction = ToDouble(kv);
      } else if (kv.key == "epoch_size") {
        config.train.epoch_size = static_cast<int>(ToInt(kv));
      } else {
        UnknownKey(kv);
      }
    } else if (kv.section == "anyplay") {
      if (kv.key == "num_intents") {
        config.anyplay.num_intents = static_cast<int>(ToInt(kv));
      } else if (kv.key == "lambda") {
        config.anyplay.lambda = ToDouble(kv);
      } else if (kv.key == "eta") {
        config.anyplay.eta = ToDouble(kv);
      } else if (kv.key == "warmup_fraction") {
        config.anyplay.warmup_fraction = ToDouble(kv);
      } else if (kv.key == "intent_loss_drop_threshold") {
        config.anyplay.intent_loss_drop_threshold = ToDouble(kv);
      } else if (kv.key == "return_gain_threshold") {
        config.anyplay.return_gain_threshold = ToDouble(kv);
      } else if (kv.key == "lambda_multiplier") {
        config.anyplay.lambda_multiplier = ToDouble(kv);
      } else if (kv.key == "max_restarts") {
        config.anyplay.max_restarts = static_cast<int>(ToInt(kv));
      } else if (kv.key == "eval_protocol") {
        config.anyplay.eval_protocol =
            ParseEvalProtocol(kv.value, &config.anyplay.fixed_intent);
      } else {
        UnknownKey(kv);
      }
    } else if (kv.section == "eval") {
      if (kv.key == "n_games") {
        config.eval.n_games = ToInt(kv);
      } else if (kv.key == "base_seed") {
        config.eval.base_seed = ToU64(kv);
      } else {
        UnknownKey(kv);
      }
    } else if (kv.section == "pool") {
      if (pool == nullptr) {
        throw ConfigError("line " + std::to_string(kv.line) +
                          ": key outside any [pool] section");
      }
      if (kv.key == "label") {
        pool->label = kv.value;
      } else if (kv.key == "algorithm") {
        if (kv.value != "baseline" && kv.value != "anyplay") {
          throw ConfigError("line " + std::to_string(kv.line) +
                            ": algorithm must be baseline or anyplay");
        }
        pool->algorithm = kv.value;
      } else if (kv.key == "count") {
        pool->count = static_cast<int>(ToInt(kv));
      } else if (kv.key == "num_intents") {
        pool->num_intents = static_cast<int>(ToInt(kv));
      } else if (kv.key == "seeds") {
        pool->seeds = ToU64List(kv);
      } else if (kv.key == "seed_base") {
        pool->seed_base = ToU64(kv);
      } else if (kv.key == "zsc_exempt") {
        pool->zsc_exempt = ToBool(kv);
        exempt_explicit.back() = true;
      } else {
        UnknownKey(kv);
      }
    }
  }

  if (sections_seen.count("env") == 0) {
    throw ConfigError("missing required section [env]");
  }

  std::set<std::string> labels;
  for (size_t p = 0; p < config.pools.size(); ++p) {
    PoolSpec& spec = config.pools[p];
    if (spec.label.empty()) {
      throw ConfigError("[pool] section is missing a label");
    }
    if (!labels.insert(spec.label).second) {
      throw ConfigError("duplicate pool label '" + spec.label + "'");
    }
    if (spec.count < 1) {
      throw ConfigError("pool '" + spec.label + "': count must be >= 1");
    }
    if (spec.num_intents < 1) {
      throw ConfigError("pool '" + spec.label +
                        "': num_intents must be >= 1");
    }
    if (spec.algorithm.empty()) {
      spec.algorithm = spec.num_intents > 1 ? "anyplay" : "baseline";
    }
    if (!exempt_explicit[p]) {
      spec.zsc_exempt = spec.algorithm == "baseline";
    }
    if (spec.algorithm == "baseline" && spec.num_intents != 1) {
      throw ConfigError("pool '" + spec.label +
                        "': baseline pools must have num_intents = 1");
    }
    if (!spec.seeds.empty()) {
      if (static_cast<int>(spec.seeds.size()) != spec.count) {
        throw ConfigError("pool '" + spec.label + "': seeds lists " +
                          std::to_string(spec.seeds.size()) +
                          " entries for count " + std::to_string(spec.count));
      }
    } else if (!spec.seed_base.has_value()) {
      throw ConfigError("pool '" + spec.label +
                        "': provide seeds or seed_base");
    }
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

}  // namespace anyplay
