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

#include "anyplay/policy.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace anyplay {

namespace {

[[noreturn]] void Fail(int line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

std::string ExpectHeader(const std::string& line, const std::string& key,
                         int line_number) {
  const std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0) {
    Fail(line_number, "expected '" + prefix + "...', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

long long ParseInt(const std::string& text, int line_number,
                   const std::string& what) {
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    Fail(line_number, "invalid " + what + ": '" + text + "'");
  }
  return value;
}

std::uint64_t ParseU64(const std::string& text, int line_number,
                       const std::string& what) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    Fail(line_number, "invalid " + what + ": '" + text + "'");
  }
  return value;
}

}  // namespace

bool IntentConditioned(const PolicyArtifact& artifact) {
  for (const auto& [key, value] : artifact.table.values) {
    if (key.first.intent != kNoIntent) return true;
  }
  return false;
}

std::string SerializePolicy(const PolicyArtifact& artifact) {
  const EnvConfig config = ParseEnvFingerprint(artifact.env_fingerprint);
  std::ostringstream out;
  out << "anyplay-policy v" << artifact.format_version << "\n";
  out << "role=" << (artifact.role == Role::kPlayer1 ? "p1" : "p2") << "\n";
  out << "algorithm=" << artifact.algorithm_label << "\n";
  out << "num_intents=" << artifact.num_intents << "\n";
  out << "frozen_intent=";
  if (artifact.frozen_intent.has_value()) {
    out << *artifact.frozen_intent;
  } else {
    out << "none";
  }
  out << "\n";
  out << "seed=" << artifact.seed << "\n";
  out << "env=" << artifact.env_fingerprint << "\n";
  out << "\n";
  // std::map ordering over (observation, intent, action) coincides with the
  // id-lexicographic row order required by the format.
  for (const auto& [key, value] : artifact.table.values) {
    out << ObservationId(key.first.obs, config) << " " << key.first.intent
        << " " << key.second << " " << FormatDouble(value) << "\n";
  }
  return out.str();
}

PolicyArtifact ParsePolicy(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) {
      Fail(line_number + 1, "unexpected end of file");
    }
    ++line_number;
    return line;
  };

  PolicyArtifact artifact;

  const std::string magic = next_line();
  if (magic.rfind("anyplay-policy v", 0) != 0) {
    Fail(line_number, "not an anyplay policy file");
  }
  const std::string version = magic.substr(std::string("anyplay-policy v").size());
  if (version != "1") {
    throw VersionError("unsupported policy format version '" + version + "'");
  }
  artifact.format_version = 1;

  std::string header = next_line();
  const std::string role = ExpectHeader(header, "role", line_number);
  if (role == "p1") {
    artifact.role = Role::kPlayer1;
  } else if (role == "p2") {
    artifact.role = Role::kPlayer2;
  } else {
    Fail(line_number, "role must be p1 or p2, got '" + role + "'");
  }
  artifact.table.role = artifact.role;

  header = next_line();
  artifact.algorithm_label = ExpectHeader(header, "algorithm", line_number);

  header = next_line();
  const std::string intents =
      ExpectHeader(header, "num_intents", line_number);
  artifact.num_intents =
      static_cast<int>(ParseInt(intents, line_number, "num_intents"));
  if (artifact.num_intents < 1) Fail(line_number, "num_intents must be >= 1");

  header = next_line();
  const std::string frozen =
      ExpectHeader(header, "frozen_intent", line_number);
  if (frozen == "none") {
    artifact.frozen_intent.reset();
  } else {
    const long long z = ParseInt(frozen, line_number, "frozen_intent");
    if (z < 0 || z >= artifact.num_intents) {
      Fail(line_number, "frozen_intent out of range");
    }
    artifact.frozen_intent = static_cast<int>(z);
  }

  header = next_line();
  artifact.seed = ParseU64(ExpectHeader(header, "seed", line_number),
                           line_number, "seed");

  header = next_line();
  artifact.env_fingerprint = ExpectHeader(header, "env", line_number);
  EnvConfig config;
  try {
    config = ParseEnvFingerprint(artifact.env_fingerprint);
  } catch (const ConfigError& e) {
    Fail(line_number, e.what());
  }

  const std::string blank = next_line();
  if (!blank.empty()) Fail(line_number, "expected blank separator line");

  bool saw_intent = false;
  bool saw_no_intent = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) Fail(line_number, "unexpected blank row");
    std::istringstream row(line);
    std::string obs_text, intent_text, action_text, value_text, extra;
    if (!(row >> obs_text >> intent_text >> action_text >> value_text)) {
      Fail(line_number, "row must be '<obs> <intent> <action> <value>'");
    }
    if (row >> extra) Fail(line_number, "trailing content in row");

    const int obs_id =
        static_cast<int>(ParseInt(obs_text, line_number, "observation id"));
    const int intent =
        static_cast<int>(ParseInt(intent_text, line_number, "intent id"));
    const int action =
        static_cast<int>(ParseInt(action_text, line_number, "action id"));

    double value = 0.0;
    {
      const char* first = value_text.data();
      const char* last = value_text.data() + value_text.size();
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc() || res.ptr != last) {
        Fail(line_number, "invalid value: '" + value_text + "'");
      }
    }

    ObservationKey obs;
    try {
      obs = ObservationFromId(artifact.role, obs_id, config);
    } catch (const std::out_of_range& e) {
      Fail(line_number, e.what());
    }
    if (intent == kNoIntent) {
      saw_no_intent = true;
    } else if (intent >= 0 && intent < artifact.num_intents) {
      if (artifact.role == Role::kPlayer2) {
        Fail(line_number, "Player 2 rows must not carry an intent");
      }
      saw_intent = true;
    } else {
      Fail(line_number, "intent id out of range");
    }
    try {
      if (artifact.role == Role::kPlayer1) {
        P1ActionFromId(action, config);
      } else {
        P2ActionFromId(action, config);
      }
    } catch (const std::out_of_range& e) {
      Fail(line_number, e.what());
    }
    const auto map_key = std::make_pair(QKey{obs, intent}, action);
    if (artifact.table.values.count(map_key) != 0) {
      Fail(line_number, "duplicate row");
    }
    artifact.table.values[map_key] = value;
  }
  if (saw_intent && saw_no_intent) {
    Fail(line_number, "table mixes intent and intent-free rows");
  }
  return artifact;
}

void SavePolicy(const PolicyArtifact& artifact,
                const std::filesystem::path& path) {
  const std::string text = SerializePolicy(artifact);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

PolicyArtifact LoadPolicy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePolicy(buffer.str());
}

}  // namespace anyplay
