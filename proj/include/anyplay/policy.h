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

#ifndef ANYPLAY_POLICY_H_
#define ANYPLAY_POLICY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "anyplay/env.h"
#include "anyplay/qlearn.h"

namespace anyplay {

// Published, role-tagged form of a trained table. The text format is
// UTF-8 with LF line endings:
//
//   anyplay-policy v1
//   role=<p1|p2>
//   algorithm=<label>
//   num_intents=<N>
//   frozen_intent=<z|none>
//   seed=<u64>
//   env=<canonical key=value;... fingerprint>
//   <blank line>
//   <obs_key_id> <intent_id|-1> <action_id> <value>
//   ...
//
// Rows are sorted lexicographically by the three ids and values are printed
// as the shortest decimal string that round-trips the 64-bit float, so
// serialize -> parse -> serialize is byte-identical.
struct PolicyArtifact {
  int format_version = 1;
  Role role = Role::kPlayer1;
  std::string algorithm_label;
  int num_intents = 1;
  std::optional<int> frozen_intent;
  std::uint64_t seed = 0;
  std::string env_fingerprint;
  QTable table;
};

// True when the table keys carry an intent component (trained specializer).
bool IntentConditioned(const PolicyArtifact& artifact);

std::string SerializePolicy(const PolicyArtifact& artifact);

// Throws ParseError (with a line number) or VersionError.
PolicyArtifact ParsePolicy(const std::string& text);

void SavePolicy(const PolicyArtifact& artifact,
                const std::filesystem::path& path);
PolicyArtifact LoadPolicy(const std::filesystem::path& path);

}  // namespace anyplay

#endif  // ANYPLAY_POLICY_H_
