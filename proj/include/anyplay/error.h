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

#ifndef ANYPLAY_ERROR_H_
#define ANYPLAY_ERROR_H_

#include <stdexcept>
#include <string>

namespace anyplay {

// Base type for all library errors so callers can catch broadly.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid environment, training, or experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

// An action was applied in the wrong phase or by the wrong role.
struct PhaseError : Error {
  using Error::Error;
};

// A deterministic policy map is missing a reachable observation.
struct IncompletePolicy : Error {
  using Error::Error;
};

// The lambda restart controller exceeded its restart budget.
struct RestartExhausted : Error {
  using Error::Error;
};

// Malformed policy or manifest file; message carries the line number.
struct ParseError : Error {
  using Error::Error;
};

// Policy file with an unknown format version.
struct VersionError : Error {
  using Error::Error;
};

// Artifact trained on a different environment than the one evaluated.
struct FingerprintMismatch : Error {
  using Error::Error;
};

// Artifact loaded into the wrong player seat.
struct RoleMismatch : Error {
  using Error::Error;
};

// Score aggregation requested over an empty pairing set.
struct EmptyCell : Error {
  using Error::Error;
};

// Pearson input with fewer than three pairs or a constant vector.
struct DegenerateInput : Error {
  using Error::Error;
};

}  // namespace anyplay

#endif  // ANYPLAY_ERROR_H_
