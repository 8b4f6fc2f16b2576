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

#include <string>

#include "doctest.h"

namespace anyplay {
namespace {

const char* kFullConfig = R"(# experiment
output_dir = out/run1

[env]
num_objects = 2
num_messages = 2
reward_p1_leave = 1
reward_p2_leave = 0.5
curtain_penalty = -5
reward_correct = 10
reward_incorrect = -10

[train]
num_episodes = 20000
alpha = 0.2
epsilon_start = 0.9
epsilon_end = 0.1
epsilon_anneal_fraction = 0.5
epoch_size = 250

[anyplay]
lambda = 8
eta = 0.1
warmup_fraction = 0.25
eval_protocol = fixed:2
num_intents = 3

[eval]
n_games = 1000
base_seed = 99

[pool]
label = base
algorithm = baseline
count = 3
seed_base = 100

[pool]
label = ap4
algorithm = anyplay
num_intents = 4
count = 2
seeds = 7, 8
)";

TEST_CASE("full config parses") {
  const ExperimentConfig config = ParseExperimentConfig(kFullConfig);
  CHECK(config.output_dir == "out/run1");
  CHECK(config.env.num_objects == 2);
  CHECK(config.env.curtain_penalty == -5.0);
  CHECK(config.train.num_episodes == 20000);
  CHECK(config.train.alpha == 0.2);
  CHECK(config.train.epoch_size == 250);
  CHECK(config.anyplay.lambda == 8.0);
  CHECK(config.anyplay.warmup_fraction == 0.25);
  CHECK(config.anyplay.eval_protocol == EvalProtocol::kFixedIntent);
  CHECK(config.anyplay.fixed_intent == 2);
  CHECK(config.eval.n_games == 1000);
  CHECK(config.eval.base_seed == 99);

  REQUIRE(config.pools.size() == 2);
  const PoolSpec& base = config.pools[0];
  CHECK(base.label == "base");
  CHECK(base.algorithm == "baseline");
  CHECK(base.count == 3);
  CHECK(base.zsc_exempt);  // defaults on for baseline pools
  CHECK(base.SeedFor(0) == 100);
  CHECK(base.SeedFor(2) == 102);

  const PoolSpec& ap = config.pools[1];
  CHECK(ap.algorithm == "anyplay");
  CHECK(ap.num_intents == 4);
  CHECK(!ap.zsc_exempt);
  CHECK(ap.SeedFor(1) == 8);
}

TEST_CASE("defaults fill unspecified sections") {
  const ExperimentConfig config = ParseExperimentConfig("[env]\n");
  CHECK(config.train.num_episodes == 50000);
  CHECK(config.train.alpha == 0.1);
  CHECK(config.train.gamma == 1.0);
  CHECK(config.anyplay.lambda == 16.0);
  CHECK(config.anyplay.eta == 0.2);
  CHECK(config.anyplay.eval_protocol == EvalProtocol::kFrozenBestIntent);
  CHECK(config.eval.n_games == 2500);
  CHECK(config.pools.empty());
}

TEST_CASE("missing env section is named in the error") {
  try {
    ParseExperimentConfig("[train]\nalpha = 0.1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[env]") != std::string::npos);
  }
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(ParseExperimentConfig("[env]\nnope = 3\n"), ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("top_unknown = 3\n[env]\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("[env]\nnum_objects = two\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("[bogus]\n"), ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("[env]\nnum_objects\n"), ConfigError);

  // Pools: duplicate labels, missing seeds, count mismatch.
  CHECK_THROWS_AS(ParseExperimentConfig(
                      "[env]\n[pool]\nlabel = a\nseed_base = 1\n"
                      "[pool]\nlabel = a\nseed_base = 2\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      ParseExperimentConfig("[env]\n[pool]\nlabel = a\ncount = 2\n"),
      ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("[env]\n[pool]\nlabel = a\ncount = "
                                        "2\nseeds = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseExperimentConfig("[env]\n[pool]\nlabel = a\n"
                                        "algorithm = baseline\n"
                                        "num_intents = 3\nseed_base = 1\n"),
                  ConfigError);
}

TEST_CASE("pool algorithm defaults follow the intent count") {
  const ExperimentConfig config = ParseExperimentConfig(
      "[env]\n"
      "[pool]\nlabel = a\nnum_intents = 4\nseed_base = 1\n"
      "[pool]\nlabel = b\nseed_base = 9\n");
  CHECK(config.pools[0].algorithm == "anyplay");
  CHECK(!config.pools[0].zsc_exempt);
  CHECK(config.pools[1].algorithm == "baseline");
  CHECK(config.pools[1].zsc_exempt);
}

TEST_CASE("eval protocol spellings") {
  int fixed = -1;
  CHECK(ParseEvalProtocol("frozen_best", &fixed) ==
        EvalProtocol::kFrozenBestIntent);
  CHECK(ParseEvalProtocol("uniform", &fixed) == EvalProtocol::kUniformIntent);
  CHECK(ParseEvalProtocol("fixed:3", &fixed) == EvalProtocol::kFixedIntent);
  CHECK(fixed == 3);
  CHECK_THROWS_AS(ParseEvalProtocol("sometimes", &fixed), ConfigError);
  CHECK_THROWS_AS(ParseEvalProtocol("fixed:x", &fixed), ConfigError);
}

}  // namespace
}  // namespace anyplay
