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

#include "anyplay/xplay.h"

#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"

namespace anyplay {
namespace {

// Deterministic artifact pair following the object->message convention
// `flip` (and answering curtains correctly).
PolicyArtifact ConventionP1(const Env& env, bool flip) {
  PolicyArtifact artifact;
  artifact.role = Role::kPlayer1;
  artifact.algorithm_label = "baseline";
  artifact.env_fingerprint = env.Fingerprint();
  artifact.table.role = Role::kPlayer1;
  for (int k = 0; k < env.config().num_objects; ++k) {
    const int message = flip ? 1 - k : k;
    artifact.table.Set(
        {ObjectSeen(k), kNoIntent},
        ActionId(P1Action{P1Action::Kind::kSendMessage, message},
                 env.config()),
        1.0);
  }
  return artifact;
}

PolicyArtifact ConventionP2(const Env& env, bool flip) {
  PolicyArtifact artifact;
  artifact.role = Role::kPlayer2;
  artifact.algorithm_label = "baseline";
  artifact.env_fingerprint = env.Fingerprint();
  artifact.table.role = Role::kPlayer2;
  for (int m = 0; m < env.config().num_messages; ++m) {
    const int guess = flip ? 1 - m : m;
    artifact.table.Set(
        {MessageHeard(m), kNoIntent},
        ActionId(P2Action{P2Action::Kind::kGuess, guess}, env.config()), 1.0);
  }
  for (int k = 0; k < env.config().num_objects; ++k) {
    artifact.table.Set(
        {CurtainRevealed(k), kNoIntent},
        ActionId(P2Action{P2Action::Kind::kGuess, k}, env.config()), 1.0);
  }
  return artifact;
}

PolicyArtifact CurtainP1(const Env& env) {
  PolicyArtifact artifact;
  artifact.role = Role::kPlayer1;
  artifact.algorithm_label = "anyplay";
  artifact.num_intents = 4;
  artifact.frozen_intent = 1;
  artifact.env_fingerprint = env.Fingerprint();
  artifact.table.role = Role::kPlayer1;
  for (int k = 0; k < env.config().num_objects; ++k) {
    for (int z = 0; z < 4; ++z) {
      const P1Action action = z == 1 ? P1Action{P1Action::Kind::kLiftCurtain}
                                     : P1Action{P1Action::Kind::kLeave};
      artifact.table.Set({ObjectSeen(k), z}, ActionId(action, env.config()),
                         1.0);
    }
  }
  return artifact;
}

TEST_CASE("seed mixing matches the published constants") {
  CHECK(Mix64(0) == 0x0ULL);
  CHECK(Mix64(1) == 0x5692161D100B05E5ULL);
  CHECK(Mix64(42) == 0xA759EA27D4727622ULL);
  CHECK(Mix64(0x123456789ABCDEF0ULL) == 0x9629F58E8EC5B906ULL);
  CHECK(PairingSeed(7, 2, 3) == 0x36DB937FF805585CULL);
}

TEST_CASE("play match on deterministic pairs") {
  const Env env = MakeEnv(EnvConfig{});

  SUBCASE("matched conventions score the optimum with zero spread") {
    const PairingResult result = PlayMatch(ConventionP1(env, false),
                                           ConventionP2(env, false), env,
                                           500, 42);
    CHECK(result.mean == 10.0);
    CHECK(result.std_err == 0.0);
    CHECK(result.n_games == 500);
  }

  SUBCASE("reversed conventions score the minimum") {
    const PairingResult result = PlayMatch(ConventionP1(env, true),
                                           ConventionP2(env, false), env,
                                           500, 42);
    CHECK(result.mean == -10.0);
    CHECK(result.std_err == 0.0);
  }

  SUBCASE("a frozen curtain specializer is convention-proof") {
    const PairingResult result =
        PlayMatch(CurtainP1(env), ConventionP2(env, true), env, 500, 42);
    CHECK(result.mean == 5.0);
    CHECK(result.std_err == 0.0);
  }

  SUBCASE("fingerprint and role mismatches are rejected") {
    EnvConfig other_config;
    other_config.num_objects = 3;
    const Env other = MakeEnv(other_config);
    CHECK_THROWS_AS(PlayMatch(ConventionP1(env, false),
                              ConventionP2(env, false), other, 10, 1),
                    FingerprintMismatch);
    CHECK_THROWS_AS(PlayMatch(ConventionP2(env, false),
                              ConventionP2(env, false), env, 10, 1),
                    RoleMismatch);
  }
}

TEST_CASE("match means agree with the exact-return oracle") {
  const Env env = MakeEnv(EnvConfig{});
  Rng policy_rng(55);
  const auto p1_actions = env.P1Actions();
  const auto p2_actions = env.P2Actions();

  for (int trial = 0; trial < 20; ++trial) {
    PolicyArtifact p1;
    p1.role = Role::kPlayer1;
    p1.algorithm_label = "random";
    p1.env_fingerprint = env.Fingerprint();
    p1.table.role = Role::kPlayer1;
    P1PolicyMap p1_map;
    for (int k = 0; k < 2; ++k) {
      const P1Action action = p1_actions[static_cast<size_t>(
          policy_rng.UniformInt(static_cast<int>(p1_actions.size())))];
      p1_map[ObjectSeen(k)] = action;
      p1.table.Set({ObjectSeen(k), kNoIntent},
                   ActionId(action, env.config()), 1.0);
    }

    PolicyArtifact p2;
    p2.role = Role::kPlayer2;
    p2.algorithm_label = "random";
    p2.env_fingerprint = env.Fingerprint();
    p2.table.role = Role::kPlayer2;
    P2PolicyMap p2_map;
    std::vector<ObservationKey> p2_keys = {MessageHeard(0), MessageHeard(1),
                                           CurtainRevealed(0),
                                           CurtainRevealed(1)};
    for (const ObservationKey& key : p2_keys) {
      const P2Action action = p2_actions[static_cast<size_t>(
          policy_rng.UniformInt(static_cast<int>(p2_actions.size())))];
      p2_map[key] = action;
      p2.table.Set({key, kNoIntent}, ActionId(action, env.config()), 1.0);
    }

    const double exact = env.ExactReturn(p1_map, p2_map);
    // Analytic spread of the per-episode return over the object draw.
    double mean_over_objects = 0.0;
    std::vector<double> per_object;
    for (int k = 0; k < 2; ++k) {
      EpisodeState state;
      state.object_id = k;
      const StepResult step1 = env.Step(state, p1_map[ObjectSeen(k)]);
      double total = step1.reward;
      if (!step1.done) {
        total += env.Step(step1.next_state, p2_map[step1.obs_p2]).reward;
      }
      per_object.push_back(total);
      mean_over_objects += total / 2.0;
    }
    double variance = 0.0;
    for (double value : per_object) {
      variance += (value - mean_over_objects) * (value - mean_over_objects);
    }
    variance /= 2.0;

    const long long n = 2000;
    const PairingResult result =
        PlayMatch(p1, p2, env, n, 9000 + static_cast<std::uint64_t>(trial));
    const double bound = 4.0 * std::sqrt(variance / n);
    if (variance == 0.0) {
      CHECK(result.mean == exact);
      CHECK(result.std_err == 0.0);
    } else {
      CHECK(std::abs(result.mean - exact) < bound);
    }
  }
}

TEST_CASE("cross-play matrices are seed-stable and schedule-independent") {
  const Env env = MakeEnv(EnvConfig{});
  AgentPool pool;
  for (int i = 0; i < 4; ++i) {
    PoolMember member;
    member.run_id = "b" + std::to_string(i);
    member.label = "baseline";
    member.p1 = ConventionP1(env, i % 2 == 1);
    member.p2 = ConventionP2(env, i % 2 == 1);
    pool.members.push_back(member);
  }

  const CrossPlayMatrix once = BuildCrossPlayMatrix(pool, env, 300, 77, 1);
  const CrossPlayMatrix again = BuildCrossPlayMatrix(pool, env, 300, 77, 1);
  const CrossPlayMatrix threaded = BuildCrossPlayMatrix(pool, env, 300, 77, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(once.At(i, j).mean == again.At(i, j).mean);
      CHECK(once.At(i, j).mean == threaded.At(i, j).mean);
      CHECK(once.At(i, j).std_err == threaded.At(i, j).std_err);
      // Matched parity scores 10, mismatched -10; diagonal matched.
      CHECK(once.At(i, j).mean == ((i + j) % 2 == 0 ? 10.0 : -10.0));
    }
  }
}

TEST_CASE("single-member pool yields its self-play cell") {
  const Env env = MakeEnv(EnvConfig{});
  AgentPool pool;
  PoolMember member;
  member.run_id = "solo";
  member.label = "baseline";
  member.p1 = ConventionP1(env, false);
  member.p2 = ConventionP2(env, false);
  pool.members.push_back(member);
  const CrossPlayMatrix matrix = BuildCrossPlayMatrix(pool, env, 100, 5, 1);
  CHECK(matrix.size() == 1);
  CHECK(matrix.At(0, 0).mean == 10.0);
}

TEST_CASE("aggregation over a two-member convention pool") {
  const Env env = MakeEnv(EnvConfig{});
  AgentPool pool;
  pool.zsc_exempt.insert("baseline");
  for (int i = 0; i < 2; ++i) {
    PoolMember member;
    member.run_id = "b" + std::to_string(i);
    member.label = "baseline";
    member.p1 = ConventionP1(env, false);
    member.p2 = ConventionP2(env, false);
    pool.members.push_back(member);
  }
  const CrossPlayMatrix matrix = BuildCrossPlayMatrix(pool, env, 200, 3, 1);
  const ScoreReport report = AggregateScores(matrix, pool);
  const ScoreRow& row = report.rows.at("baseline");
  CHECK(row.self_play->mean == 10.0);
  CHECK(row.intra_xp->mean == 10.0);
  CHECK(row.self_play->std_err == 0.0);
  CHECK(!row.inter_xp.has_value());      // single label: no other algorithms
  CHECK(!row.one_szsc_xp.has_value());   // exempt labels carry no such score
}

TEST_CASE("aggregation error cases") {
  const Env env = MakeEnv(EnvConfig{});

  SUBCASE("single-member label") {
    AgentPool pool;
    PoolMember member;
    member.run_id = "solo";
    member.label = "baseline";
    member.p1 = ConventionP1(env, false);
    member.p2 = ConventionP2(env, false);
    pool.members.push_back(member);
    pool.zsc_exempt.insert("baseline");
    const CrossPlayMatrix matrix = BuildCrossPlayMatrix(pool, env, 50, 3, 1);
    CHECK_THROWS_AS(AggregateScores(matrix, pool), EmptyCell);
  }

  SUBCASE("empty exempt set with non-exempt labels") {
    AgentPool pool;
    for (int i = 0; i < 2; ++i) {
      PoolMember member;
      member.run_id = "a" + std::to_string(i);
      member.label = "anyplay";
      member.p1 = ConventionP1(env, false);
      member.p2 = ConventionP2(env, false);
      pool.members.push_back(member);
    }
    const CrossPlayMatrix matrix = BuildCrossPlayMatrix(pool, env, 50, 3, 1);
    CHECK_THROWS_AS(AggregateScores(matrix, pool), EmptyCell);
  }
}

TEST_CASE("aggregation matches a brute-force recomputation") {
  // Synthetic 2-label pool with hand-set cells; equal games per cell so the
  // aggregate mean equals the plain mean of constituent cell means.
  const Env env = MakeEnv(EnvConfig{});
  AgentPool pool;
  const char* labels[4] = {"alpha", "alpha", "beta", "beta"};
  for (int i = 0; i < 4; ++i) {
    PoolMember member;
    member.run_id = "m" + std::to_string(i);
    member.label = labels[i];
    member.p1 = ConventionP1(env, false);
    member.p2 = ConventionP2(env, false);
    pool.members.push_back(member);
  }
  pool.zsc_exempt.insert("beta");

  CrossPlayMatrix matrix;
  matrix.run_ids = {"m0", "m1", "m2", "m3"};
  matrix.cells.assign(16, PairingResult{});
  Rng rng(8);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      matrix.At(i, j) = {rng.UniformDouble() * 20.0 - 10.0, 0.0, 100};
    }
  }

  const ScoreReport report = AggregateScores(matrix, pool);
  auto brute = [&](auto&& want) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (want(i, j)) {
          sum += matrix.At(i, j).mean;
          ++count;
        }
      }
    }
    return sum / count;
  };

  const double sp = brute([&](int i, int j) { return i == j && i < 2; });
  const double intra =
      brute([&](int i, int j) { return i != j && i < 2 && j < 2; });
  const double inter =
      brute([&](int i, int j) { return (i < 2) != (j < 2); });
  const double one_szsc =
      brute([&](int i, int j) { return (i < 2) != (j < 2); });

  const ScoreRow& alpha = report.rows.at("alpha");
  CHECK(std::abs(alpha.self_play->mean - sp) <= 1e-12);
  CHECK(std::abs(alpha.intra_xp->mean - intra) <= 1e-12);
  CHECK(std::abs(alpha.inter_xp->mean - inter) <= 1e-12);
  CHECK(std::abs(alpha.one_szsc_xp->mean - one_szsc) <= 1e-12);
  CHECK(!report.rows.at("beta").one_szsc_xp.has_value());
}

TEST_CASE("pearson basics") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const std::vector<double> y = {2.0, 4.0, 6.0};
  CHECK(Pearson(std::span<const double>(x), std::span<const double>(y)) ==
        1.0);

  const std::vector<double> constant = {5.0, 5.0, 5.0};
  CHECK_THROWS_AS(
      Pearson(std::span<const double>(x), std::span<const double>(constant)),
      DegenerateInput);

  const std::vector<double> two = {1.0, 2.0};
  CHECK_THROWS_AS(
      Pearson(std::span<const double>(two), std::span<const double>(two)),
      DegenerateInput);
}

TEST_CASE("pearson properties over random vectors") {
  Rng rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + rng.UniformInt(8);
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      x.push_back(rng.UniformDouble() * 10.0);
      y.push_back(rng.UniformDouble() * 10.0);
    }
    const double xy =
        Pearson(std::span<const double>(x), std::span<const double>(y));
    const double yx =
        Pearson(std::span<const double>(y), std::span<const double>(x));
    CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
    CHECK(std::abs(xy) <= 1.0);

    std::vector<double> scaled;
    for (double v : x) scaled.push_back(3.5 * v + 2.0);
    const double affine = Pearson(std::span<const double>(scaled),
                                  std::span<const double>(y));
    CHECK(affine == doctest::Approx(xy).epsilon(1e-12));
  }
}

TEST_CASE("pairwise deletion drops rows with absent entries") {
  const std::vector<std::optional<double>> xs = {1.0, std::nullopt, 3.0, 4.0,
                                                 5.0};
  const std::vector<std::optional<double>> ys = {2.0, 1.0, 6.0, std::nullopt,
                                                 10.0};
  // Retained pairs: (1,2), (3,6), (5,10) -> exactly proportional.
  CHECK(Pearson(std::span<const std::optional<double>>(xs),
                std::span<const std::optional<double>>(ys)) == 1.0);
}

// Published cross-play score table used as a fixed correlation test vector
// (nine algorithms; the first three carry no one-sided score).
constexpr int kNumReferenceAlgorithms = 9;
const std::optional<double> kNa = std::nullopt;
const std::vector<std::optional<double>> kRefSelfPlay = {
    23.8, 23.8, 23.9, 24.1, 23.9, 24.1, 24.2, 21.6, 22.5};
const std::vector<std::optional<double>> kRefIntraXp = {
    11.9, 8.1, 4.5, 17.7, 15.3, 22.1, 24.2, 13.5, 20.4};
const std::vector<std::optional<double>> kRefInterXp = {
    11.1, 9.2, 7.3, 13.1, 12.2, 13.1, 5.2, 10.3, 14.2};
const std::vector<std::optional<double>> kRefOneSzsc = {
    kNa, kNa, kNa, 5.9, 5.8, 5.6, 1.0, 6.4, 7.4};

TEST_CASE("reference score table correlations match the frozen oracle") {
  auto corr = [](const std::vector<std::optional<double>>& a,
                 const std::vector<std::optional<double>>& b) {
    return Pearson(std::span<const std::optional<double>>(a),
                   std::span<const std::optional<double>>(b));
  };
  REQUIRE(kRefSelfPlay.size() == kNumReferenceAlgorithms);

  // Oracle values computed independently (pairwise deletion, sample
  // Pearson) and frozen.
  CHECK(corr(kRefSelfPlay, kRefIntraXp) ==
        doctest::Approx(0.055478883043723).epsilon(1e-9));
  CHECK(corr(kRefSelfPlay, kRefInterXp) ==
        doctest::Approx(-0.226679367148089).epsilon(1e-9));
  CHECK(corr(kRefSelfPlay, kRefOneSzsc) ==
        doctest::Approx(-0.530723188370700).epsilon(1e-9));
  CHECK(corr(kRefIntraXp, kRefInterXp) ==
        doctest::Approx(0.244601511334448).epsilon(1e-9));
  CHECK(corr(kRefIntraXp, kRefOneSzsc) ==
        doctest::Approx(-0.593996231272220).epsilon(1e-9));
  CHECK(corr(kRefInterXp, kRefOneSzsc) ==
        doctest::Approx(0.910252268000317).epsilon(1e-9));

  // Published coefficients for the two cells with stated tolerances.
  CHECK(std::abs(corr(kRefSelfPlay, kRefInterXp) - (-0.23)) <= 0.02);
  CHECK(std::abs(corr(kRefInterXp, kRefOneSzsc) - 0.89) <= 0.05);
}

}  // namespace
}  // namespace anyplay
