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
#include <string>

#include "anyplay/anyplay.h"
#include "parallel.h"

namespace anyplay {

namespace {

// Streaming mean/variance accumulator (Welford); exact when all inputs are
// the same value, which keeps object-independent pairings at std_err == 0.
struct RunningStats {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  // Merge another group given (n, mean, m2).
  void Merge(long long other_n, double other_mean, double other_m2) {
    if (other_n == 0) return;
    if (n == 0) {
      n = other_n;
      mean = other_mean;
      m2 = other_m2;
      return;
    }
    const double delta = other_mean - mean;
    const long long total = n + other_n;
    m2 += other_m2 + delta * delta *
                         (static_cast<double>(n) * other_n / total);
    mean += delta * other_n / total;
    n = total;
  }

  double StdErr() const {
    if (n <= 1) return 0.0;
    const double variance = m2 / (n - 1);
    return std::sqrt(variance / n);
  }
};

double CellM2(const PairingResult& cell) {
  // Invert std_err = sqrt(m2 / (n-1) / n).
  return cell.std_err * cell.std_err * cell.n_games * (cell.n_games - 1);
}

}  // namespace

std::vector<std::string> AgentPool::Labels() const {
  std::vector<std::string> labels;
  for (const PoolMember& member : members) {
    bool seen = false;
    for (const std::string& label : labels) {
      if (label == member.label) {
        seen = true;
        break;
      }
    }
    if (!seen) labels.push_back(member.label);
  }
  return labels;
}

PairingResult PlayMatch(const PolicyArtifact& p1, const PolicyArtifact& p2,
                        const Env& env, long long n_games,
                        std::uint64_t seed) {
  const std::string fingerprint = env.Fingerprint();
  if (p1.env_fingerprint != fingerprint) {
    throw FingerprintMismatch("Player 1 artifact trained on '" +
                              p1.env_fingerprint + "', evaluating on '" +
                              fingerprint + "'");
  }
  if (p2.env_fingerprint != fingerprint) {
    throw FingerprintMismatch("Player 2 artifact trained on '" +
                              p2.env_fingerprint + "', evaluating on '" +
                              fingerprint + "'");
  }
  if (p1.role != Role::kPlayer1) {
    throw RoleMismatch("artifact in the Player 1 seat has role p2");
  }
  if (p2.role != Role::kPlayer2) {
    throw RoleMismatch("artifact in the Player 2 seat has role p1");
  }

  const bool conditioned = IntentConditioned(p1);
  const std::vector<int> p1_legal = env.P1ActionIds();
  const std::vector<int> p2_legal = env.P2ActionIds();
  Rng rng(seed);
  RunningStats stats;
  for (long long game = 0; game < n_games; ++game) {
    int intent = kNoIntent;
    if (conditioned) {
      intent = p1.frozen_intent.has_value()
                   ? *p1.frozen_intent
                   : SampleIntent(p1.num_intents, rng);
    }
    const ResetResult reset = env.Reset(rng);
    const int a1 =
        GreedyAction(p1.table, {reset.obs_p1, intent}, p1_legal);
    const StepResult step1 =
        env.Step(reset.state, P1ActionFromId(a1, env.config()));
    double total = step1.reward;
    if (!step1.done) {
      const int a2 =
          GreedyAction(p2.table, {step1.obs_p2, kNoIntent}, p2_legal);
      const StepResult step2 =
          env.Step(step1.next_state, P2ActionFromId(a2, env.config()));
      total += step2.reward;
    }
    stats.Add(total);
  }
  return {stats.mean, stats.StdErr(), stats.n};
}

CrossPlayMatrix BuildCrossPlayMatrix(const AgentPool& pool, const Env& env,
                                     long long n_games,
                                     std::uint64_t base_seed, int jobs) {
  const int size = static_cast<int>(pool.members.size());
  CrossPlayMatrix matrix;
  matrix.run_ids.reserve(static_cast<size_t>(size));
  for (const PoolMember& member : pool.members) {
    matrix.run_ids.push_back(member.run_id);
  }
  matrix.cells.assign(static_cast<size_t>(size) * size, PairingResult{});

  internal::ParallelFor(size * size, jobs, [&](int cell) {
    const int i = cell / size;
    const int j = cell % size;
    matrix.At(i, j) = PlayMatch(
        pool.members[static_cast<size_t>(i)].p1,
        pool.members[static_cast<size_t>(j)].p2, env, n_games,
        PairingSeed(base_seed, static_cast<std::uint64_t>(i),
                    static_cast<std::uint64_t>(j)));
  });
  return matrix;
}

ScoreReport AggregateScores(const CrossPlayMatrix& matrix,
                            const AgentPool& pool) {
  const int size = static_cast<int>(pool.members.size());
  if (matrix.size() != size) {
    throw Error("matrix size does not match pool size");
  }
  ScoreReport report;
  report.labels = pool.Labels();

  std::vector<const std::string*> label_of(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) {
    label_of[static_cast<size_t>(i)] = &pool.members[static_cast<size_t>(i)].label;
  }
  auto exempt = [&](const std::string& label) {
    return pool.zsc_exempt.count(label) != 0;
  };

  for (const std::string& label : report.labels) {
    int member_count = 0;
    for (int i = 0; i < size; ++i) {
      if (*label_of[static_cast<size_t>(i)] == label) ++member_count;
    }
    if (member_count < 2) {
      throw EmptyCell("label '" + label +
                      "' has fewer than two members; intra_xp undefined");
    }
  }
  bool any_non_exempt = false;
  bool any_exempt_member = false;
  for (const std::string& label : report.labels) {
    if (exempt(label)) {
      any_exempt_member = true;
    } else {
      any_non_exempt = true;
    }
  }
  if (any_non_exempt && !any_exempt_member && !pool.zsc_exempt.empty()) {
    throw EmptyCell("zsc-exempt labels have no pool members");
  }
  if (any_non_exempt && pool.zsc_exempt.empty()) {
    throw EmptyCell(
        "zsc-exempt set is empty; one_szsc_xp undefined for non-exempt "
        "labels");
  }

  auto merge_cells = [&](auto&& want) -> std::optional<ScoreEntry> {
    RunningStats stats;
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        if (!want(i, j)) continue;
        const PairingResult& cell = matrix.At(i, j);
        stats.Merge(cell.n_games, cell.mean, CellM2(cell));
      }
    }
    if (stats.n == 0) return std::nullopt;
    return ScoreEntry{stats.mean, stats.StdErr(), stats.n};
  };

  for (const std::string& label : report.labels) {
    auto is = [&](int i) { return *label_of[static_cast<size_t>(i)] == label; };
    ScoreRow row;
    row.self_play = merge_cells([&](int i, int j) { return i == j && is(i); });
    row.intra_xp =
        merge_cells([&](int i, int j) { return i != j && is(i) && is(j); });
    row.inter_xp = merge_cells([&](int i, int j) {
      return *label_of[static_cast<size_t>(i)] !=
                 *label_of[static_cast<size_t>(j)] &&
             (is(i) || is(j));
    });
    if (!exempt(label)) {
      row.one_szsc_xp = merge_cells([&](int i, int j) {
        return (is(i) && exempt(*label_of[static_cast<size_t>(j)])) ||
               (is(j) && exempt(*label_of[static_cast<size_t>(i)]));
      });
    }
    report.rows[label] = row;
  }

  // Pearson across labels for each pair of score vectors.
  std::array<std::vector<std::optional<double>>, 4> vectors;
  for (const std::string& label : report.labels) {
    const ScoreRow& row = report.rows[label];
    const std::array<const std::optional<ScoreEntry>*, 4> entries = {
        &row.self_play, &row.intra_xp, &row.inter_xp, &row.one_szsc_xp};
    for (size_t s = 0; s < 4; ++s) {
      vectors[s].push_back(entries[s]->has_value()
                               ? std::optional<double>((*entries[s])->mean)
                               : std::nullopt);
    }
  }
  for (size_t a = 0; a < 4; ++a) {
    for (size_t b = 0; b < 4; ++b) {
      try {
        report.pearson[a][b] = Pearson(vectors[a], vectors[b]);
      } catch (const DegenerateInput&) {
        report.pearson[a][b] = std::nullopt;
      }
    }
  }
  return report;
}

double Pearson(std::span<const std::optional<double>> xs,
               std::span<const std::optional<double>> ys) {
  if (xs.size() != ys.size()) {
    throw DegenerateInput("score vectors differ in length");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].has_value() && ys[i].has_value()) {
      x.push_back(*xs[i]);
      y.push_back(*ys[i]);
    }
  }
  return Pearson(std::span<const double>(x), std::span<const double>(y));
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DegenerateInput("score vectors differ in length");
  }
  const size_t n = xs.size();
  if (n < 3) {
    throw DegenerateInput("need at least 3 pairs after deletion, got " +
                          std::to_string(n));
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateInput("constant vector has no correlation");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::min(1.0, std::max(-1.0, r));
}

}  // namespace anyplay
