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

#include "anyplay/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "anyplay/anyplay.h"
#include "anyplay/policy.h"
#include "anyplay/report.h"
#include "parallel.h"

namespace anyplay {

namespace {

std::string JoinDoubles(const std::vector<double>& values) {
  if (values.empty()) return "none";
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += FormatDouble(values[i]);
  }
  return out;
}

std::string DiagnosticsText(const std::string& run_id,
                            const std::string& label,
                            const std::string& algorithm, std::uint64_t seed,
                            const TrainDiagnostics& diag) {
  std::ostringstream out;
  out << "anyplay-diagnostics v1\n";
  out << "run_id=" << run_id << "\n";
  out << "label=" << label << "\n";
  out << "algorithm=" << algorithm << "\n";
  out << "seed=" << seed << "\n";
  out << "restart_count=" << diag.restart_count << "\n";
  out << "episodes_run=" << diag.episodes_run << "\n";
  out << "random_policy_return=" << FormatDouble(diag.random_policy_return)
      << "\n";
  out << "lambda_history=" << JoinDoubles(diag.lambda_history) << "\n";
  out << "epoch,return_ma,intent_loss_ma,greedy_return,greedy_intent_loss\n";
  for (size_t e = 0; e < diag.return_ma.size(); ++e) {
    out << (e + 1) << "," << FormatDouble(diag.return_ma[e]) << ","
        << FormatDouble(diag.intent_loss_ma[e]) << ","
        << FormatDouble(diag.greedy_return[e]) << ","
        << FormatDouble(diag.greedy_intent_loss[e]) << "\n";
  }
  return out.str();
}

struct TrainedMember {
  PolicyArtifact p1;
  PolicyArtifact p2;
  TrainDiagnostics diagnostics;
};

TrainedMember TrainMember(const Env& env, const TrainConfig& train,
                          const AnyPlayConfig& anyplay_base,
                          const std::string& algorithm,
                          const std::string& label, int num_intents,
                          std::uint64_t seed) {
  TrainedMember member;
  member.p1.role = Role::kPlayer1;
  member.p2.role = Role::kPlayer2;
  member.p1.algorithm_label = label;
  member.p2.algorithm_label = label;
  member.p1.seed = seed;
  member.p2.seed = seed;
  member.p1.env_fingerprint = env.Fingerprint();
  member.p2.env_fingerprint = env.Fingerprint();

  if (algorithm == "baseline") {
    BaselineArtifacts artifacts = TrainBaseline(env, train, seed);
    member.p1.num_intents = 1;
    member.p2.num_intents = 1;
    member.p1.table = std::move(artifacts.p1);
    member.p2.table = std::move(artifacts.p2);
    member.diagnostics = std::move(artifacts.diagnostics);
    return member;
  }

  AnyPlayConfig anyplay = anyplay_base;
  anyplay.num_intents = num_intents;
  AnyPlayArtifacts artifacts = TrainAnyPlay(env, train, anyplay, seed);
  member.p1.num_intents = num_intents;
  member.p2.num_intents = num_intents;
  member.p1.frozen_intent = artifacts.frozen_intent;
  member.p1.table = std::move(artifacts.specializer);
  member.p2.table = std::move(artifacts.accommodator);
  member.diagnostics = std::move(artifacts.diagnostics);
  return member;
}

}  // namespace

std::string SerializeManifest(const PoolManifest& manifest) {
  std::ostringstream out;
  out << "anyplay-pool v1\n";
  out << "env=" << manifest.env_fingerprint << "\n";
  out << "n_games=" << manifest.n_games << "\n";
  out << "base_seed=" << manifest.base_seed << "\n";
  for (const ManifestEntry& entry : manifest.entries) {
    out << "member run_id=" << entry.run_id << " label=" << entry.label
        << " algorithm=" << entry.algorithm << " seed=" << entry.seed
        << " zsc_exempt=" << (entry.zsc_exempt ? 1 : 0)
        << " num_intents=" << entry.num_intents << " p1=" << entry.p1_file
        << " p2=" << entry.p2_file << "\n";
  }
  return out.str();
}

PoolManifest ParseManifest(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  auto fail = [&](const std::string& message) {
    throw ParseError("manifest line " + std::to_string(line_number) + ": " +
                     message);
  };

  PoolManifest manifest;
  if (!std::getline(in, line)) {
    ++line_number;
    fail("empty manifest");
  }
  ++line_number;
  if (line != "anyplay-pool v1") {
    if (line.rfind("anyplay-pool v", 0) == 0) {
      throw VersionError("unsupported manifest version: '" + line + "'");
    }
    fail("not a pool manifest");
  }

  auto parse_field = [&](const std::string& token, const std::string& key,
                         std::string* value) {
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0) {
      fail("expected '" + prefix + "...', got '" + token + "'");
    }
    *value = token.substr(prefix.size());
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line.rfind("env=", 0) == 0) {
      manifest.env_fingerprint = line.substr(4);
    } else if (line.rfind("n_games=", 0) == 0) {
      const std::string value = line.substr(8);
      const auto res = std::from_chars(
          value.data(), value.data() + value.size(), manifest.n_games);
      if (res.ec != std::errc()) fail("bad n_games");
    } else if (line.rfind("base_seed=", 0) == 0) {
      const std::string value = line.substr(10);
      const auto res = std::from_chars(
          value.data(), value.data() + value.size(), manifest.base_seed);
      if (res.ec != std::errc()) fail("bad base_seed");
    } else if (line.rfind("member ", 0) == 0) {
      std::istringstream row(line.substr(7));
      std::string token;
      ManifestEntry entry;
      std::string value;
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "run_id", &entry.run_id);
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "label", &entry.label);
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "algorithm", &entry.algorithm);
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "seed", &value);
      {
        const auto res = std::from_chars(value.data(),
                                         value.data() + value.size(),
                                         entry.seed);
        if (res.ec != std::errc()) fail("bad member seed");
      }
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "zsc_exempt", &value);
      entry.zsc_exempt = value == "1";
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "num_intents", &value);
      {
        const auto res = std::from_chars(value.data(),
                                         value.data() + value.size(),
                                         entry.num_intents);
        if (res.ec != std::errc()) fail("bad num_intents");
      }
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "p1", &entry.p1_file);
      if (!(row >> token)) fail("member row truncated");
      parse_field(token, "p2", &entry.p2_file);
      manifest.entries.push_back(entry);
    } else {
      fail("unrecognized line: '" + line + "'");
    }
  }
  if (manifest.env_fingerprint.empty()) fail("manifest missing env line");
  return manifest;
}

AgentPool LoadPool(const std::filesystem::path& dir,
                   PoolManifest* manifest_out) {
  const PoolManifest manifest =
      ParseManifest(ReadTextFile(dir / "pool.manifest"));
  AgentPool pool;
  for (const ManifestEntry& entry : manifest.entries) {
    PoolMember member;
    member.run_id = entry.run_id;
    member.label = entry.label;
    member.p1 = LoadPolicy(dir / entry.p1_file);
    member.p2 = LoadPolicy(dir / entry.p2_file);
    if (member.p1.env_fingerprint != manifest.env_fingerprint ||
        member.p2.env_fingerprint != manifest.env_fingerprint) {
      throw FingerprintMismatch("member '" + entry.run_id +
                                "' trained on a different environment than "
                                "the pool manifest");
    }
    if (entry.zsc_exempt) pool.zsc_exempt.insert(entry.label);
    pool.members.push_back(std::move(member));
  }
  if (manifest_out != nullptr) *manifest_out = manifest;
  return pool;
}

void RunTrainPool(const ExperimentConfig& config, int jobs) {
  if (config.pools.empty()) {
    throw ConfigError("config declares no [pool] sections");
  }
  if (config.output_dir.empty()) {
    throw ConfigError("config is missing output_dir");
  }
  const Env env = MakeEnv(config.env);
  ValidateTrainConfig(config.train);

  struct Job {
    const PoolSpec* spec;
    int member_index;
    std::string run_id;
    std::uint64_t seed;
  };
  std::vector<Job> queue;
  for (const PoolSpec& spec : config.pools) {
    for (int m = 0; m < spec.count; ++m) {
      queue.push_back(
          {&spec, m, spec.label + "-m" + std::to_string(m), spec.SeedFor(m)});
    }
  }

  std::vector<TrainedMember> trained(queue.size());
  internal::ParallelFor(static_cast<int>(queue.size()), jobs, [&](int i) {
    const Job& job = queue[static_cast<size_t>(i)];
    trained[static_cast<size_t>(i)] =
        TrainMember(env, config.train, config.anyplay, job.spec->algorithm,
                    job.spec->label, job.spec->num_intents, job.seed);
  });

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto cleanup = [&]() {
    for (const auto& path : written) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  };
  try {
    PoolManifest manifest;
    manifest.env_fingerprint = env.Fingerprint();
    manifest.n_games = config.eval.n_games;
    manifest.base_seed = config.eval.base_seed;
    for (size_t i = 0; i < queue.size(); ++i) {
      const Job& job = queue[i];
      const std::string p1_name = job.run_id + ".p1.policy";
      const std::string p2_name = job.run_id + ".p2.policy";
      SavePolicy(trained[i].p1, dir / p1_name);
      written.push_back(dir / p1_name);
      SavePolicy(trained[i].p2, dir / p2_name);
      written.push_back(dir / p2_name);
      const std::string diag_name = job.run_id + ".diag.txt";
      WriteTextFile(dir / diag_name,
                    DiagnosticsText(job.run_id, job.spec->label,
                                    job.spec->algorithm, job.seed,
                                    trained[i].diagnostics));
      written.push_back(dir / diag_name);
      manifest.entries.push_back({job.run_id, job.spec->label,
                                  job.spec->algorithm, job.seed,
                                  job.spec->zsc_exempt,
                                  job.spec->num_intents, p1_name, p2_name});
    }
    WriteTextFile(dir / "pool.manifest", SerializeManifest(manifest));
  } catch (...) {
    cleanup();
    throw;
  }
}

void RunCrossplay(const std::filesystem::path& artifact_dir,
                  const CrossplayOptions& options) {
  PoolManifest manifest;
  const AgentPool pool = LoadPool(artifact_dir, &manifest);
  if (pool.members.empty()) {
    throw ConfigError("pool at '" + artifact_dir.string() +
                      "' has no members");
  }
  const Env env = MakeEnv(ParseEnvFingerprint(manifest.env_fingerprint));
  const long long n_games = options.n_games.value_or(manifest.n_games);
  const std::uint64_t base_seed =
      options.base_seed.value_or(manifest.base_seed);
  const std::filesystem::path out_dir =
      options.out_dir.value_or(artifact_dir);
  std::filesystem::create_directories(out_dir);

  const CrossPlayMatrix matrix =
      BuildCrossPlayMatrix(pool, env, n_games, base_seed, options.jobs);
  WriteTextFile(out_dir / "matrix.csv", MatrixCsv(matrix, /*std_err=*/false));
  WriteTextFile(out_dir / "matrix.stderr.csv",
                MatrixCsv(matrix, /*std_err=*/true));
  WriteTextFile(out_dir / "matrix.svg",
                HeatmapSvg(matrix, "cross-play mean return"));

  const ScoreReport report = AggregateScores(matrix, pool);
  WriteTextFile(out_dir / "scores.txt", ScoreReportText(report));
  WriteTextFile(out_dir / "pearson.csv", PearsonCsv(report));
}

void RunReproduceFig4(const Fig4Options& options) {
  if (options.seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (options.intents.empty()) throw ConfigError("--intents must be nonempty");
  for (int n : options.intents) {
    if (n < 1) throw ConfigError("intent counts must be >= 1");
  }
  const Env env = MakeEnv(EnvConfig{});
  const TrainConfig train;
  const AnyPlayConfig anyplay_base;

  std::filesystem::create_directories(options.out_dir);
  std::ostringstream summary;
  summary << "intent sweep: runs_per_count=" << options.seeds
          << " n_games=" << options.n_games
          << " seed_base=" << options.seed_base << "\n";

  std::vector<std::string> failures;
  for (const int num_intents : options.intents) {
    std::vector<TrainedMember> trained(
        static_cast<size_t>(options.seeds));
    internal::ParallelFor(options.seeds, options.jobs, [&](int r) {
      const std::string run_id =
          "n" + std::to_string(num_intents) + "-r" + std::to_string(r);
      trained[static_cast<size_t>(r)] = TrainMember(
          env, train, anyplay_base, "anyplay",
          "anyplay-n" + std::to_string(num_intents), num_intents,
          Fig4RunSeed(options.seed_base, num_intents, r));
    });

    AgentPool pool;
    for (int r = 0; r < options.seeds; ++r) {
      PoolMember member;
      member.run_id =
          "n" + std::to_string(num_intents) + "-r" + std::to_string(r);
      member.label = "anyplay-n" + std::to_string(num_intents);
      member.p1 = std::move(trained[static_cast<size_t>(r)].p1);
      member.p2 = std::move(trained[static_cast<size_t>(r)].p2);
      pool.members.push_back(std::move(member));
    }

    const std::uint64_t matrix_seed = Mix64(
        options.seed_base ^ (0xF164ULL + static_cast<std::uint64_t>(num_intents)));
    const CrossPlayMatrix matrix = BuildCrossPlayMatrix(
        pool, env, options.n_games, matrix_seed, options.jobs);

    const std::string stem = "fig4-n" + std::to_string(num_intents);
    WriteTextFile(options.out_dir / (stem + ".csv"),
                  MatrixCsv(matrix, false));
    WriteTextFile(options.out_dir / (stem + ".stderr.csv"),
                  MatrixCsv(matrix, true));
    WriteTextFile(options.out_dir / (stem + ".svg"),
                  HeatmapSvg(matrix, stem));

    double lo = matrix.At(0, 0).mean;
    double hi = lo;
    for (int i = 0; i < matrix.size(); ++i) {
      for (int j = 0; j < matrix.size(); ++j) {
        lo = std::min(lo, matrix.At(i, j).mean);
        hi = std::max(hi, matrix.At(i, j).mean);
      }
    }
    summary << stem << ": min=" << FormatDouble(lo)
            << " max=" << FormatDouble(hi) << "\n";

    const double best = env.config().reward_correct;   // matched pair
    const double worst = env.config().reward_incorrect;  // reversed pair
    if (num_intents == 1 && matrix.size() > 1) {
      bool high_seen = false;
      bool low_seen = false;
      bool bimodal = true;
      for (int i = 0; i < matrix.size(); ++i) {
        for (int j = 0; j < matrix.size(); ++j) {
          if (i == j) continue;
          const double v = matrix.At(i, j).mean;
          if (std::abs(v - best) < 0.5) {
            high_seen = true;
          } else if (std::abs(v - worst) < 0.5) {
            low_seen = true;
          } else {
            bimodal = false;
          }
        }
      }
      const bool ok = bimodal && high_seen && low_seen;
      summary << stem << ": bimodal-checkerboard check "
              << (ok ? "passed" : "FAILED") << "\n";
      if (!ok) failures.push_back(stem);
    }
    if (num_intents == 4) {
      // Convention-free optimum: curtain penalty plus a correct guess.
      const double target =
          env.config().curtain_penalty + env.config().reward_correct;
      bool ok = hi - lo < 0.25;
      for (int i = 0; i < matrix.size() && ok; ++i) {
        for (int j = 0; j < matrix.size() && ok; ++j) {
          if (matrix.At(i, j).mean < target - 0.5) ok = false;
        }
      }
      summary << stem << ": uniform-best check "
              << (ok ? "passed" : "FAILED") << "\n";
      if (!ok) failures.push_back(stem);
    }
  }

  summary << (failures.empty() ? "result: ok" : "result: FAILED") << "\n";
  WriteTextFile(options.out_dir / "fig4-summary.txt", summary.str());

  if (!failures.empty()) {
    std::string joined;
    for (size_t i = 0; i < failures.size(); ++i) {
      if (i > 0) joined += ", ";
      joined += failures[i];
    }
    throw AcceptanceFailure("matrix check failed for: " + joined);
  }
}

}  // namespace anyplay
