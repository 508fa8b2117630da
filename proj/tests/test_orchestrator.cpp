// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include "stratsearch/baseline_runner.hpp"
#include "stratsearch/errors.hpp"
#include "stratsearch/orchestrator.hpp"
#include "stratsearch/report.hpp"
#include "stratsearch/rng.hpp"
#include "stratsearch/trial_log.hpp"
#include "test_util.hpp"

using namespace stratsearch;
using nlohmann::json;

namespace {

json base_config_json() {
  return json::parse(R"({
    "search_space": [
      {"name": "learning_rate", "min": 0.0001, "max": 0.01},
      {"name": "smooth", "min": 0, "max": 1, "kind": "augmentation_probability"}
    ],
    "evaluator": {"type": "sphere", "optimum": [0.3, 0.7]},
    "run": {"max_epoch": 20, "initial_jobs": 2, "workers": 1, "master_seed": 7}
  })");
}

RunConfig base_config(const std::filesystem::path& out) {
  RunConfig config = parse_run_config(base_config_json());
  config.output_dir = out;
  return config;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Evaluator that fails every third trial with a deterministic error.
class FlakyEvaluator : public Evaluator {
 public:
  EvaluationResult evaluate(const EvaluationRequest& request) const override {
    if (request.trial_id % 3 == 2)
      throw EvalError(EvalFailureKind::Other,
                      "synthetic failure on trial " + std::to_string(request.trial_id));
    EvaluationResult result;
    result.trial_id = request.trial_id;
    result.reward = 0.5 + 0.01 * static_cast<double>(request.trial_id % 7);
    return result;
  }
};

// Tracks the maximum number of concurrent evaluations.
class ConcurrencyProbe : public Evaluator {
 public:
  EvaluationResult evaluate(const EvaluationRequest& request) const override {
    const int now = ++active_;
    int seen = max_seen_.load();
    while (now > seen && !max_seen_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --active_;
    EvaluationResult result;
    result.trial_id = request.trial_id;
    result.reward = 0.5;
    return result;
  }
  int max_seen() const { return max_seen_.load(); }

 private:
  mutable std::atomic<int> active_{0};
  mutable std::atomic<int> max_seen_{0};
};

}  // namespace

TEST_CASE("config parser fills defaults and rejects unknown keys") {
  const RunConfig config = parse_run_config(base_config_json());
  CHECK(config.controller.dim == 2);
  CHECK(config.controller.hidden_size == 32);
  CHECK(config.controller.policy_stddev == 0.1);
  CHECK(config.controller.learning_rate == 0.1);
  CHECK(config.run.max_epoch == 20);
  CHECK(config.baseline.max_evals == 20);  // defaults to run.max_epoch

  json bad = base_config_json();
  bad["surprise"] = 1;
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

  bad = base_config_json();
  bad["run"]["max_epochs"] = 5;  // typo'd key
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

  bad = base_config_json();
  bad["search_space"][0]["minimum"] = 0;
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

  bad = base_config_json();
  bad["evaluator"]["type"] = "quantum";
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

  bad = base_config_json();
  bad["run"]["max_epoch"] = 1;  // below initial_jobs
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
}

TEST_CASE("config survives the to_json round trip") {
  const RunConfig config = parse_run_config(base_config_json());
  const RunConfig back = parse_run_config(run_config_to_json(config));
  CHECK(back.search_space.params[0].name == "learning_rate");
  CHECK(back.search_space.params[1].kind == ParamKind::AugmentationProbability);
  CHECK(back.controller.hidden_size == config.controller.hidden_size);
  CHECK(back.run.master_seed == config.run.master_seed);
  CHECK(back.evaluator.type == "sphere");
  CHECK(back.baseline.max_evals == config.baseline.max_evals);
}

TEST_CASE("serial runs of the same config are byte-identical") {
  test_util::TempDir tmp("stratsearch-orch");
  const RunConfig c1 = base_config(tmp.path / "a");
  const RunConfig c2 = base_config(tmp.path / "b");
  const SearchRun r1 = run_search(c1);
  const SearchRun r2 = run_search(c2);
  CHECK(r1.epoch == 20);
  CHECK(r1.best_reward == r2.best_reward);
  CHECK(slurp(tmp.path / "a" / kTrialLogFile) == slurp(tmp.path / "b" / kTrialLogFile));
  CHECK(slurp(tmp.path / "a" / kCheckpointDir / "ckpt_00000020.bin") ==
        slurp(tmp.path / "b" / kCheckpointDir / "ckpt_00000020.bin"));
}

TEST_CASE("max_epoch == initial_jobs runs exactly n random trials") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.initial_jobs = 5;
  config.run.max_epoch = 5;
  const SearchRun run = run_search(config);
  CHECK(run.trials.size() == 5);
  CHECK(run.epoch == 5);
  for (const Trial& t : run.trials) {
    CHECK(t.origin == TrialOrigin::RandomInit);
    CHECK(t.status == TrialStatus::Succeeded);
  }
}

TEST_CASE("every proposal's policy step is persisted before launch") {
  test_util::TempDir tmp("stratsearch-orch");
  const SearchRun run = run_search(base_config(tmp.path / "run"));
  (void)run;
  const LogReadResult log = read_trial_log(tmp.path / "run" / kTrialLogFile);
  std::set<std::int64_t> launched;
  int proposals = 0;
  for (const json& record : log.records) {
    if (record.at("event") == "trial_launched") {
      launched.insert(record.at("trial_id").get<std::int64_t>());
      if (record.at("origin") == "controller_proposal") {
        ++proposals;
        CHECK(record.contains("policy_step"));
        CHECK(record["policy_step"].contains("input"));
        CHECK(record["policy_step"].contains("hidden_before"));
        CHECK(record.contains("proposal_seed"));
      }
    } else if (record.at("event") == "trial_finished") {
      // A finish record must never precede its launch record.
      CHECK(launched.count(record.at("trial_id").get<std::int64_t>()) == 1);
    }
  }
  CHECK(proposals == 18);  // 20 epochs - 2 random init
}

TEST_CASE("failed trials are replaced without controller updates") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.max_epoch = 12;
  FlakyEvaluator flaky;
  RunHooks hooks;
  hooks.evaluator = &flaky;
  const SearchRun run = run_search(config, &hooks);
  CHECK(run.epoch == 12);

  long succeeded = 0, failed = 0;
  for (const Trial& t : run.trials) {
    if (t.status == TrialStatus::Succeeded) ++succeeded;
    if (t.status == TrialStatus::Failed) ++failed;
  }
  CHECK(succeeded == 12);
  CHECK(failed > 0);
  CHECK(succeeded + failed == static_cast<long>(run.trials.size()));

  // No controller_update record may reference a failed trial.
  const LogReadResult log = read_trial_log(tmp.path / "run" / kTrialLogFile);
  std::set<std::int64_t> failed_ids;
  for (const Trial& t : run.trials)
    if (t.status == TrialStatus::Failed) failed_ids.insert(t.trial_id);
  for (const json& record : log.records) {
    if (record.at("event") == "controller_update")
      CHECK(failed_ids.count(record.at("trial_id").get<std::int64_t>()) == 0);
  }
}

TEST_CASE("parallel workers never exceed the configured concurrency") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.workers = 4;
  config.run.initial_jobs = 8;
  config.run.max_epoch = 40;
  ConcurrencyProbe probe;
  RunHooks hooks;
  hooks.evaluator = &probe;
  const SearchRun run = run_search(config, &hooks);
  CHECK(run.epoch == 40);
  CHECK(probe.max_seen() <= 4);
  CHECK(run.trials.size() == 40);
}

TEST_CASE("abort + resume reproduces the uninterrupted log byte for byte") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig reference = base_config(tmp.path / "full");
  reference.run.max_epoch = 23;  // exercises a checkpoint cadence boundary
  run_search(reference);

  RunConfig interrupted = base_config(tmp.path / "cut");
  interrupted.run.max_epoch = 23;
  RunHooks hooks;
  hooks.abort_after_completion = [](long completions) { return completions == 10; };
  CHECK_THROWS_AS(run_search(interrupted, &hooks), RunAborted);

  const SearchRun resumed = resume(tmp.path / "cut");
  CHECK(resumed.epoch == 23);
  CHECK(resumed.completed);
  CHECK(slurp(tmp.path / "full" / kTrialLogFile) ==
        slurp(tmp.path / "cut" / kTrialLogFile));
}

TEST_CASE("a double interruption still converges to the same log") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig reference = base_config(tmp.path / "full");
  run_search(reference);

  RunConfig interrupted = base_config(tmp.path / "cut");
  RunHooks first;
  first.abort_after_completion = [](long n) { return n == 5; };
  CHECK_THROWS_AS(run_search(interrupted, &first), RunAborted);
  RunHooks second;
  second.abort_after_completion = [](long n) { return n == 7; };
  CHECK_THROWS_AS(resume(tmp.path / "cut", &second), RunAborted);
  resume(tmp.path / "cut");
  CHECK(slurp(tmp.path / "full" / kTrialLogFile) ==
        slurp(tmp.path / "cut" / kTrialLogFile));
}

TEST_CASE("resume of a completed run is a no-op") {
  test_util::TempDir tmp("stratsearch-orch");
  const SearchRun run = run_search(base_config(tmp.path / "run"));
  const std::string before = slurp(tmp.path / "run" / kTrialLogFile);
  const SearchRun again = resume(tmp.path / "run");
  CHECK(again.completed);
  CHECK(again.epoch == run.epoch);
  CHECK(again.best_reward == run.best_reward);
  CHECK(slurp(tmp.path / "run" / kTrialLogFile) == before);
}

TEST_CASE("resume diagnostics name the missing file") {
  test_util::TempDir tmp("stratsearch-orch");
  CHECK_THROWS_WITH_AS(resume(tmp.path / "nowhere"),
                       doctest::Contains("config.json"), DecodeError);

  RunConfig config = base_config(tmp.path / "run");
  RunHooks hooks;
  hooks.abort_after_completion = [](long n) { return n == 5; };
  CHECK_THROWS_AS(run_search(config, &hooks), RunAborted);

  std::filesystem::remove(tmp.path / "run" / kTrialLogFile);
  CHECK_THROWS_WITH_AS(resume(tmp.path / "run"), doctest::Contains("trials.jsonl"),
                       DecodeError);
}

TEST_CASE("resume after a missing checkpoint file is an explicit error") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.max_epoch = 15;
  RunHooks hooks;
  hooks.abort_after_completion = [](long n) { return n == 12; };
  CHECK_THROWS_AS(run_search(config, &hooks), RunAborted);
  std::filesystem::remove(tmp.path / "run" / kCheckpointDir / "ckpt_00000010.bin");
  CHECK_THROWS_WITH_AS(resume(tmp.path / "run"), doctest::Contains("ckpt_00000010.bin"),
                       DecodeError);
}

TEST_CASE("replaying the log reproduces the final checkpoint bit-exactly") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.max_epoch = 25;
  run_search(config);

  const ControllerCheckpoint replayed = replay_controller(tmp.path / "run");
  const auto final_blob =
      slurp(tmp.path / "run" / kCheckpointDir / "ckpt_00000025.bin");
  const auto replay_blob =
      save_checkpoint(replayed.config, replayed.params, replayed.state);
  REQUIRE(final_blob.size() == replay_blob.size());
  CHECK(std::equal(replay_blob.begin(), replay_blob.end(), final_blob.begin(),
                   [](std::uint8_t a, char b) {
                     return a == static_cast<std::uint8_t>(b);
                   }));
}

TEST_CASE("torn trailing bytes are healed on resume") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig reference = base_config(tmp.path / "full");
  run_search(reference);

  RunConfig interrupted = base_config(tmp.path / "cut");
  RunHooks hooks;
  hooks.abort_after_completion = [](long n) { return n == 8; };
  CHECK_THROWS_AS(run_search(interrupted, &hooks), RunAborted);
  {
    std::ofstream out(tmp.path / "cut" / kTrialLogFile,
                      std::ios::binary | std::ios::app);
    out << "{\"event\":\"trial_fini";  // simulated torn write
  }
  resume(tmp.path / "cut");
  CHECK(slurp(tmp.path / "full" / kTrialLogFile) ==
        slurp(tmp.path / "cut" / kTrialLogFile));
}

TEST_CASE("search beats pure random sampling on the sphere surface") {
  // 200-trial budget on sphere d=2 against a 200-sample random control with
  // the same master seed, over five seeds; the search must win or tie at
  // least four and always beat the all-0.5 strategy. Uses the benchmark
  // controller settings (reward baseline on, smaller step) rather than the
  // raw defaults, which overshoot at this reward scale.
  int wins = 0;
  int beats_fixed = 0;
  const Eigen::VectorXd optimum = SphereSurface::default_optimum(2);
  const SphereSurface sphere(optimum);
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL, 44ULL, 55ULL}) {
    test_util::TempDir tmp("stratsearch-quality");
    RunConfig config = base_config(tmp.path / "run");
    config.run.max_epoch = 200;
    config.run.initial_jobs = 8;
    config.run.master_seed = seed;
    config.controller.learning_rate = 0.02;
    config.controller.use_reward_baseline = true;
    config.controller.baseline_momentum = 0.7;
    const SearchRun run = run_search(config);

    double random_best = -1e300;
    for (int i = 0; i < 200; ++i) {
      const StrategyVector x = random_strategy(
          config.search_space,
          derive_seed(seed, seed_stream::kInitStrategy, static_cast<std::uint64_t>(i)));
      EvaluationRequest req;
      req.trial_id = i;
      req.strategy = x;
      req.native = x;
      req.rng_seed = derive_seed(seed, seed_stream::kEvaluation,
                                 static_cast<std::uint64_t>(i));
      random_best = std::max(random_best, sphere.evaluate(req).reward);
    }
    if (run.best_reward >= random_best) ++wins;

    EvaluationRequest fixed;
    fixed.trial_id = 0;
    fixed.strategy = StrategyVector::Constant(2, 0.5);
    fixed.native = fixed.strategy;
    fixed.rng_seed = 0;
    if (run.best_reward >= sphere.evaluate(fixed).reward) ++beats_fixed;
  }
  CHECK(wins >= 4);
  CHECK(beats_fixed == 5);
}

TEST_CASE("report carries best, curve, trajectory, and failure summary") {
  test_util::TempDir tmp("stratsearch-report");
  RunConfig config = base_config(tmp.path / "run");
  config.run.max_epoch = 12;
  FlakyEvaluator flaky;
  RunHooks hooks;
  hooks.evaluator = &flaky;
  const SearchRun run = run_search(config, &hooks);

  const json report = build_report(tmp.path / "run");
  CHECK(report.at("counts").at("succeeded") == 12);
  CHECK(report.at("counts").at("failed").get<long>() > 0);
  CHECK(report.at("best").at("reward").get<double>() == run.best_reward);
  CHECK(report.at("failures").at("by_kind").contains("other"));

  // Best-so-far curve is non-decreasing and consistent with per-trial rewards.
  double prev = -1e300;
  for (const json& row : report.at("curve")) {
    const double best_so_far = row.at("best_so_far").get<double>();
    CHECK(best_so_far >= prev);
    CHECK(best_so_far >= row.at("reward").get<double>());
    prev = best_so_far;
  }
  CHECK(report.at("curve").size() == 12);
  for (const auto& [name, values] : report.at("trajectory").items()) {
    (void)name;
    CHECK(values.size() == 12);
  }

  // Text and JSON carry identical numbers (same serialization).
  const std::string text = format_report_text(report);
  CHECK(text.find("reward=" + report["best"]["reward"].dump()) != std::string::npos);
  CHECK(text.find("normalized=" + report["best"]["strategy"][0].dump()) !=
        std::string::npos);
  CHECK(text.find("native=" + report["best"]["native"][1].dump()) != std::string::npos);
}

TEST_CASE("report of a run with one success has a length-one curve") {
  test_util::TempDir tmp("stratsearch-report");
  RunConfig config = base_config(tmp.path / "run");
  config.run.initial_jobs = 1;
  config.run.max_epoch = 1;
  run_search(config);
  const json report = build_report(tmp.path / "run");
  CHECK(report.at("curve").size() == 1);
  CHECK(report.at("best").at("reward").is_number());
}

TEST_CASE("report of an empty run says so explicitly") {
  test_util::TempDir tmp("stratsearch-report");
  const auto dir = tmp.path / "run";
  std::filesystem::create_directories(dir);
  {
    TrialLogWriter writer = TrialLogWriter::create(dir / kTrialLogFile);
    writer.write_batch({{{"event", "header"},
                         {"schema_version", kLogSchemaVersion},
                         {"dim", 1},
                         {"param_names", json::array({"x"})},
                         {"evaluator_type", "sphere"},
                         {"master_seed", 0},
                         {"max_epoch", 10},
                         {"initial_jobs", 1},
                         {"workers", 1}}});
  }
  const json report = build_report(dir);
  CHECK(report.at("best").is_null());
  CHECK(report.at("message") == "no completed trials");
  const std::string text = format_report_text(report);
  CHECK(text.find("no completed trials") != std::string::npos);
}

TEST_CASE("baseline runner logs orchestrator-schema records and a summary") {
  test_util::TempDir tmp("stratsearch-baseline");
  RunConfig config = base_config(tmp.path / "run");
  config.baseline.max_evals = 500;
  const HillClimbResult result = run_baseline(config, HillClimbMode::Discrete);
  CHECK(result.best_value > 0.99);  // sphere optimum (0.3, 0.7) is on the grid

  const json report = build_report(tmp.path / "run");
  CHECK(report.at("counts").at("succeeded").get<long>() == result.evals);
  CHECK(report.at("best").at("reward").get<double>() == result.best_value);
  CHECK(report.at("best").at("origin") == "baseline");

  const json summary = json::parse(slurp(tmp.path / "run" / "result.json"));
  CHECK(summary.at("best_value").get<double>() == result.best_value);
  CHECK(summary.at("mode") == "discrete");

  // Baseline runs have no controller checkpoints, so resume must refuse.
  CHECK_THROWS_AS(resume(tmp.path / "run"), DecodeError);
}

TEST_CASE("continuous baseline converges on the sphere config") {
  test_util::TempDir tmp("stratsearch-baseline");
  RunConfig config = base_config(tmp.path / "run");
  config.baseline.max_evals = 2000;
  const HillClimbResult result = run_baseline(config, HillClimbMode::Continuous);
  CHECK(result.best_value > 0.999);
}

TEST_CASE("fresh search refuses to clobber an existing run directory") {
  test_util::TempDir tmp("stratsearch-orch");
  RunConfig config = base_config(tmp.path / "run");
  config.run.max_epoch = 2;
  config.run.initial_jobs = 2;
  run_search(config);
  CHECK_THROWS_AS(run_search(config), ConfigError);
}
