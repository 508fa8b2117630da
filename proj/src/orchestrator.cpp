// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "stratsearch/rng.hpp"
#include "stratsearch/trial_log.hpp"

namespace stratsearch {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(TrialOrigin origin) {
  switch (origin) {
    case TrialOrigin::RandomInit:
      return "random_init";
    case TrialOrigin::ControllerProposal:
      return "controller_proposal";
  }
  return "unknown";
}

const char* to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::Pending:
      return "pending";
    case TrialStatus::Running:
      return "running";
    case TrialStatus::Succeeded:
      return "succeeded";
    case TrialStatus::Failed:
      return "failed";
  }
  return "unknown";
}

namespace {

// --- JSON helpers ------------------------------------------------------------

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw DecodeError(std::string("expected array for ") + what);
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

json policy_step_to_json(const PolicyStep& step) {
  return {{"input", vec_to_json(step.input)},
          {"means", vec_to_json(step.means)},
          {"log_prob", step.log_prob},
          {"hidden_before", vec_to_json(step.hidden_before)}};
}

PolicyStep policy_step_from_json(const json& node, const Eigen::VectorXd& action) {
  PolicyStep step;
  step.input = vec_from_json(node.at("input"), "policy_step.input");
  step.means = vec_from_json(node.at("means"), "policy_step.means");
  step.hidden_before = vec_from_json(node.at("hidden_before"), "policy_step.hidden_before");
  step.log_prob = node.at("log_prob").get<double>();
  step.sampled_action = action;
  return step;
}

std::string checkpoint_filename(long epoch) {
  std::ostringstream name;
  name << "ckpt_" << std::setw(8) << std::setfill('0') << epoch << ".bin";
  return name.str();
}

void write_blob(const fs::path& path, const std::vector<std::uint8_t>& blob) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint file: " + path.string());
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint file: " + path.string());
}

std::vector<std::uint8_t> read_blob(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw DecodeError("cannot open checkpoint file: " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> blob(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(blob.data()), size))
    throw DecodeError("failed reading checkpoint file: " + path.string());
  return blob;
}

double steady_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// --- worker pool ----------------------------------------------------------------

struct EvalTask {
  std::int64_t trial_id = -1;
  EvaluationRequest request;
};

struct EvalCompletion {
  std::int64_t trial_id = -1;
  bool ok = false;
  double reward = 0.0;
  double wall_time_seconds = 0.0;
  EvalFailureKind kind = EvalFailureKind::Other;
  std::string message;
};

/// Fixed-size thread pool; at most `workers` evaluations run at any instant.
class WorkerPool {
 public:
  WorkerPool(int workers, const Evaluator& evaluator) : evaluator_(evaluator) {
    threads_.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i)
      threads_.emplace_back([this] { work(); });
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    task_cv_.notify_all();
    for (std::thread& t : threads_) t.join();
  }

  void submit(EvalTask task) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      tasks_.push_back(std::move(task));
    }
    task_cv_.notify_one();
  }

  EvalCompletion wait_completion() {
    std::unique_lock<std::mutex> lock(mutex_);
    completion_cv_.wait(lock, [this] { return !completions_.empty(); });
    EvalCompletion c = std::move(completions_.front());
    completions_.pop_front();
    return c;
  }

 private:
  void work() {
    for (;;) {
      EvalTask task;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        task_cv_.wait(lock, [this] { return stop_ || !tasks_.empty(); });
        if (tasks_.empty()) return;  // stop requested, queue drained
        task = std::move(tasks_.front());
        tasks_.pop_front();
      }
      EvalCompletion c;
      c.trial_id = task.trial_id;
      const double started = steady_seconds();
      try {
        const EvaluationResult result = evaluator_.evaluate(task.request);
        if (!std::isfinite(result.reward))
          throw EvalError(EvalFailureKind::BadValue,
                          "evaluator returned a non-finite reward");
        c.ok = true;
        c.reward = result.reward;
      } catch (const EvalError& e) {
        c.ok = false;
        c.kind = e.kind();
        c.message = e.what();
      } catch (const std::exception& e) {
        c.ok = false;
        c.kind = EvalFailureKind::Other;
        c.message = e.what();
      }
      c.wall_time_seconds = steady_seconds() - started;
      {
        std::lock_guard<std::mutex> lock(mutex_);
        completions_.push_back(std::move(c));
      }
      completion_cv_.notify_one();
    }
  }

  const Evaluator& evaluator_;
  std::vector<std::thread> threads_;
  std::deque<EvalTask> tasks_;
  std::deque<EvalCompletion> completions_;
  std::mutex mutex_;
  std::condition_variable task_cv_;
  std::condition_variable completion_cv_;
  bool stop_ = false;
};

// --- log record scan -------------------------------------------------------------

struct LogScan {
  json header;
  std::map<std::int64_t, json> launch_by_id;
  std::vector<std::int64_t> launch_order;
  std::map<std::int64_t, json> finish_by_id;
  std::vector<std::int64_t> finish_order;
  long epoch = 0;
  long finished_count = 0;
  std::int64_t best_trial_id = -1;
  double best_reward = 0.0;
  json last_checkpoint;   // null if none
  json first_checkpoint;  // null if none
  std::uint64_t next_seq = 0;
  bool run_complete = false;
};

LogScan scan_records(const std::vector<json>& records, const fs::path& log_path) {
  LogScan scan;
  scan.last_checkpoint = nullptr;
  scan.first_checkpoint = nullptr;
  if (records.empty())
    throw DecodeError("trial log is empty: " + log_path.string());
  for (const json& record : records) {
    const std::string event = record.at("event").get<std::string>();
    if (event == log_event::kHeader) {
      scan.header = record;
    } else if (event == log_event::kTrialLaunched) {
      const std::int64_t id = record.at("trial_id").get<std::int64_t>();
      scan.launch_by_id[id] = record;
      scan.launch_order.push_back(id);
    } else if (event == log_event::kTrialFinished) {
      const std::int64_t id = record.at("trial_id").get<std::int64_t>();
      scan.finish_by_id[id] = record;
      scan.finish_order.push_back(id);
      ++scan.finished_count;
      scan.epoch = record.at("epoch").get<long>();
      if (record.at("status").get<std::string>() == "succeeded") {
        const double reward = record.at("reward").get<double>();
        if (scan.best_trial_id < 0 || reward > scan.best_reward) {
          scan.best_trial_id = id;
          scan.best_reward = reward;
        }
      }
    } else if (event == log_event::kCheckpoint) {
      if (scan.first_checkpoint.is_null()) scan.first_checkpoint = record;
      scan.last_checkpoint = record;
    } else if (event == log_event::kRunComplete) {
      scan.run_complete = true;
    }
    scan.next_seq = record.at("seq").get<std::uint64_t>() + 1;
  }
  if (scan.header.is_null())
    throw DecodeError("trial log has no header record: " + log_path.string());
  return scan;
}

// Re-applies logged controller events (updates and proposal forwards) on top
// of a checkpointed controller. Touches only records with seq > from_seq.
void replay_events(const std::vector<json>& records, std::uint64_t from_seq,
                   const std::map<std::int64_t, json>& launch_by_id,
                   const ControllerConfig& cc, ControllerParams& params,
                   ControllerState& state) {
  for (const json& record : records) {
    if (record.at("seq").get<std::uint64_t>() <= from_seq) continue;
    const std::string event = record.at("event").get<std::string>();
    if (event == log_event::kControllerUpdate) {
      const std::int64_t id = record.at("trial_id").get<std::int64_t>();
      const auto it = launch_by_id.find(id);
      if (it == launch_by_id.end())
        throw DecodeError("controller_update references unknown trial " +
                          std::to_string(id));
      const json& launch = it->second;
      const PolicyStep step = policy_step_from_json(
          launch.at("policy_step"), vec_from_json(launch.at("strategy"), "strategy"));
      const double reward = record.at("reward").get<double>();
      std::tie(params, state) = policy_update(params, state, step, reward, cc);
    } else if (event == log_event::kTrialLaunched &&
               record.at("origin").get<std::string>() == "controller_proposal") {
      const Eigen::VectorXd input =
          vec_from_json(record.at("policy_step").at("input"), "policy_step.input");
      const std::uint64_t proposal_seed = record.at("proposal_seed").get<std::uint64_t>();
      auto [step, new_state] = policy_forward(params, state, input, cc, proposal_seed);
      const Eigen::VectorXd logged =
          vec_from_json(record.at("strategy"), "strategy");
      if (step.sampled_action != logged)
        throw DecodeError("trial log is inconsistent with checkpoint: replayed "
                          "proposal for trial " +
                          std::to_string(record.at("trial_id").get<std::int64_t>()) +
                          " diverges");
      state = std::move(new_state);
    }
  }
}

// --- coordinator --------------------------------------------------------------

class Coordinator {
 public:
  // Fresh run: lays out the run directory, writes header + epoch-0
  // checkpoint + initial launches as one batch.
  Coordinator(RunConfig config, const RunHooks* hooks)
      : config_(std::move(config)), hooks_(hooks) {
    config_.validate();
    if (config_.output_dir.empty())
      throw ConfigError("run has no output directory");
    dir_ = config_.output_dir;

    std::error_code ec;
    fs::create_directories(dir_, ec);
    fs::create_directories(dir_ / kCheckpointDir, ec);
    if (!fs::is_directory(dir_) || !fs::is_directory(dir_ / kCheckpointDir))
      throw ConfigError("cannot create output directory: " + dir_.string());

    writer_.emplace(TrialLogWriter::create(dir_ / kTrialLogFile));
    {
      std::ofstream out(dir_ / kConfigFile);
      if (!out) throw ConfigError("cannot write config copy in " + dir_.string());
      out << run_config_to_json(config_).dump(2) << "\n";
    }

    evaluator_ = (hooks_ && hooks_->evaluator) ? nullptr : make_evaluator(config_);
    active_evaluator_ = evaluator_ ? evaluator_.get() : hooks_->evaluator;
    std::tie(params_, state_) = init_controller(
        config_.controller,
        derive_seed(config_.run.master_seed, seed_stream::kControllerInit, 0));

    std::vector<json> batch;
    batch.push_back(make_header());
    batch.push_back(write_checkpoint_file());
    for (int i = 0; i < config_.run.initial_jobs; ++i) {
      const StrategyVector strategy = random_strategy(
          config_.search_space,
          derive_seed(config_.run.master_seed, seed_stream::kInitStrategy,
                      static_cast<std::uint64_t>(i)));
      Trial& t = create_trial(strategy, TrialOrigin::RandomInit);
      batch.push_back(launch_record(t));
      to_submit_.push_back(t.trial_id);
    }
    writer_->write_batch(std::move(batch));
  }

  // Resume: restore from config copy + log + latest checkpoint.
  Coordinator(const fs::path& run_dir, const RunHooks* hooks) : hooks_(hooks) {
    dir_ = run_dir;
    const fs::path config_path = dir_ / kConfigFile;
    if (!fs::exists(config_path))
      throw DecodeError("missing config file: " + config_path.string());
    config_ = load_run_config(config_path);
    config_.output_dir = dir_;

    const fs::path log_path = dir_ / kTrialLogFile;
    if (!fs::exists(log_path))
      throw DecodeError("missing trial log: " + log_path.string());
    LogReadResult log = read_trial_log(log_path);
    if (log.had_partial_tail) {
      // Torn write from a crash: drop the partial line and continue from the
      // last complete record.
      fs::resize_file(log_path, log.clean_size);
    }

    LogScan scan = scan_records(log.records, log_path);
    epoch_ = scan.epoch;
    best_trial_id_ = scan.best_trial_id;
    best_reward_ = scan.best_reward;
    completed_ = scan.run_complete;

    if (scan.last_checkpoint.is_null())
      throw DecodeError("no controller checkpoint recorded in " + log_path.string());
    const fs::path ckpt_path =
        dir_ / scan.last_checkpoint.at("path").get<std::string>();
    if (!fs::exists(ckpt_path))
      throw DecodeError("missing checkpoint file: " + ckpt_path.string());
    ControllerCheckpoint ckpt = load_checkpoint(read_blob(ckpt_path));
    if (ckpt.config.dim != config_.controller.dim ||
        ckpt.config.hidden_size != config_.controller.hidden_size)
      throw DecodeError("checkpoint " + ckpt_path.string() +
                        " does not match the run config");
    params_ = std::move(ckpt.params);
    state_ = std::move(ckpt.state);
    last_checkpoint_epoch_ = scan.last_checkpoint.at("epoch").get<long>();

    replay_events(log.records, scan.last_checkpoint.at("seq").get<std::uint64_t>(),
                  scan.launch_by_id, config_.controller, params_, state_);

    // Rebuild the trial table in id order.
    for (const std::int64_t id : scan.launch_order) {
      const json& launch = scan.launch_by_id.at(id);
      Trial t;
      t.trial_id = id;
      t.strategy = vec_from_json(launch.at("strategy"), "strategy");
      t.native = vec_from_json(launch.at("native"), "native");
      t.eval_seed = launch.at("eval_seed").get<std::uint64_t>();
      const std::string origin = launch.at("origin").get<std::string>();
      if (origin == "controller_proposal") {
        t.origin = TrialOrigin::ControllerProposal;
        t.parent_trial_id = launch.at("parent_trial_id").get<std::int64_t>();
        t.proposal_seed = launch.at("proposal_seed").get<std::uint64_t>();
        t.policy_step = policy_step_from_json(launch.at("policy_step"), t.strategy);
      }
      const auto fin = scan.finish_by_id.find(id);
      if (fin == scan.finish_by_id.end()) {
        t.status = TrialStatus::Pending;
      } else if (fin->second.at("status").get<std::string>() == "succeeded") {
        t.status = TrialStatus::Succeeded;
        t.reward = fin->second.at("reward").get<double>();
      } else {
        t.status = TrialStatus::Failed;
        t.error_kind = fin->second.at("error_kind").get<std::string>();
        t.error_message = fin->second.value("error_message", std::string());
      }
      if (static_cast<std::int64_t>(trials_.size()) != id)
        throw DecodeError("trial log has non-contiguous trial ids in " +
                          log_path.string());
      trials_.push_back(std::move(t));
    }
    next_trial_id_ = static_cast<std::int64_t>(trials_.size());

    // Unfinished trials are re-launched with their original seeds.
    for (const std::int64_t id : scan.launch_order) {
      if (!scan.finish_by_id.count(id)) {
        to_submit_.push_back(id);
        ++outstanding_;
      }
    }

    evaluator_ = (hooks_ && hooks_->evaluator) ? nullptr : make_evaluator(config_);
    active_evaluator_ = evaluator_ ? evaluator_.get() : hooks_->evaluator;
    if (!completed_)
      writer_.emplace(TrialLogWriter::append(log_path, scan.next_seq));
  }

  SearchRun run() {
    if (completed_) return snapshot();

    WorkerPool pool(config_.run.workers, *active_evaluator_);
    flush_submissions(pool);

    while (epoch_ < config_.run.max_epoch) {
      if (outstanding_ == 0)
        throw std::runtime_error(
            "search loop stalled: epoch budget remains but no trials are in flight");
      process_completion(pool.wait_completion(), pool);
    }
    while (outstanding_ > 0) await_straggler(pool.wait_completion());

    finalize();
    return snapshot();
  }

 private:
  json make_header() const {
    json names = json::array();
    for (const ParamSpec& p : config_.search_space.params) names.push_back(p.name);
    return {{"event", log_event::kHeader},
            {"schema_version", kLogSchemaVersion},
            {"dim", config_.search_space.dim()},
            {"param_names", names},
            {"evaluator_type", config_.evaluator.type},
            {"master_seed", config_.run.master_seed},
            {"max_epoch", config_.run.max_epoch},
            {"initial_jobs", config_.run.initial_jobs},
            {"workers", config_.run.workers}};
  }

  Trial& create_trial(const StrategyVector& strategy, TrialOrigin origin) {
    Trial t;
    t.trial_id = next_trial_id_++;
    t.strategy = strategy;
    t.native = denormalize(config_.search_space, strategy);
    t.origin = origin;
    t.eval_seed = derive_seed(config_.run.master_seed, seed_stream::kEvaluation,
                              static_cast<std::uint64_t>(t.trial_id));
    trials_.push_back(std::move(t));
    ++outstanding_;
    return trials_.back();
  }

  // Forwards the policy from the parent's strategy and registers the
  // proposal. Takes the parent data by value: create_trial may reallocate
  // the trial table.
  Trial& create_proposal(std::int64_t parent_id, StrategyVector parent_strategy) {
    const std::int64_t id = next_trial_id_;
    const std::uint64_t proposal_seed = derive_seed(
        config_.run.master_seed, seed_stream::kProposal, static_cast<std::uint64_t>(id));
    auto [step, new_state] = policy_forward(params_, state_, parent_strategy,
                                            config_.controller, proposal_seed);
    state_ = std::move(new_state);
    Trial& t = create_trial(step.sampled_action, TrialOrigin::ControllerProposal);
    t.parent_trial_id = parent_id;
    t.proposal_seed = proposal_seed;
    t.policy_step = std::move(step);
    return t;
  }

  json launch_record(const Trial& t) const {
    json record = {{"event", log_event::kTrialLaunched},
                   {"trial_id", t.trial_id},
                   {"origin", to_string(t.origin)},
                   {"strategy", vec_to_json(t.strategy)},
                   {"native", vec_to_json(t.native)},
                   {"eval_seed", t.eval_seed}};
    if (t.origin == TrialOrigin::ControllerProposal) {
      record["parent_trial_id"] = t.parent_trial_id;
      record["proposal_seed"] = t.proposal_seed;
      record["policy_step"] = policy_step_to_json(*t.policy_step);
    }
    return record;
  }

  json write_checkpoint_file() {
    const std::string name = checkpoint_filename(epoch_);
    const fs::path rel = fs::path(kCheckpointDir) / name;
    write_blob(dir_ / rel, save_checkpoint(config_.controller, params_, state_));
    last_checkpoint_epoch_ = epoch_;
    return {{"event", log_event::kCheckpoint},
            {"epoch", epoch_},
            {"path", rel.generic_string()}};
  }

  void flush_submissions(WorkerPool& pool) {
    for (const std::int64_t id : to_submit_) {
      Trial& t = trials_[static_cast<std::size_t>(id)];
      t.status = TrialStatus::Running;
      t.submitted_at_seconds = steady_seconds();
      EvalTask task;
      task.trial_id = id;
      task.request.trial_id = id;
      task.request.strategy = t.strategy;
      task.request.native = t.native;
      task.request.rng_seed = t.eval_seed;
      pool.submit(std::move(task));
    }
    to_submit_.clear();
  }

  void process_completion(const EvalCompletion& c, WorkerPool& pool) {
    // Copies of the finished trial's fields: launching a successor can
    // reallocate the trial table.
    std::int64_t finished_id;
    StrategyVector finished_strategy;
    std::string failure_message;
    {
      Trial& t = trials_[static_cast<std::size_t>(c.trial_id)];
      t.finished_at_seconds = steady_seconds();
      finished_id = t.trial_id;
      finished_strategy = t.strategy;
      failure_message = c.message;
    }
    --outstanding_;
    ++completions_this_process_;

    std::vector<json> batch;
    if (c.ok) {
      Trial& t = trials_[static_cast<std::size_t>(c.trial_id)];
      t.status = TrialStatus::Succeeded;
      t.reward = c.reward;
      ++epoch_;
      if (best_trial_id_ < 0 || t.reward > best_reward_) {
        best_trial_id_ = t.trial_id;
        best_reward_ = t.reward;
      }
      batch.push_back(finish_record(t));
      if (t.policy_step) {
        std::tie(params_, state_) =
            policy_update(params_, state_, *t.policy_step, t.reward, config_.controller);
        batch.push_back({{"event", log_event::kControllerUpdate},
                         {"trial_id", finished_id},
                         {"reward", c.reward},
                         {"epoch", epoch_}});
      }
      maybe_launch_successor(finished_id, finished_strategy, batch);
      if (epoch_ % kCheckpointEvery == 0 && last_checkpoint_epoch_ != epoch_)
        batch.push_back(write_checkpoint_file());
    } else {
      Trial& t = trials_[static_cast<std::size_t>(c.trial_id)];
      t.status = TrialStatus::Failed;
      t.error_kind = to_string(c.kind);
      t.error_message = c.message;
      ++total_failed_;
      batch.push_back(finish_record(t));
      // A failure is not a reward: no controller update, but the strategy
      // still seeds a replacement proposal.
      maybe_launch_successor(finished_id, finished_strategy, batch);
      if (total_failed_ > 10 * config_.run.max_epoch + 100)
        throw std::runtime_error(
            "aborting run: evaluator failed " + std::to_string(total_failed_) +
            " times (last error: " + failure_message + ")");
    }

    writer_->write_batch(std::move(batch));
    if (hooks_ && hooks_->abort_after_completion &&
        hooks_->abort_after_completion(completions_this_process_))
      throw RunAborted();
    flush_submissions(pool);
  }

  void maybe_launch_successor(std::int64_t parent_id, const StrategyVector& strategy,
                              std::vector<json>& batch) {
    if (epoch_ + outstanding_ >= config_.run.max_epoch) return;
    Trial& next = create_proposal(parent_id, strategy);
    batch.push_back(launch_record(next));
    to_submit_.push_back(next.trial_id);
  }

  json finish_record(const Trial& t) const {
    json record = {{"event", log_event::kTrialFinished},
                   {"trial_id", t.trial_id},
                   {"status", to_string(t.status)},
                   {"epoch", epoch_}};
    if (t.status == TrialStatus::Succeeded) {
      record["reward"] = t.reward;
    } else {
      record["error_kind"] = t.error_kind;
      record["error_message"] = t.error_message;
    }
    return record;
  }

  // Completions arriving after the epoch budget is spent are recorded but
  // trigger no updates or proposals.
  void await_straggler(const EvalCompletion& c) {
    Trial& t = trials_[static_cast<std::size_t>(c.trial_id)];
    t.finished_at_seconds = steady_seconds();
    --outstanding_;
    std::vector<json> batch;
    if (c.ok) {
      t.status = TrialStatus::Succeeded;
      t.reward = c.reward;
      if (best_trial_id_ < 0 || t.reward > best_reward_) {
        best_trial_id_ = t.trial_id;
        best_reward_ = t.reward;
      }
    } else {
      t.status = TrialStatus::Failed;
      t.error_kind = to_string(c.kind);
      t.error_message = c.message;
    }
    batch.push_back(finish_record(t));
    writer_->write_batch(std::move(batch));
  }

  void finalize() {
    std::vector<json> batch;
    if (last_checkpoint_epoch_ != epoch_) batch.push_back(write_checkpoint_file());
    batch.push_back({{"event", log_event::kRunComplete},
                     {"epoch", epoch_},
                     {"best_trial_id", best_trial_id_},
                     {"best_reward", best_reward_}});
    writer_->write_batch(std::move(batch));
    completed_ = true;
  }

  SearchRun snapshot() const {
    SearchRun run;
    run.config = config_;
    run.trials = trials_;
    run.epoch = epoch_;
    run.best_trial_id = best_trial_id_;
    run.best_reward = best_reward_;
    if (best_trial_id_ >= 0) {
      const Trial& best = trials_[static_cast<std::size_t>(best_trial_id_)];
      run.best_strategy = best.strategy;
      run.best_native = best.native;
    }
    run.params = params_;
    run.state = state_;
    run.completed = completed_;
    return run;
  }

  RunConfig config_;
  const RunHooks* hooks_ = nullptr;
  fs::path dir_;
  std::unique_ptr<Evaluator> evaluator_;
  const Evaluator* active_evaluator_ = nullptr;
  std::optional<TrialLogWriter> writer_;
  ControllerParams params_;
  ControllerState state_;
  std::vector<Trial> trials_;
  std::vector<std::int64_t> to_submit_;
  long epoch_ = 0;
  long outstanding_ = 0;
  long total_failed_ = 0;
  long completions_this_process_ = 0;
  long last_checkpoint_epoch_ = -1;
  std::int64_t next_trial_id_ = 0;
  std::int64_t best_trial_id_ = -1;
  double best_reward_ = 0.0;
  bool completed_ = false;
};

}  // namespace

SearchRun run_search(const RunConfig& config, const RunHooks* hooks) {
  Coordinator coordinator(config, hooks);
  return coordinator.run();
}

SearchRun resume(const fs::path& run_dir, const RunHooks* hooks) {
  Coordinator coordinator(run_dir, hooks);
  return coordinator.run();
}

ControllerCheckpoint replay_controller(const fs::path& run_dir) {
  const fs::path log_path = run_dir / kTrialLogFile;
  if (!fs::exists(log_path))
    throw DecodeError("missing trial log: " + log_path.string());
  const LogReadResult log = read_trial_log(log_path);
  const LogScan scan = scan_records(log.records, log_path);
  if (scan.first_checkpoint.is_null())
    throw DecodeError("no controller checkpoint recorded in " + log_path.string());

  const fs::path ckpt_path =
      run_dir / scan.first_checkpoint.at("path").get<std::string>();
  if (!fs::exists(ckpt_path))
    throw DecodeError("missing checkpoint file: " + ckpt_path.string());
  ControllerCheckpoint ckpt = load_checkpoint(read_blob(ckpt_path));

  replay_events(log.records, scan.first_checkpoint.at("seq").get<std::uint64_t>(),
                scan.launch_by_id, ckpt.config, ckpt.params, ckpt.state);
  return ckpt;
}

}  // namespace stratsearch
