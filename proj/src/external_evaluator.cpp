// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/external_evaluator.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stratsearch/errors.hpp"

namespace stratsearch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ChildOutcome {
  int exit_status = 0;        // raw status from waitpid
  bool timed_out = false;
  std::string stdout_text;
};

// Runs `command` under /bin/sh -c, capturing stdout. The child is placed in
// its own process group so a timeout can kill the whole tree.
ChildOutcome run_child(const std::string& command, double timeout_seconds) {
  int pipe_fds[2];
  if (pipe(pipe_fds) != 0)
    throw EvalError(EvalFailureKind::SpawnFailure,
                    std::string("pipe() failed: ") + std::strerror(errno));

  const pid_t pid = fork();
  if (pid < 0) {
    close(pipe_fds[0]);
    close(pipe_fds[1]);
    throw EvalError(EvalFailureKind::SpawnFailure,
                    std::string("fork() failed: ") + std::strerror(errno));
  }

  if (pid == 0) {
    // Child: own process group, stdout -> pipe, stdin -> /dev/null.
    setpgid(0, 0);
    dup2(pipe_fds[1], STDOUT_FILENO);
    close(pipe_fds[0]);
    close(pipe_fds[1]);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      close(devnull);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(pipe_fds[1]);

  ChildOutcome outcome;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds);
  const bool has_deadline = timeout_seconds > 0.0;

  char buffer[4096];
  bool eof = false;
  while (!eof) {
    int wait_ms = -1;
    if (has_deadline) {
      const auto remaining = deadline - std::chrono::steady_clock::now();
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count();
      if (ms <= 0) {
        outcome.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(ms, 1000));
    }

    struct pollfd pfd {pipe_fds[0], POLLIN, 0};
    const int rc = poll(&pfd, 1, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) continue;  // poll tick; deadline re-checked above

    const ssize_t n = read(pipe_fds[0], buffer, sizeof(buffer));
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) {
      eof = true;
    } else {
      outcome.stdout_text.append(buffer, static_cast<std::size_t>(n));
    }
  }
  close(pipe_fds[0]);

  if (outcome.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);  // in case setpgid raced
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  outcome.exit_status = status;
  return outcome;
}

std::optional<double> parse_reward_line(const std::string& line) {
  static constexpr std::string_view kSentinel = "REWARD:";
  std::size_t start = line.find_first_not_of(" \t");
  if (start == std::string::npos) return std::nullopt;
  if (line.compare(start, kSentinel.size(), kSentinel) != 0) return std::nullopt;
  std::size_t pos = start + kSentinel.size();
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  std::size_t end = line.find_last_not_of(" \t\r");
  if (end == std::string::npos || end < pos) return std::nullopt;
  const std::string token = line.substr(pos, end - pos + 1);
  try {
    std::size_t consumed = 0;
    const double value = std::stod(token, &consumed);
    if (consumed != token.size() || !std::isfinite(value)) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<double> extract_reward(const std::string& text) {
  std::optional<double> reward;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (auto value = parse_reward_line(line)) reward = value;  // last one wins
  }
  return reward;
}

std::string replace_all(std::string text, const std::string& needle,
                        const std::string& replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
  return text;
}

fs::path make_trial_dir(std::int64_t trial_id) {
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream name;
  name << "stratsearch-" << getpid() << "-" << trial_id << "-"
       << counter.fetch_add(1);
  fs::path dir = fs::temp_directory_path() / name.str();
  fs::create_directories(dir);
  return dir;
}

struct TrialDirGuard {
  fs::path dir;
  ~TrialDirGuard() {
    std::error_code ec;
    fs::remove_all(dir, ec);  // best effort
  }
};

}  // namespace

ExternalEvaluator::ExternalEvaluator(SearchSpace space, std::string command_template,
                                     double timeout_seconds)
    : space_(std::move(space)),
      command_template_(std::move(command_template)),
      timeout_seconds_(timeout_seconds) {
  space_.validate();
  if (command_template_.find("{request}") == std::string::npos)
    throw ConfigError("external evaluator command must contain a {request} placeholder");
}

std::string ExternalEvaluator::request_json(const EvaluationRequest& request) const {
  require_valid_strategy(space_, request.strategy);
  if (request.native.size() != space_.dim())
    throw std::invalid_argument("external evaluator: native vector dimension mismatch");
  json params = json::array();
  for (Eigen::Index k = 0; k < space_.dim(); ++k) {
    params.push_back({{"name", space_.params[static_cast<std::size_t>(k)].name},
                      {"normalized", request.strategy[k]},
                      {"native", request.native[k]}});
  }
  const json doc = {{"trial_id", request.trial_id},
                    {"seed", request.rng_seed},
                    {"params", params}};
  return doc.dump();
}

EvaluationResult ExternalEvaluator::evaluate(const EvaluationRequest& request) const {
  TrialDirGuard guard{make_trial_dir(request.trial_id)};
  const fs::path request_path = guard.dir / "request.json";
  {
    std::ofstream out(request_path);
    if (!out)
      throw EvalError(EvalFailureKind::SpawnFailure,
                      "cannot write request file " + request_path.string());
    out << request_json(request) << "\n";
  }

  const std::string command =
      replace_all(command_template_, "{request}", request_path.string());

  const auto started = std::chrono::steady_clock::now();
  const ChildOutcome outcome = run_child(command, timeout_seconds_);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (outcome.timed_out) {
    std::ostringstream msg;
    msg << "trial " << request.trial_id << " timed out after " << timeout_seconds_
        << " s";
    throw EvalError(EvalFailureKind::Timeout, msg.str());
  }
  if (WIFSIGNALED(outcome.exit_status)) {
    std::ostringstream msg;
    msg << "trial " << request.trial_id << " child killed by signal "
        << WTERMSIG(outcome.exit_status);
    throw EvalError(EvalFailureKind::NonZeroExit, msg.str());
  }
  if (!WIFEXITED(outcome.exit_status) || WEXITSTATUS(outcome.exit_status) != 0) {
    std::ostringstream msg;
    msg << "trial " << request.trial_id << " child exited with status "
        << (WIFEXITED(outcome.exit_status) ? WEXITSTATUS(outcome.exit_status) : -1);
    throw EvalError(EvalFailureKind::NonZeroExit, msg.str());
  }

  const std::optional<double> reward = extract_reward(outcome.stdout_text);
  if (!reward) {
    std::ostringstream msg;
    msg << "trial " << request.trial_id
        << " produced no parseable 'REWARD: <float>' line on stdout";
    throw EvalError(EvalFailureKind::MissingReward, msg.str());
  }

  EvaluationResult result;
  result.trial_id = request.trial_id;
  result.reward = *reward;
  result.wall_time_seconds = elapsed;
  return result;
}

}  // namespace stratsearch
