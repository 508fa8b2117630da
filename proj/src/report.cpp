// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/report.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "stratsearch/errors.hpp"
#include "stratsearch/orchestrator.hpp"
#include "stratsearch/trial_log.hpp"

namespace stratsearch {

namespace fs = std::filesystem;
using nlohmann::json;

json build_report(const fs::path& run_dir) {
  const fs::path log_path = run_dir / kTrialLogFile;
  if (!fs::exists(log_path))
    throw DecodeError("missing trial log: " + log_path.string());
  const LogReadResult log = read_trial_log(log_path);

  json header = nullptr;
  std::map<std::int64_t, json> launches;
  std::vector<json> finishes;
  bool complete = false;
  for (const json& record : log.records) {
    const std::string event = record.at("event").get<std::string>();
    if (event == log_event::kHeader) {
      header = record;
    } else if (event == log_event::kTrialLaunched) {
      launches[record.at("trial_id").get<std::int64_t>()] = record;
    } else if (event == log_event::kTrialFinished) {
      finishes.push_back(record);
    } else if (event == log_event::kRunComplete) {
      complete = true;
    }
  }
  if (header.is_null())
    throw DecodeError("trial log has no header record: " + log_path.string());

  std::vector<std::string> param_names;
  for (const json& name : header.at("param_names")) param_names.push_back(name);

  json report;
  report["schema_version"] = 1;
  report["run"] = {{"evaluator_type", header.value("evaluator_type", std::string())},
                   {"dim", header.at("dim")},
                   {"master_seed", header.at("master_seed")},
                   {"max_epoch", header.at("max_epoch")},
                   {"complete", complete}};
  report["param_names"] = param_names;

  // Completion-ordered reward curve plus per-parameter trajectories.
  json curve = json::array();
  json trajectory = json::object();
  for (const std::string& name : param_names) trajectory[name] = json::array();

  long completed = 0;
  long failed = 0;
  std::map<std::string, long> failures_by_kind;
  std::int64_t best_id = -1;
  double best_reward = 0.0;
  for (const json& fin : finishes) {
    const std::int64_t id = fin.at("trial_id").get<std::int64_t>();
    if (fin.at("status").get<std::string>() != "succeeded") {
      ++failed;
      ++failures_by_kind[fin.value("error_kind", std::string("unknown"))];
      continue;
    }
    ++completed;
    const double reward = fin.at("reward").get<double>();
    if (best_id < 0 || reward > best_reward) {
      best_id = id;
      best_reward = reward;
    }
    const auto launch = launches.find(id);
    if (launch == launches.end())
      throw DecodeError("trial log finish without launch for trial " + std::to_string(id));
    curve.push_back({{"completion", completed},
                     {"epoch", fin.at("epoch")},
                     {"trial_id", id},
                     {"origin", launch->second.at("origin")},
                     {"reward", reward},
                     {"best_so_far", best_reward}});
    const json& strategy = launch->second.at("strategy");
    for (std::size_t k = 0; k < param_names.size(); ++k)
      trajectory[param_names[k]].push_back(strategy.at(k));
  }

  report["counts"] = {{"launched", launches.size()},
                      {"succeeded", completed},
                      {"failed", failed},
                      {"unfinished", launches.size() - static_cast<std::size_t>(completed) -
                                         static_cast<std::size_t>(failed)}};
  report["failures"] = {{"total", failed}, {"by_kind", failures_by_kind}};
  report["curve"] = curve;
  report["trajectory"] = trajectory;

  if (completed == 0) {
    report["best"] = nullptr;
    report["message"] = "no completed trials";
  } else {
    const json& launch = launches.at(best_id);
    report["best"] = {{"trial_id", best_id},
                      {"reward", best_reward},
                      {"strategy", launch.at("strategy")},
                      {"native", launch.at("native")},
                      {"origin", launch.at("origin")}};
  }
  return report;
}

namespace {

// Scalars in the text report reuse the JSON serialization so both formats
// carry identical numbers.
std::string num(const json& value) { return value.dump(); }

}  // namespace

std::string format_report_text(const json& report) {
  std::ostringstream out;
  const json& run = report.at("run");
  out << "run: evaluator=" << run.at("evaluator_type").get<std::string>()
      << " dim=" << num(run.at("dim")) << " master_seed=" << num(run.at("master_seed"))
      << " max_epoch=" << num(run.at("max_epoch"))
      << " complete=" << (run.at("complete").get<bool>() ? "yes" : "no") << "\n";

  const json& counts = report.at("counts");
  out << "trials: launched=" << num(counts.at("launched"))
      << " succeeded=" << num(counts.at("succeeded"))
      << " failed=" << num(counts.at("failed"))
      << " unfinished=" << num(counts.at("unfinished")) << "\n";

  if (report.at("best").is_null()) {
    out << report.at("message").get<std::string>() << "\n";
    return out.str();
  }

  const json& best = report.at("best");
  out << "best: trial=" << num(best.at("trial_id")) << " reward=" << num(best.at("reward"))
      << " origin=" << best.at("origin").get<std::string>() << "\n";
  const auto& names = report.at("param_names");
  for (std::size_t k = 0; k < names.size(); ++k) {
    out << "  " << names.at(k).get<std::string>()
        << ": normalized=" << num(best.at("strategy").at(k))
        << " native=" << num(best.at("native").at(k)) << "\n";
  }

  const json& failures = report.at("failures");
  if (failures.at("total").get<long>() > 0) {
    out << "failures:\n";
    for (const auto& [kind, count] : failures.at("by_kind").items())
      out << "  " << kind << ": " << num(count) << "\n";
  }

  out << "reward curve (completion, epoch, trial, origin, reward, best_so_far):\n";
  for (const json& row : report.at("curve")) {
    out << "  " << num(row.at("completion")) << " " << num(row.at("epoch")) << " "
        << num(row.at("trial_id")) << " " << row.at("origin").get<std::string>() << " "
        << num(row.at("reward")) << " " << num(row.at("best_so_far")) << "\n";
  }

  out << "proposal trajectory per parameter (completion order):\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string name = names.at(k).get<std::string>();
    out << "  " << name << ":";
    for (const json& v : report.at("trajectory").at(name)) out << " " << num(v);
    out << "\n";
  }
  return out.str();
}

}  // namespace stratsearch
