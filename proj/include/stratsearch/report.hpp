// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace stratsearch {

/// Builds the run report from a run directory's trial log: best strategy
/// (normalized and native), reward curve with best-so-far, per-parameter
/// proposal trajectories, and a failure summary.
nlohmann::json build_report(const std::filesystem::path& run_dir);

/// Plain-text rendering; scalar values are formatted exactly as in the JSON
/// report.
std::string format_report_text(const nlohmann::json& report);

}  // namespace stratsearch
