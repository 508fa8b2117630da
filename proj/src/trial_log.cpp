// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/trial_log.hpp"

#include <sstream>

#include "stratsearch/errors.hpp"

namespace stratsearch {

namespace fs = std::filesystem;
using nlohmann::json;

TrialLogWriter TrialLogWriter::create(const fs::path& path) {
  if (fs::exists(path))
    throw ConfigError("trial log already exists: " + path.string() +
                      " (resume the run or choose a fresh output directory)");
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot create trial log: " + path.string());
  return TrialLogWriter(std::move(stream), 0);
}

TrialLogWriter TrialLogWriter::append(const fs::path& path, std::uint64_t next_seq) {
  std::ofstream stream(path, std::ios::binary | std::ios::app);
  if (!stream) throw std::runtime_error("cannot open trial log for append: " + path.string());
  return TrialLogWriter(std::move(stream), next_seq);
}

void TrialLogWriter::write_batch(std::vector<json> records) {
  std::string buffer;
  for (json& record : records) {
    record["seq"] = next_seq_;
    record["ts"] = next_seq_;
    ++next_seq_;
    buffer += record.dump();
    buffer += '\n';
  }
  stream_.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  stream_.flush();
  if (!stream_) throw std::runtime_error("failed writing trial log batch");
}

LogReadResult read_trial_log(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trial log: " + path.string());

  LogReadResult result;
  std::string line;
  std::uintmax_t offset = 0;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool complete = !in.eof();  // getline hit a newline, not EOF
    if (!complete) {
      result.had_partial_tail = true;
      break;
    }
    try {
      result.records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      std::ostringstream msg;
      msg << "corrupt trial log " << path.string() << " at line " << line_no << ": "
          << e.what();
      throw DecodeError(msg.str());
    }
    offset += line.size() + 1;
    result.clean_size = offset;
  }
  return result;
}

}  // namespace stratsearch
