// Copyright 2026 The vetmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VETMETER_INGEST_HPP_
#define VETMETER_INGEST_HPP_

// Trace file formats (JSONL and CSV), unit aggregation and construction of
// per-task order statistics.
//
// JSONL: one object per line with exactly the keys
//   {"job", "task", "phase", "seq", "duration_ns"}
// CSV: mandatory header `job,task,phase,seq,duration_ns`, no quoting; ids are
// restricted to [A-Za-z0-9_.-].

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "vetmeter/error.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

enum class TraceFormat { kJsonl, kCsv };

inline TraceFormat parse_trace_format(std::string_view name) {
  if (name == "jsonl") return TraceFormat::kJsonl;
  if (name == "csv") return TraceFormat::kCsv;
  throw Error(ErrorCode::kInvalidConfig, "unknown trace format '" + std::string(name) + "'");
}

inline constexpr std::string_view kCsvHeader = "job,task,phase,seq,duration_ns";

namespace detail {

inline bool valid_csv_id(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

inline RecordSample sample_from_json(const std::string& line, std::uint64_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedLine, e.what(), line_no);
  }
  if (!obj.is_object()) throw Error(ErrorCode::kMalformedLine, "expected a JSON object", line_no);
  for (const char* key : {"job", "task", "phase", "seq", "duration_ns"}) {
    if (!obj.contains(key)) {
      throw Error(ErrorCode::kMalformedLine, std::string("missing key '") + key + "'", line_no);
    }
  }
  if (obj.size() != 5) throw Error(ErrorCode::kMalformedLine, "unexpected extra keys", line_no);
  if (!obj["job"].is_string() || !obj["task"].is_string() || !obj["phase"].is_string()) {
    throw Error(ErrorCode::kMalformedLine, "job, task and phase must be strings", line_no);
  }
  const auto& seq = obj["seq"];
  const auto& dur = obj["duration_ns"];
  if (!seq.is_number_integer() || seq.is_number_float()) {
    throw Error(ErrorCode::kMalformedLine, "seq must be an integer", line_no);
  }
  if (!dur.is_number_integer()) {
    throw Error(ErrorCode::kMalformedLine, "duration_ns must be an integer", line_no);
  }
  if (seq.is_number_integer() && !seq.is_number_unsigned()) {
    throw Error(ErrorCode::kMalformedLine, "seq must be non-negative", line_no);
  }
  if (!dur.is_number_unsigned()) {
    throw Error(ErrorCode::kNegativeDuration, "duration_ns < 0", line_no);
  }
  const auto raw = dur.get<std::uint64_t>();
  if (raw > static_cast<std::uint64_t>(INT64_MAX)) {
    throw Error(ErrorCode::kMalformedLine, "duration_ns overflows 64 bits", line_no);
  }
  RecordSample s;
  s.job_id = obj["job"].get<std::string>();
  s.task_id = obj["task"].get<std::string>();
  s.phase = Phase::parse(obj["phase"].get<std::string>());
  s.seq = seq.get<std::uint64_t>();
  s.duration = static_cast<Nanos>(raw);
  return s;
}

template <typename Int>
bool parse_int(std::string_view field, Int& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline RecordSample sample_from_csv(std::string_view line, std::uint64_t line_no) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 5) {
    throw Error(ErrorCode::kMalformedLine,
                "expected 5 columns, got " + std::to_string(fields.size()), line_no);
  }
  for (int i = 0; i < 3; ++i) {
    if (!valid_csv_id(fields[i])) {
      throw Error(ErrorCode::kMalformedLine,
                  "invalid identifier '" + std::string(fields[i]) + "'", line_no);
    }
  }
  RecordSample s;
  s.job_id = std::string(fields[0]);
  s.task_id = std::string(fields[1]);
  s.phase = Phase::parse(fields[2]);
  if (!parse_int(fields[3], s.seq)) {
    throw Error(ErrorCode::kMalformedLine, "seq must be a non-negative integer", line_no);
  }
  if (!parse_int(fields[4], s.duration)) {
    throw Error(ErrorCode::kMalformedLine, "duration_ns must be an integer", line_no);
  }
  if (s.duration < 0) throw Error(ErrorCode::kNegativeDuration, "duration_ns < 0", line_no);
  return s;
}

}  // namespace detail

/// Parses a whole trace, returning samples in file order. Errors carry the
/// 1-based line number of the offending line.
inline std::vector<RecordSample> parse_trace(std::istream& in, TraceFormat format) {
  std::vector<RecordSample> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::uint64_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (format == TraceFormat::kCsv && !header_seen) {
      if (line != kCsvHeader) {
        throw Error(ErrorCode::kMalformedLine,
                    "CSV header must be '" + std::string(kCsvHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (detail::is_blank(line)) continue;
    RecordSample s = format == TraceFormat::kJsonl ? detail::sample_from_json(line, line_no)
                                                   : detail::sample_from_csv(line, line_no);
    std::string key = s.job_id;
    key.push_back('\x1f');
    key += s.task_id;
    key.push_back('\x1f');
    key += s.phase.name();
    key.push_back('\x1f');
    key += std::to_string(s.seq);
    if (!seen.insert(std::move(key)).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "(" + s.job_id + ", " + s.task_id + ", " + s.phase.name() + ", " +
                      std::to_string(s.seq) + ")",
                  line_no);
    }
    out.push_back(std::move(s));
  }
  if (format == TraceFormat::kCsv && !header_seen) {
    throw Error(ErrorCode::kMalformedLine, "missing CSV header", 1);
  }
  return out;
}

inline std::vector<RecordSample> parse_trace(std::string_view bytes, TraceFormat format) {
  std::istringstream in{std::string(bytes)};
  return parse_trace(in, format);
}

inline void write_sample(std::ostream& out, const RecordSample& s, TraceFormat format) {
  if (format == TraceFormat::kJsonl) {
    nlohmann::ordered_json obj;
    obj["job"] = s.job_id;
    obj["task"] = s.task_id;
    obj["phase"] = s.phase.name();
    obj["seq"] = s.seq;
    obj["duration_ns"] = s.duration;
    out << obj.dump() << '\n';
    return;
  }
  const std::string phase = s.phase.name();
  if (!detail::valid_csv_id(s.job_id) || !detail::valid_csv_id(s.task_id) ||
      !detail::valid_csv_id(phase)) {
    throw Error(ErrorCode::kInvalidConfig, "identifier not representable in CSV: " + s.job_id +
                                               "/" + s.task_id + "/" + phase);
  }
  out << s.job_id << ',' << s.task_id << ',' << phase << ',' << s.seq << ',' << s.duration
      << '\n';
}

inline void write_trace(std::ostream& out, std::span<const RecordSample> samples,
                        TraceFormat format) {
  if (format == TraceFormat::kCsv) out << kCsvHeader << '\n';
  for (const auto& s : samples) write_sample(out, s, format);
}

inline std::string serialize_trace(std::span<const RecordSample> samples, TraceFormat format) {
  std::ostringstream out;
  write_trace(out, samples, format);
  return out.str();
}

/// Sums consecutive groups of `unit_size` samples. A trailing partial group
/// becomes its own unit so total time is conserved. Output seq is 0..m-1.
inline std::vector<RecordSample> aggregate_units(std::span<const RecordSample> samples,
                                                 std::uint32_t unit_size) {
  if (unit_size == 0) throw Error(ErrorCode::kZeroUnitSize, "unit size must be positive");
  std::vector<RecordSample> out;
  out.reserve((samples.size() + unit_size - 1) / unit_size);
  for (std::size_t i = 0; i < samples.size(); i += unit_size) {
    RecordSample unit = samples[i];
    unit.seq = out.size();
    const std::size_t end = std::min(samples.size(), i + unit_size);
    for (std::size_t j = i + 1; j < end; ++j) unit.duration += samples[j].duration;
    out.push_back(std::move(unit));
  }
  return out;
}

/// Order statistics of one (task, phase) group.
inline OrderedTaskTrace build_ordered_trace(std::span<const RecordSample> samples,
                                            std::uint32_t unit_size = 1) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyTrace, "no samples");
  std::vector<Nanos> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(s.duration);
  return OrderedTaskTrace(samples.front().task_id, samples.front().phase, std::move(y), unit_size);
}

struct TaskKey {
  std::string job_id;
  std::string task_id;
  Phase phase;

  friend auto operator<=>(const TaskKey& a, const TaskKey& b) {
    return std::tie(a.job_id, a.task_id, a.phase) <=> std::tie(b.job_id, b.task_id, b.phase);
  }
  friend bool operator==(const TaskKey&, const TaskKey&) = default;
};

/// Splits samples into (job, task, phase) groups, each ordered by seq.
/// With `phase` set, other phases are dropped.
inline std::map<TaskKey, std::vector<RecordSample>> group_by_task(
    std::span<const RecordSample> samples, const std::optional<Phase>& phase = std::nullopt) {
  std::map<TaskKey, std::vector<RecordSample>> groups;
  for (const auto& s : samples) {
    if (phase && s.phase != *phase) continue;
    groups[TaskKey{s.job_id, s.task_id, s.phase}].push_back(s);
  }
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const RecordSample& a, const RecordSample& b) { return a.seq < b.seq; });
  }
  return groups;
}

}  // namespace vetmeter

#endif  // VETMETER_INGEST_HPP_
