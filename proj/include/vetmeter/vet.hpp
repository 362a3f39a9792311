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

#ifndef VETMETER_VET_HPP_
#define VETMETER_VET_HPP_

// Optimality scores, rank-bucketed distributions and VetReport rendering.
//
//   vet_task = (EI + OC) / EI      (1 means no reducible overhead)
//   vet_job  = mean of vet_task over the tasks that passed validation
//
// vet_job is a mean of ratios, so it generally differs from
// mean(PR) / mean(EI).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "vetmeter/error.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

inline constexpr std::size_t kDefaultBuckets = 1000;

inline double vet_task(const IdealEstimate& estimate) {
  if (!(estimate.ei > 0.0)) {
    throw Error(ErrorCode::kZeroIdealCost, "estimated ideal cost is zero");
  }
  return (estimate.ei + estimate.oc) / estimate.ei;
}

inline double vet_job(std::span<const double> vet_tasks) {
  if (vet_tasks.empty()) throw Error(ErrorCode::kNoValidTasks, "no task passed validation");
  return std::accumulate(vet_tasks.begin(), vet_tasks.end(), 0.0) /
         static_cast<double>(vet_tasks.size());
}

/// Splits ranks 1..n into `buckets` contiguous groups whose sizes differ by at
/// most one (earlier groups take the extra rank) and sums each group. With
/// n < buckets every rank is its own bucket.
inline std::vector<std::pair<std::size_t, Nanos>> bucket_distribution(
    const OrderedTaskTrace& trace, std::size_t buckets = kDefaultBuckets) {
  if (buckets == 0) throw Error(ErrorCode::kInvalidConfig, "bucket count must be positive");
  const auto y = trace.y();
  const std::size_t count = std::min(buckets, y.size());
  const std::size_t base = y.size() / count;
  const std::size_t extra = y.size() % count;
  std::vector<std::pair<std::size_t, Nanos>> out;
  out.reserve(count);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < count; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    Nanos total = 0;
    for (std::size_t i = 0; i < len; ++i) total += y[pos + i];
    pos += len;
    out.emplace_back(b, total);
  }
  return out;
}

/// Mean and sample (n - 1) standard deviation; std is 0 for fewer than two values.
inline std::pair<double, double> mean_and_std(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

/// Fills the job-level statistics of a report from its per-task rows.
inline VetReport assemble_report(std::string job_id, std::string phase,
                                 std::vector<TaskResult> per_task,
                                 std::vector<ExcludedTask> excluded) {
  VetReport report;
  report.job_id = std::move(job_id);
  report.phase = std::move(phase);
  report.per_task = std::move(per_task);
  report.excluded_tasks = std::move(excluded);
  std::vector<double> prs, eis, vets;
  for (const auto& t : report.per_task) {
    prs.push_back(t.pr);
    eis.push_back(t.ei);
    vets.push_back(t.vet_task);
  }
  std::tie(report.pr_mean, report.pr_std) = mean_and_std(prs);
  std::tie(report.ei_mean, report.ei_std) = mean_and_std(eis);
  if (!vets.empty()) report.vet_job = vet_job(vets);
  return report;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json report_to_json(const VetReport& r) {
  nlohmann::ordered_json j;
  j["job_id"] = r.job_id;
  j["phase"] = r.phase;
  j["vet_job"] = r.vet_job ? nlohmann::ordered_json(*r.vet_job) : nlohmann::ordered_json();
  j["pr_mean"] = r.pr_mean;
  j["pr_std"] = r.pr_std;
  j["ei_mean"] = r.ei_mean;
  j["ei_std"] = r.ei_std;
  auto& tasks = j["per_task"] = nlohmann::ordered_json::array();
  for (const auto& t : r.per_task) {
    nlohmann::ordered_json row;
    row["task_id"] = t.task_id;
    row["pr"] = t.pr;
    row["ei"] = t.ei;
    row["oc"] = t.oc;
    row["vet_task"] = t.vet_task;
    row["n"] = t.n;
    row["t_hat"] = t.t_hat;
    row["buckets"] = t.buckets;
    tasks.push_back(std::move(row));
  }
  auto& excluded = j["excluded_tasks"] = nlohmann::ordered_json::array();
  for (const auto& e : r.excluded_tasks) {
    excluded.push_back({{"task_id", e.task_id}, {"reason", e.reason}, {"detail", e.detail}});
  }
  return j;
}

inline VetReport report_from_json(const nlohmann::json& j) {
  try {
    VetReport r;
    r.job_id = j.at("job_id").get<std::string>();
    r.phase = j.at("phase").get<std::string>();
    if (!j.at("vet_job").is_null()) r.vet_job = j.at("vet_job").get<double>();
    r.pr_mean = j.at("pr_mean").get<double>();
    r.pr_std = j.at("pr_std").get<double>();
    r.ei_mean = j.at("ei_mean").get<double>();
    r.ei_std = j.at("ei_std").get<double>();
    for (const auto& row : j.at("per_task")) {
      TaskResult t;
      t.task_id = row.at("task_id").get<std::string>();
      t.pr = row.at("pr").get<double>();
      t.ei = row.at("ei").get<double>();
      t.oc = row.at("oc").get<double>();
      t.vet_task = row.at("vet_task").get<double>();
      t.n = row.at("n").get<std::size_t>();
      t.t_hat = row.at("t_hat").get<std::size_t>();
      t.buckets = row.at("buckets").get<std::vector<Nanos>>();
      r.per_task.push_back(std::move(t));
    }
    for (const auto& e : j.at("excluded_tasks")) {
      r.excluded_tasks.push_back(ExcludedTask{e.at("task_id").get<std::string>(),
                                              e.at("reason").get<std::string>(),
                                              e.at("detail").get<std::string>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedLine, std::string("report JSON: ") + e.what());
  }
}

/// Accepts a single report object or an array of them.
inline std::vector<VetReport> parse_reports_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedLine, std::string("report JSON: ") + e.what());
  }
  std::vector<VetReport> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(report_from_json(item));
  } else {
    out.push_back(report_from_json(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { kTable, kCsv, kJson };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidConfig, "unknown report format '" + std::string(name) + "'");
}

inline constexpr std::string_view kReportCsvHeader = "task_id,pr_ns,ei_ns,oc_ns,vet_task";

namespace detail {

inline std::string seconds(double ns) { return fmt::format("{:.3f}s", ns / 1e9); }

inline std::string render_table(std::span<const VetReport> reports) {
  constexpr int kLabel = 16;
  constexpr int kCol = 12;
  std::string out;
  auto row = [&](std::string_view label, auto&& cell) {
    out += fmt::format("{:<{}}", label, kLabel);
    for (const auto& r : reports) out += fmt::format("{:>{}}", cell(r), kCol);
    out += '\n';
  };
  row("Type", [](const VetReport& r) { return r.job_id; });
  row("phase", [](const VetReport& r) { return r.phase; });
  row("tasks", [](const VetReport& r) { return std::to_string(r.per_task.size()); });
  row("PR   mean", [](const VetReport& r) { return seconds(r.pr_mean); });
  row("     std", [](const VetReport& r) { return seconds(r.pr_std); });
  row("EI   mean", [](const VetReport& r) { return seconds(r.ei_mean); });
  row("     std", [](const VetReport& r) { return seconds(r.ei_std); });
  row("vet_job", [](const VetReport& r) {
    return r.vet_job ? fmt::format("{:.3f}", *r.vet_job) : std::string("n/a");
  });
  bool any_excluded = false;
  for (const auto& r : reports) {
    for (const auto& e : r.excluded_tasks) {
      if (!any_excluded) out += "\nExcluded tasks:\n";
      any_excluded = true;
      out += fmt::format("  * {}/{}: {}", r.job_id, e.task_id, e.reason);
      if (!e.detail.empty()) out += fmt::format(" ({})", e.detail);
      out += '\n';
    }
  }
  return out;
}

inline std::string render_csv(std::span<const VetReport> reports) {
  std::string out(kReportCsvHeader);
  out += '\n';
  for (const auto& r : reports) {
    for (const auto& t : r.per_task) {
      out += fmt::format("{},{},{},{},{}\n", t.task_id, t.pr, t.ei, t.oc, t.vet_task);
    }
  }
  return out;
}

}  // namespace detail

/// Deterministic rendering. The table puts one job per column, mirroring the
/// usual PR / EI / vet_job summary layout; CSV lists one row per included
/// task; JSON emits one object per report (an array when there are several).
inline std::string render_report(std::span<const VetReport> reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTable:
      return detail::render_table(reports);
    case ReportFormat::kCsv:
      return detail::render_csv(reports);
    case ReportFormat::kJson: {
      if (reports.size() == 1) return report_to_json(reports.front()).dump(2) + "\n";
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : reports) arr.push_back(report_to_json(r));
      return arr.dump(2) + "\n";
    }
  }
  return {};
}

inline std::string render_report(const VetReport& report, ReportFormat format) {
  return render_report(std::span<const VetReport>(&report, 1), format);
}

}  // namespace vetmeter

#endif  // VETMETER_VET_HPP_
