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

#ifndef VETMETER_ANALYSIS_HPP_
#define VETMETER_ANALYSIS_HPP_

// End-to-end job analysis: group -> aggregate -> order -> change-point ->
// ideal estimate -> vet, one VetReport per job.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "vetmeter/changepoint.hpp"
#include "vetmeter/error.hpp"
#include "vetmeter/ideal_estimator.hpp"
#include "vetmeter/ingest.hpp"
#include "vetmeter/trace_model.hpp"
#include "vetmeter/vet.hpp"

namespace vetmeter {

inline constexpr std::uint32_t kDefaultUnitSize = 5;

struct AnalysisOptions {
  Phase phase{PhaseKind::kReadMap};
  std::uint32_t unit_size = kDefaultUnitSize;
  std::size_t omega = kDefaultOmega;
  std::size_t buckets = kDefaultBuckets;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Full per-task pipeline on an already ordered trace.
inline TaskResult analyze_trace(const OrderedTaskTrace& trace, std::size_t omega,
                                std::size_t buckets) {
  const auto fit = estimate_changepoint(trace, omega);
  const auto est = estimate_ideal(trace, fit);
  TaskResult r;
  r.task_id = trace.task_id();
  r.pr = est.pr;
  r.ei = est.ei;
  r.oc = est.oc;
  r.vet_task = vet_task(est);
  r.n = trace.n();
  r.t_hat = fit.t_hat;
  for (const auto& [id, total] : bucket_distribution(trace, buckets)) r.buckets.push_back(total);
  return r;
}

/// Aggregates one task's raw samples into units and analyzes them.
inline TaskResult analyze_task(std::span<const RecordSample> samples,
                               const AnalysisOptions& options) {
  const auto units = aggregate_units(samples, options.unit_size);
  return analyze_trace(build_ordered_trace(units, options.unit_size), options.omega,
                       options.buckets);
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace detail

/// Analyzes every task of the selected phase. Tasks whose preconditions fail
/// (too short, zero ideal cost, ...) are listed in `excluded_tasks` instead of
/// aborting the job. Reports are ordered by job id, rows by task id.
inline std::vector<VetReport> analyze_samples(std::span<const RecordSample> samples,
                                              const AnalysisOptions& options) {
  const auto groups = group_by_task(samples, options.phase);
  std::vector<const TaskKey*> keys;
  std::vector<const std::vector<RecordSample>*> members;
  for (const auto& [key, group] : groups) {
    keys.push_back(&key);
    members.push_back(&group);
  }

  std::vector<std::variant<TaskResult, ExcludedTask>> outcomes(keys.size());
  detail::parallel_for(keys.size(), options.threads, [&](std::size_t i) {
    try {
      outcomes[i] = analyze_task(*members[i], options);
    } catch (const Error& e) {
      outcomes[i] = ExcludedTask{keys[i]->task_id, std::string(error_code_name(e.code())),
                                 e.detail()};
    }
  });

  std::map<std::string, std::pair<std::vector<TaskResult>, std::vector<ExcludedTask>>> by_job;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& slot = by_job[keys[i]->job_id];
    if (auto* ok = std::get_if<TaskResult>(&outcomes[i])) {
      slot.first.push_back(std::move(*ok));
    } else {
      slot.second.push_back(std::get<ExcludedTask>(std::move(outcomes[i])));
    }
  }
  std::vector<VetReport> reports;
  for (auto& [job, rows] : by_job) {
    reports.push_back(assemble_report(job, options.phase.name(), std::move(rows.first),
                                      std::move(rows.second)));
  }
  return reports;
}

}  // namespace vetmeter

#endif  // VETMETER_ANALYSIS_HPP_
