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

#ifndef VETMETER_TRACE_MODEL_HPP_
#define VETMETER_TRACE_MODEL_HPP_

// Core value types shared by every stage of the pipeline. All of them are
// immutable once built and can be shared between threads freely.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vetmeter/error.hpp"

namespace vetmeter {

/// Durations are integer nanoseconds.
using Nanos = std::int64_t;

enum class PhaseKind { kReadMap, kSpill, kMerge, kShuffle, kSort, kReduceWrite, kOther };

/// Sub-phase a record was profiled in. Unknown names are kept verbatim as
/// `kOther` so traces from non-Hadoop pipelines survive a round trip.
class Phase {
 public:
  Phase() = default;
  explicit Phase(PhaseKind kind) : kind_(kind) {}

  static Phase parse(std::string_view name) {
    for (auto kind : {PhaseKind::kReadMap, PhaseKind::kSpill, PhaseKind::kMerge,
                      PhaseKind::kShuffle, PhaseKind::kSort, PhaseKind::kReduceWrite}) {
      if (name == known_name(kind)) return Phase(kind);
    }
    Phase p(PhaseKind::kOther);
    p.other_ = std::string(name);
    return p;
  }

  PhaseKind kind() const noexcept { return kind_; }

  std::string name() const {
    return kind_ == PhaseKind::kOther ? other_ : std::string(known_name(kind_));
  }

  friend bool operator==(const Phase&, const Phase&) = default;
  friend auto operator<=>(const Phase& a, const Phase& b) { return a.name() <=> b.name(); }

 private:
  static constexpr std::string_view known_name(PhaseKind kind) {
    switch (kind) {
      case PhaseKind::kReadMap: return "read-map";
      case PhaseKind::kSpill: return "spill";
      case PhaseKind::kMerge: return "merge";
      case PhaseKind::kShuffle: return "shuffle";
      case PhaseKind::kSort: return "sort";
      case PhaseKind::kReduceWrite: return "reduce-write";
      case PhaseKind::kOther: return "other";
    }
    return "other";
  }

  PhaseKind kind_ = PhaseKind::kReadMap;
  std::string other_;
};

/// One profiled duration (or one unit of aggregated records).
struct RecordSample {
  std::string job_id;
  std::string task_id;
  Phase phase;
  std::uint64_t seq = 0;
  Nanos duration = 0;

  friend bool operator==(const RecordSample&, const RecordSample&) = default;
};

/// A task's durations as order statistics Y_1 <= ... <= Y_n.
class OrderedTaskTrace {
 public:
  /// Sorts `durations`; throws EmptyTrace / NegativeDuration / ZeroUnitSize.
  OrderedTaskTrace(std::string task_id, Phase phase, std::vector<Nanos> durations,
                   std::uint32_t unit_size = 1)
      : task_id_(std::move(task_id)), phase_(std::move(phase)), y_(std::move(durations)),
        unit_size_(unit_size) {
    if (y_.empty()) throw Error(ErrorCode::kEmptyTrace, "task '" + task_id_ + "' has no samples");
    if (unit_size_ == 0) throw Error(ErrorCode::kZeroUnitSize, "unit size must be positive");
    std::sort(y_.begin(), y_.end());
    if (y_.front() < 0) {
      throw Error(ErrorCode::kNegativeDuration, "task '" + task_id_ + "' has a negative duration");
    }
  }

  const std::string& task_id() const noexcept { return task_id_; }
  const Phase& phase() const noexcept { return phase_; }
  std::span<const Nanos> y() const noexcept { return y_; }
  std::size_t n() const noexcept { return y_.size(); }
  std::uint32_t unit_size() const noexcept { return unit_size_; }

  /// 1-based order statistic Y_rank.
  Nanos at(std::size_t rank) const {
    if (rank < 1 || rank > y_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "rank " + std::to_string(rank) + " outside [1, " + std::to_string(n()) + "]");
    }
    return y_[rank - 1];
  }

  friend bool operator==(const OrderedTaskTrace&, const OrderedTaskTrace&) = default;

 private:
  std::string task_id_;
  Phase phase_;
  std::vector<Nanos> y_;
  std::uint32_t unit_size_;
};

/// Least-squares line y = intercept + slope * i over 1-based ranks.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

struct ChangePointFit {
  std::size_t t_hat = 0;  // size of the left segment, in [omega, n - omega]
  LineFit left;
  LineFit right;
  double sse = 0.0;
  std::size_t omega = 0;
};

struct IdealEstimate {
  std::size_t t_hat = 0;
  std::pair<Nanos, Nanos> g_anchor{0, 0};  // (Y_{t-1}, Y_t)
  double ei = 0.0;
  double oc = 0.0;
  double pr = 0.0;
  std::size_t clamped_ranks = 0;  // ranks where the extrapolation exceeded Y_r
};

struct TaskResult {
  std::string task_id;
  double pr = 0.0;
  double ei = 0.0;
  double oc = 0.0;
  double vet_task = 1.0;
  std::size_t n = 0;
  std::size_t t_hat = 0;
  std::vector<Nanos> buckets;  // rank-bucket totals, bucket id = index

  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct ExcludedTask {
  std::string task_id;
  std::string reason;  // error code name, e.g. "TraceTooShort"
  std::string detail;

  friend bool operator==(const ExcludedTask&, const ExcludedTask&) = default;
};

struct VetReport {
  std::string job_id;
  std::string phase;
  std::vector<TaskResult> per_task;
  std::optional<double> vet_job;  // empty when no task survived validation
  double pr_mean = 0.0;
  double pr_std = 0.0;
  double ei_mean = 0.0;
  double ei_std = 0.0;
  std::vector<ExcludedTask> excluded_tasks;

  friend bool operator==(const VetReport&, const VetReport&) = default;
};

}  // namespace vetmeter

#endif  // VETMETER_TRACE_MODEL_HPP_
