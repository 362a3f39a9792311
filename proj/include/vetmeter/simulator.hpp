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

#ifndef VETMETER_SIMULATOR_HPP_
#define VETMETER_SIMULATOR_HPP_

// Synthetic per-record traces with known ground truth.
//
// Each record costs a jittered base (CPU) time, plus a fixed I/O cost for a
// fraction of records, plus a Pareto-distributed overhead spike for another
// independently drawn fraction. Every random draw is a pure function of
// (seed, task, record, stream), so any record can be regenerated on its own
// and tasks can be produced in any order or in parallel.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "vetmeter/error.hpp"
#include "vetmeter/ingest.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

struct SimConfig {
  std::uint64_t records = 10000;   // per task
  std::uint64_t tasks = 4;
  Nanos base_cpu_ns = 1500;
  double jitter_fraction = 0.05;   // base is uniform in base * (1 +/- jitter)
  double io_fraction = 0.1;
  Nanos io_cost_ns = 4000;
  double overhead_fraction = 0.05;
  double overhead_tail_alpha = 1.3;
  Nanos overhead_scale_ns = 1'000'000;
  std::uint64_t seed = 1;
  std::string job_id = "sim";
  Phase phase{PhaseKind::kReadMap};
};

/// Spikes are capped so that sums of squares stay well inside the exact
/// 128-bit range used by the change-point search.
inline constexpr Nanos kMaxSpikeNs = 1'000'000'000'000'000;  // 1e15 ns

struct GroundTruth {
  std::string task_id;
  Nanos injected_overhead_ns = 0;
  Nanos base_sum_ns = 0;
  Nanos io_sum_ns = 0;
};

struct SimulatedTask {
  std::vector<RecordSample> samples;
  GroundTruth truth;
};

inline void validate(const SimConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (c.records < 1) fail("records must be >= 1");
  if (c.tasks < 1) fail("tasks must be >= 1");
  if (c.base_cpu_ns < 1) fail("base_cpu_ns must be positive");
  if (!(c.jitter_fraction >= 0.0 && c.jitter_fraction < 1.0)) fail("jitter must be in [0, 1)");
  if (!(c.io_fraction >= 0.0 && c.io_fraction <= 1.0)) fail("io_fraction must be in [0, 1]");
  if (c.io_cost_ns < 1) fail("io_cost_ns must be positive");
  if (!(c.overhead_fraction >= 0.0 && c.overhead_fraction <= 1.0)) {
    fail("overhead_fraction must be in [0, 1]");
  }
  if (!(c.overhead_tail_alpha > 0.0) || !std::isfinite(c.overhead_tail_alpha)) {
    fail("alpha must be positive");
  }
  if (c.overhead_scale_ns < 1) fail("overhead_scale_ns must be positive");
}

/// Stateless counter-based uniform generator (SplitMix64 finalizer chained
/// over the key words).
class CounterRng {
 public:
  enum Stream : std::uint64_t { kJitter = 1, kIo = 2, kOverhead = 3, kSpike = 4 };

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t task,
                                      std::uint64_t record, std::uint64_t stream) {
    return mix(mix(mix(mix(seed) ^ task) ^ record) ^ stream);
  }

  /// Uniform in the open interval (0, 1).
  static double uniform(std::uint64_t seed, std::uint64_t task, std::uint64_t record,
                        std::uint64_t stream) {
    return (static_cast<double>(bits(seed, task, record, stream) >> 11) + 0.5) * 0x1p-53;
  }
};

/// Inverse-CDF Pareto draw, floor(scale * u^(-1/alpha)), capped at kMaxSpikeNs.
inline Nanos pareto_draw(double alpha, Nanos scale, double u) {
  const double x = static_cast<double>(scale) * std::pow(u, -1.0 / alpha);
  if (!(x < static_cast<double>(kMaxSpikeNs))) return kMaxSpikeNs;
  return static_cast<Nanos>(std::floor(x));
}

/// `count` Pareto(alpha, scale) draws keyed by `seed`.
inline std::vector<Nanos> pareto_samples(double alpha, Nanos scale, std::uint64_t count,
                                         std::uint64_t seed) {
  std::vector<Nanos> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(pareto_draw(alpha, scale, CounterRng::uniform(seed, 0, i, CounterRng::kSpike)));
  }
  return out;
}

inline std::string sim_task_id(std::uint64_t task_index) {
  return fmt::format("m_{:06d}", task_index);
}

inline SimulatedTask simulate_task(const SimConfig& config, std::uint64_t task_index) {
  validate(config);
  SimulatedTask out;
  out.truth.task_id = sim_task_id(task_index);
  out.samples.reserve(config.records);
  const auto base = static_cast<double>(config.base_cpu_ns);
  for (std::uint64_t r = 0; r < config.records; ++r) {
    auto u = [&](CounterRng::Stream s) { return CounterRng::uniform(config.seed, task_index, r, s); };
    const double jitter = config.jitter_fraction * (2.0 * u(CounterRng::kJitter) - 1.0);
    const auto cpu = static_cast<Nanos>(std::llround(base * (1.0 + jitter)));
    const Nanos io = u(CounterRng::kIo) < config.io_fraction ? config.io_cost_ns : 0;
    const Nanos spike =
        u(CounterRng::kOverhead) < config.overhead_fraction
            ? pareto_draw(config.overhead_tail_alpha, config.overhead_scale_ns, u(CounterRng::kSpike))
            : 0;
    out.truth.base_sum_ns += cpu;
    out.truth.io_sum_ns += io;
    out.truth.injected_overhead_ns += spike;
    out.samples.push_back(RecordSample{config.job_id, out.truth.task_id, config.phase, r,
                                       cpu + io + spike});
  }
  return out;
}

inline nlohmann::ordered_json truth_to_json(const GroundTruth& t) {
  return {{"task_id", t.task_id},
          {"injected_overhead_ns", t.injected_overhead_ns},
          {"base_sum_ns", t.base_sum_ns},
          {"io_sum_ns", t.io_sum_ns}};
}

/// Writes all tasks as ingest-compatible JSONL to `trace` and the per-task
/// ground truth (a JSON array) to `truth`.
inline std::vector<GroundTruth> simulate_job(const SimConfig& config, std::ostream& trace,
                                             std::ostream& truth) {
  validate(config);
  std::vector<GroundTruth> truths;
  auto sidecar = nlohmann::ordered_json::array();
  for (std::uint64_t t = 0; t < config.tasks; ++t) {
    auto task = simulate_task(config, t);
    write_trace(trace, task.samples, TraceFormat::kJsonl);
    sidecar.push_back(truth_to_json(task.truth));
    truths.push_back(std::move(task.truth));
  }
  truth << sidecar.dump(2) << '\n';
  if (!trace || !truth) throw Error(ErrorCode::kIoFailure, "failed writing simulated job");
  return truths;
}

/// File variant: writes `path` and `path + ".truth.json"`.
inline std::vector<GroundTruth> simulate_job(const SimConfig& config,
                                             const std::filesystem::path& path) {
  validate(config);
  std::ofstream trace(path, std::ios::binary);
  std::ofstream truth(path.string() + ".truth.json", std::ios::binary);
  if (!trace || !truth) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  auto truths = simulate_job(config, trace, truth);
  trace.close();
  truth.close();
  if (!trace || !truth) throw Error(ErrorCode::kIoFailure, "failed writing " + path.string());
  return truths;
}

}  // namespace vetmeter

#endif  // VETMETER_SIMULATOR_HPP_
