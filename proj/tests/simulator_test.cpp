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

#include "vetmeter/simulator.hpp"

#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "vetmeter/analysis.hpp"
#include "vetmeter/tail_stats.hpp"

namespace vetmeter {
namespace {

TEST(Simulator, IdealScenarioIsFlat) {
  SimConfig cfg;
  cfg.records = 500;
  cfg.overhead_fraction = 0;
  cfg.io_fraction = 0;
  cfg.jitter_fraction = 0;
  const auto task = simulate_task(cfg, 0);
  for (const auto& s : task.samples) EXPECT_EQ(s.duration, cfg.base_cpu_ns);
  EXPECT_EQ(task.truth.injected_overhead_ns, 0);
  EXPECT_EQ(analyze_task(task.samples, AnalysisOptions{}).vet_task, 1.0);
}

TEST(Simulator, DeterministicPerTask) {
  SimConfig cfg;
  cfg.records = 2000;
  const auto a = simulate_task(cfg, 3);
  const auto b = simulate_task(cfg, 3);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(simulate_task(cfg, 4).samples, a.samples);
  cfg.seed = 2;
  EXPECT_NE(simulate_task(cfg, 3).samples, a.samples);
}

TEST(Simulator, GroundTruthConservation) {
  SimConfig cfg;
  cfg.records = 5000;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto task = simulate_task(cfg, t);
    Nanos total = 0;
    for (const auto& s : task.samples) total += s.duration;
    EXPECT_EQ(total, task.truth.base_sum_ns + task.truth.io_sum_ns +
                         task.truth.injected_overhead_ns);
    EXPECT_GT(task.truth.injected_overhead_ns, 0);
  }
}

TEST(Simulator, DefaultsProduceHeavyTailDominatedByFewRecords) {
  SimConfig cfg;
  cfg.records = 100000;
  const auto task = simulate_task(cfg, 0);
  std::vector<Nanos> y;
  for (const auto& s : task.samples) y.push_back(s.duration);
  const OrderedTaskTrace trace("t", cfg.phase, y);
  // Top 1% of records carry most of the processing time.
  const auto top = trace.y().last(trace.n() / 100);
  const double top_sum = std::accumulate(top.begin(), top.end(), 0.0);
  const double all = std::accumulate(trace.y().begin(), trace.y().end(), 0.0);
  EXPECT_GT(top_sum / all, 0.5);
  // Spike tail index measured on the top 5% is near the configured alpha.
  const auto curve = hill_curve(trace, trace.n() / 50, 0.01);
  EXPECT_NEAR(curve.summary_alpha, 1.3, 0.2);
}

TEST(Simulator, InvalidConfig) {
  auto rejects = [](auto mutate) {
    SimConfig cfg;
    mutate(cfg);
    try {
      validate(cfg);
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidConfig;
    }
    return false;
  };
  EXPECT_TRUE(rejects([](SimConfig& c) { c.records = 0; }));
  EXPECT_TRUE(rejects([](SimConfig& c) { c.tasks = 0; }));
  EXPECT_TRUE(rejects([](SimConfig& c) { c.jitter_fraction = 1.0; }));
  EXPECT_TRUE(rejects([](SimConfig& c) { c.io_fraction = 1.5; }));
  EXPECT_TRUE(rejects([](SimConfig& c) { c.overhead_fraction = -0.1; }));
  EXPECT_TRUE(rejects([](SimConfig& c) { c.overhead_tail_alpha = 0.0; }));
  EXPECT_FALSE(rejects([](SimConfig&) {}));
}

TEST(Simulator, JobStreamsAreIngestible) {
  SimConfig cfg;
  cfg.records = 1000;
  cfg.tasks = 4;
  std::ostringstream trace, truth;
  const auto truths = simulate_job(cfg, trace, truth);
  const auto samples = parse_trace(trace.str(), TraceFormat::kJsonl);
  EXPECT_EQ(samples.size(), 4000u);
  const auto sidecar = nlohmann::json::parse(truth.str());
  ASSERT_EQ(sidecar.size(), 4u);
  for (std::size_t t = 0; t < 4; ++t) {
    Nanos spikes = 0;
    for (std::uint64_t r = 0; r < cfg.records; ++r) {
      const double u = CounterRng::uniform(cfg.seed, t, r, CounterRng::kOverhead);
      if (u < cfg.overhead_fraction) {
        spikes += pareto_draw(cfg.overhead_tail_alpha, cfg.overhead_scale_ns,
                              CounterRng::uniform(cfg.seed, t, r, CounterRng::kSpike));
      }
    }
    EXPECT_EQ(sidecar[t]["task_id"], sim_task_id(t));
    EXPECT_EQ(sidecar[t]["injected_overhead_ns"].get<Nanos>(), spikes);
    EXPECT_EQ(truths[t].injected_overhead_ns, spikes);
  }
}

TEST(Simulator, OverheadRaisesVetJob) {
  SimConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    auto job_vet = [&](double fraction) {
      cfg.overhead_fraction = fraction;
      std::vector<RecordSample> all;
      for (std::uint64_t t = 0; t < cfg.tasks; ++t) {
        auto task = simulate_task(cfg, t);
        all.insert(all.end(), task.samples.begin(), task.samples.end());
      }
      return *analyze_samples(all, AnalysisOptions{}).at(0).vet_job;
    };
    EXPECT_GT(job_vet(0.05), job_vet(0.0)) << "seed " << seed;
  }
}

TEST(Simulator, ParetoDrawIsCapped) {
  EXPECT_EQ(pareto_draw(0.1, 1'000'000, 1e-300), kMaxSpikeNs);
  EXPECT_EQ(pareto_draw(1.3, 1000, 1.0), 1000);
}

}  // namespace
}  // namespace vetmeter
