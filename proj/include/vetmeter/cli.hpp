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

#ifndef VETMETER_CLI_HPP_
#define VETMETER_CLI_HPP_

// The `vetmeter` command line: analyze, simulate, tail, ks.
//
// Exit codes: 0 success, 1 fatal error, 2 partial result (excluded tasks or a
// degenerate tail), 3 KS test rejected the same-population hypothesis.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vetmeter/analysis.hpp"
#include "vetmeter/error.hpp"
#include "vetmeter/ingest.hpp"
#include "vetmeter/simulator.hpp"
#include "vetmeter/tail_stats.hpp"
#include "vetmeter/vet.hpp"

namespace vetmeter::cli {

enum ExitCode : int { kOk = 0, kFatal = 1, kPartial = 2, kKsReject = 3 };

inline constexpr std::size_t kDefaultKmaxCap = 10000;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, std::string_view text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
}

inline unsigned threads_from_env() {
  const char* raw = std::getenv("VETMETER_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  unsigned value = 0;
  std::string_view s(raw);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidConfig, "VETMETER_THREADS must be a non-negative integer");
  }
  return value;
}

inline std::vector<RecordSample> load_trace(const std::string& path, const std::string& format) {
  const auto bytes = read_file(path);
  try {
    return parse_trace(bytes, parse_trace_format(format));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.line());
  }
}

/// Values from a one-column file, or the `vet_task` column of a report CSV.
inline std::vector<double> load_values(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string line;
  std::optional<std::size_t> column;
  std::uint64_t line_no = 0;
  auto split = [](std::string_view s) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      cells.push_back(s.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  auto to_double = [](std::string_view s, double& v) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split(line);
    if (!column) {
      double probe = 0.0;
      if (cells.size() == 1 && to_double(cells[0], probe)) {
        column = 0;
      } else {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == "vet_task") column = i;
        }
        if (!column && cells.size() == 1) column = 0;
        if (!column) {
          throw Error(ErrorCode::kMalformedLine, path + ": no vet_task column", line_no);
        }
        continue;  // header row
      }
    }
    double v = 0.0;
    if (*column >= cells.size() || !to_double(cells[*column], v)) {
      throw Error(ErrorCode::kMalformedLine, path + ": not a number", line_no);
    }
    values.push_back(v);
  }
  return values;
}

inline std::string shortest(double v) { return fmt::format("{}", v); }

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vetmeter: ideal-time and overhead analysis of per-record duration traces"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute EI/OC decompositions and vet scores");
  std::string a_input, a_format = "jsonl", a_phase = "read-map", a_out, a_report = "table";
  std::uint32_t a_unit = kDefaultUnitSize;
  std::size_t a_omega = kDefaultOmega, a_buckets = kDefaultBuckets;
  analyze->add_option("--input", a_input, "Trace file")->required();
  analyze->add_option("--format", a_format, "jsonl | csv")->capture_default_str();
  analyze->add_option("--phase", a_phase, "Sub-phase to analyze")->capture_default_str();
  analyze->add_option("--unit", a_unit, "Records per profiling unit")->capture_default_str();
  analyze->add_option("--omega", a_omega, "Change-point probing window")->capture_default_str();
  analyze->add_option("--out", a_out, "Write the report here instead of stdout");
  analyze->add_option("--report", a_report, "table | csv | json")->capture_default_str();
  analyze->add_option("--buckets", a_buckets, "Rank buckets per task")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic trace with ground truth");
  SimConfig sim;
  std::string s_out = "sim_trace.jsonl";
  simulate->add_option("--records", sim.records, "Records per task")->capture_default_str();
  simulate->add_option("--tasks", sim.tasks, "Number of tasks")->capture_default_str();
  simulate->add_option("--base-ns", sim.base_cpu_ns, "Mean base CPU cost")->capture_default_str();
  simulate->add_option("--jitter", sim.jitter_fraction, "Uniform base jitter fraction")
      ->capture_default_str();
  simulate->add_option("--io-fraction", sim.io_fraction, "Fraction of records paying I/O")
      ->capture_default_str();
  simulate->add_option("--io-ns", sim.io_cost_ns, "I/O cost")->capture_default_str();
  simulate->add_option("--overhead-fraction", sim.overhead_fraction,
                       "Fraction of records with an overhead spike")
      ->capture_default_str();
  simulate->add_option("--alpha", sim.overhead_tail_alpha, "Pareto tail index of spikes")
      ->capture_default_str();
  simulate->add_option("--overhead-scale-ns", sim.overhead_scale_ns, "Pareto scale of spikes")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--job", sim.job_id, "Job id")->capture_default_str();
  simulate->add_option("--out", s_out, "Trace path; ground truth goes to <out>.truth.json")
      ->capture_default_str();

  // tail
  auto* tail = app.add_subcommand("tail", "Hill plot and emplot data");
  std::string t_input, t_format = "jsonl", t_phase = "read-map", t_task, t_out;
  std::uint32_t t_unit = kDefaultUnitSize;
  std::optional<std::size_t> t_kmax;
  double t_fraction = kDefaultHillSummaryFraction;
  bool t_hill = false, t_emplot = false;
  tail->add_option("--input", t_input, "Trace file")->required();
  tail->add_option("--format", t_format, "jsonl | csv")->capture_default_str();
  tail->add_option("--phase", t_phase, "Sub-phase to pool")->capture_default_str();
  tail->add_option("--task", t_task, "Restrict to one task (default: pool all tasks)");
  tail->add_option("--unit", t_unit, "Records per profiling unit")->capture_default_str();
  tail->add_option("--kmax", t_kmax, "Largest k on the Hill plot (default n-1, capped at 10000)");
  tail->add_option("--summary-fraction", t_fraction, "k used for the tail index, as a fraction of n")
      ->capture_default_str();
  tail->add_flag("--hill", t_hill, "Emit the Hill plot (k,alpha)");
  tail->add_flag("--emplot", t_emplot, "Emit the emplot (log_x,log_p)");
  tail->add_option("--out", t_out, "Write CSV here instead of stdout");

  // ks
  auto* ks = app.add_subcommand("ks", "Two-sample Kolmogorov-Smirnov test on vet_task values");
  std::string k_a, k_b;
  double k_level = 0.05;
  ks->add_option("--a", k_a, "First sample (one column, or a report CSV)")->required();
  ks->add_option("--b", k_b, "Second sample")->required();
  ks->add_option("--alpha-level", k_level, "Rejection level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFatal;
  }

  try {
    if (*analyze) {
      AnalysisOptions opts;
      opts.phase = Phase::parse(a_phase);
      opts.unit_size = a_unit;
      opts.omega = a_omega;
      opts.buckets = a_buckets;
      opts.threads = detail::threads_from_env();
      const auto format = parse_report_format(a_report);
      if (a_unit == 0) throw Error(ErrorCode::kZeroUnitSize, "--unit must be positive");
      if (a_buckets == 0) throw Error(ErrorCode::kInvalidConfig, "--buckets must be positive");
      if (a_omega < kMinOmega) throw Error(ErrorCode::kInvalidConfig, "--omega must be >= 2");
      const auto samples = detail::load_trace(a_input, a_format);
      const auto reports = analyze_samples(samples, opts);
      if (reports.empty()) {
        throw Error(ErrorCode::kEmptyTrace, "no samples for phase '" + a_phase + "'");
      }
      detail::write_output(a_out, render_report(reports, format), out);
      bool excluded = false;
      for (const auto& r : reports) {
        for (const auto& e : r.excluded_tasks) {
          excluded = true;
          err << "excluded " << r.job_id << "/" << e.task_id << ": " << e.reason << " ("
              << e.detail << ")\n";
        }
      }
      return excluded ? kPartial : kOk;
    }

    if (*simulate) {
      const auto truths = simulate_job(sim, s_out);
      err << "wrote " << sim.records * sim.tasks << " records in " << truths.size()
          << " tasks to " << s_out << " (+ " << s_out << ".truth.json)\n";
      return kOk;
    }

    if (*tail) {
      if (!t_hill && !t_emplot) t_hill = t_emplot = true;
      const auto samples = detail::load_trace(t_input, t_format);
      const auto phase = Phase::parse(t_phase);
      std::vector<Nanos> pooled;
      for (const auto& [key, group] : group_by_task(samples, phase)) {
        if (!t_task.empty() && key.task_id != t_task) continue;
        for (const auto& u : aggregate_units(group, t_unit)) pooled.push_back(u.duration);
      }
      if (pooled.empty()) throw Error(ErrorCode::kEmptyTrace, "no matching samples");
      const OrderedTaskTrace all(t_task.empty() ? "*" : t_task, phase, std::move(pooled), t_unit);
      auto [trace, dropped] = drop_zero_durations(all);
      if (dropped > 0) err << "warning: dropped " << dropped << " zero-duration units\n";
      if (trace.n() < 2) throw Error(ErrorCode::kDegenerateTail, "need at least two positive units");
      const std::size_t kmax = t_kmax.value_or(std::min(trace.n() - 1, kDefaultKmaxCap));

      std::string csv;
      int code = kOk;
      if (t_hill) {
        try {
          const auto curve = hill_curve(trace, kmax, t_fraction);
          csv += "k,alpha\n";
          for (const auto& p : curve.points) csv += fmt::format("{},{}\n", p.k, p.statistic);
          err << fmt::format("summary_alpha={} (hill statistic {} at k={}, n={})\n",
                             curve.summary_alpha, curve.summary_statistic, curve.k_summary,
                             trace.n());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegenerateTail) throw;
          err << "error: " << e.what() << '\n';
          code = kPartial;
        }
      }
      if (t_emplot && code == kOk) {
        if (!csv.empty()) csv += '\n';
        csv += "log_x,log_p\n";
        for (const auto& p : emplot_points(trace)) {
          csv += fmt::format("{},{}\n", p.log_x, p.log_tail_prob);
        }
      }
      detail::write_output(t_out, csv, out);
      return code;
    }

    if (*ks) {
      const auto a = detail::load_values(k_a);
      const auto b = detail::load_values(k_b);
      const auto result = ks_two_sample(a, b);
      out << "d=" << detail::shortest(result.d_statistic)
          << " p=" << detail::shortest(result.p_value) << " n1=" << result.n1
          << " n2=" << result.n2 << '\n';
      return result.p_value >= k_level ? kOk : kKsReject;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }
  return kFatal;
}

}  // namespace vetmeter::cli

#endif  // VETMETER_CLI_HPP_
