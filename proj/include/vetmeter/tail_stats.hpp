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

#ifndef VETMETER_TAIL_STATS_HPP_
#define VETMETER_TAIL_STATS_HPP_

// Heavy-tail diagnostics (Hill plot, emplot) and the two-sample
// Kolmogorov-Smirnov test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vetmeter/error.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

inline constexpr double kDefaultHillSummaryFraction = 0.05;

struct HillPoint {
  std::size_t k = 0;
  double statistic = 0.0;
};

/// Hill statistic over k = 1..k_max upper order statistics.
///
///   H(k) = (1/k) * sum_{i=1..k} (log Y_{n+1-i} - log Y_{n-k})
///
/// H(k) estimates 1/alpha for a tail P(X > x) ~ c x^-alpha, so the reported
/// tail index is its reciprocal, read at k_summary = floor(fraction * n)
/// clamped to [1, k_max].
struct HillCurve {
  std::vector<HillPoint> points;
  double summary_alpha = 0.0;
  double summary_statistic = 0.0;
  std::size_t k_summary = 0;
};

struct EmplotPoint {
  double log_x = 0.0;
  double log_tail_prob = 0.0;
};

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

namespace detail {

inline void require_positive(const OrderedTaskTrace& trace) {
  if (trace.y().front() <= 0) {
    throw Error(ErrorCode::kNonPositiveDuration,
                "tail statistics need strictly positive durations (task '" + trace.task_id() +
                    "')");
  }
}

}  // namespace detail

/// Copy of `trace` without zero durations, plus how many were dropped.
inline std::pair<OrderedTaskTrace, std::size_t> drop_zero_durations(
    const OrderedTaskTrace& trace) {
  const auto y = trace.y();
  const auto first_positive = std::upper_bound(y.begin(), y.end(), Nanos{0});
  const auto dropped = static_cast<std::size_t>(first_positive - y.begin());
  if (dropped == y.size()) {
    throw Error(ErrorCode::kEmptyTrace, "task '" + trace.task_id() + "' has no positive durations");
  }
  return {OrderedTaskTrace(trace.task_id(), trace.phase(),
                           std::vector<Nanos>(first_positive, y.end()), trace.unit_size()),
          dropped};
}

inline HillCurve hill_curve(const OrderedTaskTrace& trace, std::size_t k_max,
                            double summary_fraction = kDefaultHillSummaryFraction) {
  detail::require_positive(trace);
  const auto y = trace.y();
  const std::size_t n = y.size();
  if (k_max < 1 || k_max > n - 1) {
    throw Error(ErrorCode::kKTooLarge,
                "k_max=" + std::to_string(k_max) + " must lie in [1, n-1] with n=" +
                    std::to_string(n));
  }
  HillCurve curve;
  curve.points.reserve(k_max);
  double top_log_sum = 0.0;  // sum of log Y_{n+1-i} for i = 1..k
  for (std::size_t k = 1; k <= k_max; ++k) {
    top_log_sum += std::log(static_cast<double>(y[n - k]));
    const double threshold = std::log(static_cast<double>(y[n - k - 1]));
    const double h = top_log_sum / static_cast<double>(k) - threshold;
    curve.points.push_back({k, std::max(h, 0.0)});
  }
  const auto k_rule = static_cast<std::size_t>(std::floor(summary_fraction * static_cast<double>(n)));
  curve.k_summary = std::clamp<std::size_t>(k_rule, 1, k_max);
  curve.summary_statistic = curve.points[curve.k_summary - 1].statistic;
  if (!(curve.summary_statistic > 0.0)) {
    throw Error(ErrorCode::kDegenerateTail,
                "Hill statistic is zero at k=" + std::to_string(curve.k_summary));
  }
  curve.summary_alpha = 1.0 / curve.summary_statistic;
  return curve;
}

/// (log Y, log tail probability) for each distinct value, with tail
/// probability (n - i + 0.5) / n at the last rank i holding that value.
/// Under a power tail the points fall on a line of slope -alpha.
inline std::vector<EmplotPoint> emplot_points(const OrderedTaskTrace& trace) {
  detail::require_positive(trace);
  const auto y = trace.y();
  const auto n = static_cast<double>(y.size());
  std::vector<EmplotPoint> out;
  for (std::size_t i = 1; i <= y.size(); ++i) {
    if (i < y.size() && y[i] == y[i - 1]) continue;
    const double tail = (n - static_cast<double>(i) + 0.5) / n;
    out.push_back({std::log(static_cast<double>(y[i - 1])), std::log(tail)});
  }
  return out;
}

/// Least-squares slope of the emplot over its upper `fraction` of points
/// (at least two).
inline double upper_tail_slope(std::span<const EmplotPoint> points, double fraction = 0.1) {
  if (points.size() < 2) throw Error(ErrorCode::kEmptySample, "need at least two emplot points");
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(points.size())));
  count = std::clamp<std::size_t>(count, 2, points.size());
  const auto tail = points.last(count);
  double mx = 0.0, my = 0.0;
  for (const auto& p : tail) {
    mx += p.log_x;
    my += p.log_tail_prob;
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : tail) {
    sxx += (p.log_x - mx) * (p.log_x - mx);
    sxy += (p.log_x - mx) * (p.log_tail_prob - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kDegenerateTail, "emplot tail has no spread");
  return sxy / sxx;
}

/// Asymptotic Kolmogorov survival function
///   Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
/// The alternating series stops once a term drops below 1e-12 or after 100
/// terms. Below lambda = 1.18 it converges too slowly, so the equivalent
/// theta-function form 1 - sqrt(2 pi)/lambda * sum exp(-(2j-1)^2 pi^2 / (8 lambda^2))
/// is used instead.
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double odd = 2.0 * j - 1.0;
      const double term = std::exp(-odd * odd * w);
      sum += term;
      if (term < 1e-12) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Two-sample KS test: D = sup |F_a - F_b| over the pooled points, p-value
/// from Q(lambda) with lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D and
/// ne = n1 n2 / (n1 + n2).
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptySample, "KS needs two non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto n1 = static_cast<double>(sa.size());
  const auto n2 = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult out;
  out.n1 = sa.size();
  out.n2 = sb.size();
  out.d_statistic = d;
  const double ne = n1 * n2 / (n1 + n2);
  const double root = std::sqrt(ne);
  out.p_value = d == 0.0 ? 1.0 : kolmogorov_q((root + 0.12 + 0.11 / root) * d);
  return out;
}

}  // namespace vetmeter

#endif  // VETMETER_TAIL_STATS_HPP_
