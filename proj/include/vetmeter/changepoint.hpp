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

#ifndef VETMETER_CHANGEPOINT_HPP_
#define VETMETER_CHANGEPOINT_HPP_

// Two-segment least-squares change-point over order statistics.
//
// For every admissible split k in [omega, n - omega] a line is fitted to
// Y_1..Y_k and another to Y_{k+1}..Y_n; the split with the smallest total
// sum of squared errors wins, ties going to the largest k.
//
// The search runs in O(n) with running sums. Each candidate's SSE is first
// evaluated in long double together with a rounding-error bound; every split
// whose interval can reach the minimum is then re-evaluated in exact rational
// arithmetic, so the returned argmin is exactly the one a brute-force
// enumeration would produce (including ties).

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "vetmeter/error.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

inline constexpr std::size_t kDefaultOmega = 3;
inline constexpr std::size_t kMinOmega = 2;

/// OLS fit of Y_i against i over the 1-based inclusive range [lo, hi].
/// A single point gives slope 0, intercept Y_lo, sse 0.
inline LineFit ols_line(std::span<const Nanos> y, std::size_t lo, std::size_t hi) {
  if (lo < 1 || hi < lo || hi > y.size()) {
    throw Error(ErrorCode::kEmptySegment, "segment [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "] of " +
                                              std::to_string(y.size()) + " points");
  }
  const std::size_t m = hi - lo + 1;
  if (m == 1) return LineFit{static_cast<double>(y[lo - 1]), 0.0, 0.0};

  __int128 sum = 0;
  for (std::size_t i = lo; i <= hi; ++i) sum += y[i - 1];
  const double x_mean = 0.5 * static_cast<double>(lo + hi);
  const double y_mean = static_cast<double>(sum) / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxx += dx * dx;
    sxy += dx * (static_cast<double>(y[i - 1]) - y_mean);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double r =
        static_cast<double>(y[i - 1]) - fit.intercept - fit.slope * static_cast<double>(i);
    fit.sse += r * r;
  }
  return fit;
}

/// Total SSE of the two direct OLS fits when splitting after rank k.
inline double split_sse(std::span<const Nanos> y, std::size_t k) {
  return ols_line(y, 1, k).sse + ols_line(y, k + 1, y.size()).sse;
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

// Running sums of one segment over global 1-based indices. Values are
// shifted by a reference so magnitudes stay small; SSE is shift invariant.
struct SegmentSums {
  __int128 m = 0;
  __int128 sx = 0;
  __int128 sy = 0;
  __int128 sxy = 0;
  __int128 syy = 0;
};

// SSE = (A*D - N^2) / (m*D) with A = m*Syy - Sy^2, N = m*Sxy - Sx*Sy and
// D = m*Sxx - Sx^2 = m^2 (m^2 - 1) / 12.
inline __int128 centered_index_scale(__int128 m) { return m * m * (m * m - 1) / 12; }

struct ApproxSse {
  long double value = 0.0L;
  long double bound = 0.0L;  // |value - exact| <= bound
};

inline ApproxSse approx_segment_sse(const SegmentSums& s) {
  constexpr long double kEps = 8.0L * LDBL_EPSILON;
  const auto m = static_cast<long double>(s.m);
  const auto d = static_cast<long double>(centered_index_scale(s.m));
  const auto sy = static_cast<long double>(s.sy);
  const auto sx = static_cast<long double>(s.sx);
  const auto syy = static_cast<long double>(s.syy);
  const auto sxy = static_cast<long double>(s.sxy);

  const long double a = m * syy - sy * sy;
  const long double n = m * sxy - sx * sy;
  const long double err_a = kEps * (std::fabs(m * syy) + sy * sy);
  const long double err_n = kEps * (std::fabs(m * sxy) + std::fabs(sx * sy));

  ApproxSse out;
  out.value = (a - n * n / d) / m;
  out.bound = (err_a + (2.0L * std::fabs(n) * err_n + err_n * err_n + kEps * n * n) / d) / m +
              kEps * std::fabs(out.value);
  return out;
}

struct Rational {
  BigInt num;
  BigInt den;
};

inline Rational exact_segment_sse(const SegmentSums& s) {
  const BigInt m(s.m);
  const BigInt sy(s.sy);
  const BigInt a = m * BigInt(s.syy) - sy * sy;
  const BigInt n = m * BigInt(s.sxy) - BigInt(s.sx) * sy;
  const BigInt d(centered_index_scale(s.m));
  return Rational{a * d - n * n, m * d};
}

inline __int128 index_sum(__int128 k) { return k * (k + 1) / 2; }

}  // namespace detail

/// Finds the change-point of `trace` with probing window `omega`.
/// Requires omega >= 2 and n >= 2 * omega.
inline ChangePointFit estimate_changepoint(const OrderedTaskTrace& trace,
                                           std::size_t omega = kDefaultOmega) {
  using detail::SegmentSums;
  if (omega < kMinOmega) {
    throw Error(ErrorCode::kInvalidConfig,
                "omega must be at least " + std::to_string(kMinOmega));
  }
  const auto y = trace.y();
  const std::size_t n = y.size();
  if (n < 2 * omega) {
    throw Error(ErrorCode::kTraceTooShort,
                "n=" + std::to_string(n) + " < 2*omega=" + std::to_string(2 * omega));
  }

  const Nanos shift = y[n / 2];
  const long double range =
      static_cast<long double>(std::max(y.back() - shift, shift - y.front()));
  // Exact running sums of squares must fit in 128 bits.
  if (static_cast<long double>(n) * range * range > 0x1p124L) {
    throw Error(ErrorCode::kValueOutOfRange, "durations too large for exact change-point search");
  }

  SegmentSums total;
  total.m = static_cast<__int128>(n);
  total.sx = detail::index_sum(total.m);
  for (std::size_t i = 1; i <= n; ++i) {
    const __int128 v = y[i - 1] - shift;
    total.sy += v;
    total.sxy += v * static_cast<__int128>(i);
    total.syy += v * v;
  }

  // Visits every admissible split with exact left/right sums.
  auto for_each_split = [&](auto&& visit) {
    SegmentSums left;
    for (std::size_t i = 1; i <= n - omega; ++i) {
      const __int128 v = y[i - 1] - shift;
      left.m += 1;
      left.sx += static_cast<__int128>(i);
      left.sy += v;
      left.sxy += v * static_cast<__int128>(i);
      left.syy += v * v;
      if (i < omega) continue;
      SegmentSums right{total.m - left.m, total.sx - left.sx, total.sy - left.sy,
                        total.sxy - left.sxy, total.syy - left.syy};
      visit(i, left, right);
    }
  };

  long double threshold = std::numeric_limits<long double>::infinity();
  for_each_split([&](std::size_t, const SegmentSums& l, const SegmentSums& r) {
    const auto a = detail::approx_segment_sse(l);
    const auto b = detail::approx_segment_sse(r);
    threshold = std::min(threshold, a.value + b.value + a.bound + b.bound);
  });

  std::size_t best_k = 0;
  detail::BigInt best_num;
  detail::BigInt best_den;
  for_each_split([&](std::size_t k, const SegmentSums& l, const SegmentSums& r) {
    const auto a = detail::approx_segment_sse(l);
    const auto b = detail::approx_segment_sse(r);
    if (a.value + b.value - a.bound - b.bound > threshold) return;
    detail::BigInt num = 0;
    detail::BigInt den = 1;
    // A zero bound means every centered sum vanished: both sides are exactly
    // constant and the SSE is exactly zero.
    if (a.bound != 0 || b.bound != 0) {
      const auto el = detail::exact_segment_sse(l);
      const auto er = detail::exact_segment_sse(r);
      num = el.num * er.den + er.num * el.den;
      den = el.den * er.den;
    }
    if (best_k == 0 || num * best_den <= best_num * den) {
      best_k = k;
      best_num = std::move(num);
      best_den = std::move(den);
    }
  });

  ChangePointFit fit;
  fit.omega = omega;
  fit.t_hat = best_k;
  fit.left = ols_line(y, 1, best_k);
  fit.right = ols_line(y, best_k + 1, n);
  fit.sse = fit.left.sse + fit.right.sse;
  return fit;
}

}  // namespace vetmeter

#endif  // VETMETER_CHANGEPOINT_HPP_
