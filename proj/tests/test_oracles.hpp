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

#ifndef VETMETER_TESTS_TEST_ORACLES_HPP_
#define VETMETER_TESTS_TEST_ORACLES_HPP_

// Test-only reference implementations. None of these share code paths with
// the library: they recompute everything from scratch per candidate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vetmeter/trace_model.hpp"

namespace vetmeter::testing {

using Big = boost::multiprecision::checked_int256_t;

/// Exact SSE of the OLS line over [lo, hi] (1-based) as num / den, computed
/// from per-point residual numerators:
///   residual_i * (m D) = m D Y_i - (Sy D - Sx N) - m N i
/// with D = m Sxx - Sx^2 and N = m Sxy - Sx Sy, all sums taken directly.
struct ExactSse {
  Big num;
  Big den;
};

inline ExactSse exact_segment_sse(std::span<const Nanos> y, std::size_t lo, std::size_t hi) {
  const Big m = static_cast<std::int64_t>(hi - lo + 1);
  if (hi == lo) return {Big(0), Big(1)};
  Big sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const Big x = static_cast<std::int64_t>(i);
    const Big v = y[i - 1];
    sx += x;
    sxx += x * x;
    sy += v;
    sxy += x * v;
  }
  const Big d = m * sxx - sx * sx;
  const Big n = m * sxy - sx * sy;
  const Big scale = m * d;
  const Big offset = sy * d - sx * n;
  Big sum = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const Big r = scale * Big(y[i - 1]) - offset - m * n * Big(static_cast<std::int64_t>(i));
    sum += r * r;
  }
  return {sum, scale * scale};
}

/// O(n^2) brute-force change-point: every admissible k, exact rational SSE,
/// ties resolved toward the largest k.
inline std::size_t brute_force_changepoint(std::span<const Nanos> y, std::size_t omega) {
  const std::size_t n = y.size();
  std::size_t best_k = 0;
  Big best_num = 0, best_den = 1;
  for (std::size_t k = omega; k + omega <= n; ++k) {
    const auto l = exact_segment_sse(y, 1, k);
    const auto r = exact_segment_sse(y, k + 1, n);
    // Reduce before cross-multiplying to stay inside 256 bits.
    const Big gl = boost::multiprecision::gcd(l.num, l.den);
    const Big gr = boost::multiprecision::gcd(r.num, r.den);
    const Big ln = l.num / gl, ld = l.den / gl, rn = r.num / gr, rd = r.den / gr;
    const Big num = ln * rd + rn * ld;
    const Big den = ld * rd;
    if (best_k == 0 || num * best_den <= best_num * den) {
      const Big g = boost::multiprecision::gcd(num, den);
      best_k = k;
      best_num = num / g;
      best_den = den / g;
    }
  }
  return best_k;
}

inline std::vector<Nanos> insertion_sorted(std::vector<Nanos> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const Nanos key = v[i];
    std::size_t j = i;
    while (j > 0 && v[j - 1] > key) {
      v[j] = v[j - 1];
      --j;
    }
    v[j] = key;
  }
  return v;
}

enum class TraceShape { kSmallInts, kFlatThenSpikes, kTwoLines, kConstant, kHeavyTail, kSteps };

/// Random ascending trace of length n with the given shape.
inline std::vector<Nanos> random_trace(std::mt19937_64& rng, std::size_t n, TraceShape shape) {
  std::vector<Nanos> y(n);
  std::uniform_int_distribution<Nanos> small(0, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (shape) {
    case TraceShape::kSmallInts:
      for (auto& v : y) v = small(rng);
      break;
    case TraceShape::kFlatThenSpikes:
      for (auto& v : y) {
        v = 1000 + small(rng);
        if (unit(rng) < 0.1) v += static_cast<Nanos>(unit(rng) * 50000);
      }
      break;
    case TraceShape::kTwoLines: {
      const std::size_t knee = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(n - 1));
      for (std::size_t i = 0; i < n; ++i) {
        const auto base = static_cast<Nanos>(i) * 2 + small(rng);
        y[i] = i < knee ? base : base + static_cast<Nanos>(i - knee) * 90;
      }
      break;
    }
    case TraceShape::kConstant:
      std::fill(y.begin(), y.end(), small(rng) + 1);
      break;
    case TraceShape::kHeavyTail:
      for (auto& v : y) v = static_cast<Nanos>(100.0 * std::pow(unit(rng) + 1e-6, -1.0 / 1.3));
      break;
    case TraceShape::kSteps:
      for (auto& v : y) v = 1500 + 4000 * static_cast<Nanos>(unit(rng) < 0.2);
      break;
  }
  std::sort(y.begin(), y.end());
  return y;
}

}  // namespace vetmeter::testing

#endif  // VETMETER_TESTS_TEST_ORACLES_HPP_
