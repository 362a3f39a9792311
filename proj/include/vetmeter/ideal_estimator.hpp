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

#ifndef VETMETER_IDEAL_ESTIMATOR_HPP_
#define VETMETER_IDEAL_ESTIMATOR_HPP_

// Ideal-cost extrapolation beyond the change-point and the EI / OC / PR
// decomposition of one task.
//
// Past rank t the ideal curve continues the last observed step linearly:
//   g(t-1) = Y_{t-1}, g(t) = Y_t, g(r+1) = 2 g(r) - g(r-1),
// which closes to g(r) = Y_t + (r - t)(Y_t - Y_{t-1}). All terms are integer
// nanoseconds, so both forms and every sum are evaluated exactly in 128-bit
// integers and only converted to double at the end.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "vetmeter/error.hpp"
#include "vetmeter/trace_model.hpp"

namespace vetmeter {

namespace detail {

inline void check_extrapolation_range(const OrderedTaskTrace& trace, std::size_t t,
                                      std::size_t r) {
  if (t < 2 || t >= trace.n() || r < t || r > trace.n()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "need 2 <= t < n and t <= r <= n (t=" + std::to_string(t) +
                    ", r=" + std::to_string(r) + ", n=" + std::to_string(trace.n()) + ")");
  }
}

inline __int128 g_hat_exact(const OrderedTaskTrace& trace, std::size_t t, std::size_t r) {
  const __int128 y_t = trace.at(t);
  const __int128 step = y_t - trace.at(t - 1);
  return y_t + static_cast<__int128>(r - t) * step;
}

}  // namespace detail

/// Extrapolated ideal cost at rank r (closed form).
inline double g_hat(const OrderedTaskTrace& trace, std::size_t t, std::size_t r) {
  detail::check_extrapolation_range(trace, t, r);
  return static_cast<double>(detail::g_hat_exact(trace, t, r));
}

/// The same curve produced by running the three-point recurrence forward;
/// element j holds g(t + j) for r = t..n.
inline std::vector<double> g_hat_by_recurrence(const OrderedTaskTrace& trace, std::size_t t) {
  detail::check_extrapolation_range(trace, t, t);
  std::vector<double> out;
  out.reserve(trace.n() - t + 1);
  __int128 prev = trace.at(t - 1);
  __int128 cur = trace.at(t);
  out.push_back(static_cast<double>(cur));
  for (std::size_t r = t; r < trace.n(); ++r) {
    const __int128 next = 2 * cur - prev;
    prev = cur;
    cur = next;
    out.push_back(static_cast<double>(cur));
  }
  return out;
}

/// EI / OC / PR with the change-point held at `t_hat`. The extrapolation is
/// clamped to the observation (min(g(r), Y_r)) so OC is never negative and
/// PR = EI + OC holds exactly in integers.
inline IdealEstimate estimate_ideal(const OrderedTaskTrace& trace, std::size_t t_hat) {
  const std::size_t n = trace.n();
  if (t_hat < 2 || t_hat > n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "t_hat=" + std::to_string(t_hat) + " outside [2, " + std::to_string(n) + "]");
  }
  IdealEstimate est;
  est.t_hat = t_hat;
  est.g_anchor = {trace.at(t_hat - 1), trace.at(t_hat)};

  __int128 prefix = 0;
  for (std::size_t r = 1; r <= t_hat; ++r) prefix += trace.at(r);
  __int128 extrapolated = 0;
  __int128 overhead = 0;
  if (t_hat < n) {
    const __int128 y_t = est.g_anchor.second;
    const __int128 step = y_t - est.g_anchor.first;
    for (std::size_t r = t_hat + 1; r <= n; ++r) {
      const __int128 observed = trace.at(r);
      const __int128 g = y_t + static_cast<__int128>(r - t_hat) * step;
      const __int128 clamped = std::min(g, observed);
      if (g > observed) ++est.clamped_ranks;
      extrapolated += clamped;
      overhead += observed - clamped;
    }
  }
  est.ei = static_cast<double>(prefix + extrapolated);
  est.oc = static_cast<double>(overhead);
  est.pr = static_cast<double>(prefix + extrapolated + overhead);
  return est;
}

inline IdealEstimate estimate_ideal(const OrderedTaskTrace& trace, const ChangePointFit& fit) {
  return estimate_ideal(trace, fit.t_hat);
}

}  // namespace vetmeter

#endif  // VETMETER_IDEAL_ESTIMATOR_HPP_
