#pragma once

// One-directional term-ratio summation shared by the series engines.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qultra/qcore.hpp"

namespace qultra::detail {

struct WalkResult {
  complex sum;
  int terms = 0;
};

/// Sums T_1 + T_2 + ... where T_{i+1} = T_i * ratio(i) and T_0 = t0 (not included).
///
/// A ratio of exactly zero ends the walk (terminating series). No stopping or
/// divergence checks are made during the first `transient` steps. Afterwards the
/// walk stops once tail_window consecutive terms satisfy both |T| and the
/// geometric tail estimate |T| rho/(1 - rho) <= rel_tol * max(|S|, max|T|) + abs_tol,
/// with rho = |ratio| of that step.
template <class Ratio>
WalkResult walk_tail(complex t0, Ratio&& ratio, int transient, const TruncationPolicy& policy,
                     const char* what) {
  CompensatedSum sum;
  complex t = t0;
  double biggest = std::abs(t0);
  double smallest = std::numeric_limits<double>::infinity();
  int since_min = 0;
  int below = 0;
  const int guard = 8 * policy.tail_window;
  for (int i = 0;; ++i) {
    if (i >= policy.max_terms)
      throw NonConvergence(std::string(what) + ": exceeded max_terms");
    const complex r = ratio(i);
    if (r == complex(0.0, 0.0)) return {sum.value(), i};
    t *= r;
    if (!is_finite(t)) throw NumericalError(std::string(what) + ": term overflow");
    sum.add(t);
    const double m = std::abs(t);
    if (m == 0.0) return {sum.value(), i + 1};
    biggest = std::max(biggest, m);
    if (i < transient) continue;

    if (m < smallest) {
      smallest = m;
      since_min = 0;
    } else if (++since_min > guard) {
      throw NonConvergence(std::string(what) + ": terms stopped decaying");
    }
    const double rho = std::abs(r);
    const double threshold = policy.rel_tol * std::max(std::abs(sum.value()), biggest) +
                             policy.abs_tol;
    const bool small = m <= threshold && rho < 1.0 && m * rho / (1.0 - rho) <= threshold;
    if (small) {
      if (++below >= policy.tail_window) return {sum.value(), i + 1};
    } else {
      below = 0;
    }
  }
}

/// Number of steps k after which |c q^k| < 0.01 for a parameter magnitude c.
inline int settle_length(double magnitude, double qmod) {
  if (!(magnitude > 0.0)) return 0;
  const double k = std::ceil(std::log(0.01 / magnitude) / std::log(qmod));
  return std::max(0, static_cast<int>(k));
}

}  // namespace qultra::detail
