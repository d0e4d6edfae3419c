#pragma once

// Continuous q-ultraspherical polynomials C_n(x; beta | q) and the bilateral
// functions C_n(x; beta, gamma | q), with their generating functions,
// recurrence, symmetry, constant terms and special values.
//
//   C_n(x; beta, gamma) = sum_k A_k A_{n-k} z^{n-2k},  A_k = (beta gamma; q)_k / (q gamma; q)_k

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qultra/detail/walk.hpp"
#include "qultra/hyperseries.hpp"
#include "qultra/qcore.hpp"

namespace qultra {

struct UltraParams {
  complex beta;
  complex gamma{1.0, 0.0};
  QBase q{0.5};
};

struct UltraValue {
  int n = 0;
  SpectralPoint point{complex(1.0, 0.0)};
  complex value;
  int truncation_terms = 0;
};

enum class UltraKind { classical, bilateral };

/// Finite sum sum_{k=0}^n (beta;q)_k (beta;q)_{n-k} / ((q;q)_k (q;q)_{n-k}) z^{n-2k}.
/// Negative degrees give 0, the gamma = 1 limit of the bilateral functions.
inline complex classical_cn(int n, const SpectralPoint& p, complex beta, const QBase& base) {
  if (n < 0) return {0.0, 0.0};
  const complex q = base.value();
  std::vector<complex> w(static_cast<std::size_t>(n) + 1);
  w[0] = 1.0;
  complex qk(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    w[k + 1] = w[k] * (1.0 - beta * qk) / (1.0 - qk * q);
    qk *= q;
  }
  const complex z = p.z();
  const complex z2inv = 1.0 / (z * z);
  complex zp = qpow(z, n);
  CompensatedSum sum;
  for (int k = 0; k <= n; ++k) {
    sum.add(w[k] * w[n - k] * zp);
    zp *= z2inv;
  }
  return require_finite(sum.value(), "classical_cn");
}

namespace detail {

/// (1 - c q^j) / (1 - a q^j); for j < 0 evaluated as (u - c)/(u - a) with u = q^{-j}.
inline complex pair_ratio(complex c, complex a, complex q, int j) {
  if (c == a) return {1.0, 0.0};
  if (j >= 0) {
    const complex qj = qpow(q, j);
    return (1.0 - c * qj) / (1.0 - a * qj);
  }
  const complex u = qpow(q, -j);
  return (u - c) / (u - a);
}

/// A_k = (c;q)_k / (a;q)_k as a product of pair ratios; caller guarantees no zero or pole.
inline complex pair_poch(complex c, complex a, complex q, int k) {
  complex r(1.0, 0.0);
  if (k >= 0) {
    for (int j = 0; j < k; ++j) r *= pair_ratio(c, a, q, j);
  } else {
    for (int j = 1; j <= -k; ++j) r *= pair_ratio(a, c, q, -j);
  }
  return r;
}

/// Index range [lo, hi] of k where A_k is finite and nonzero (bounds may be infinite).
struct IndexRange {
  long lo = std::numeric_limits<int>::min();
  long hi = std::numeric_limits<int>::max();
  std::optional<long> pole_at_or_above;  // A_k infinite for k >= this
  std::optional<long> pole_at_or_below;  // A_k infinite for k <= this
};

inline IndexRange support(complex c, complex a, complex q) {
  IndexRange r;
  if (c == a) return r;
  if (const auto ea = lattice_exponent(a, q)) {
    if (*ea >= 1) r.lo = 1 - *ea;  // (a;q)_k infinite for k <= -ea
    else r.pole_at_or_above = 1 - *ea;
  }
  if (const auto ec = lattice_exponent(c, q)) {
    if (*ec <= 0) r.hi = -*ec;  // (c;q)_k zero for k > -ec
    else r.pole_at_or_below = -*ec;
  }
  return r;
}

}  // namespace detail

/// Two-sided sum of the bilateral function, walked outward from an index inside its support.
inline UltraValue bilateral_cn(int n, const SpectralPoint& p, const UltraParams& params,
                               const TruncationPolicy& policy = {}) {
  policy.validate();
  const complex q = params.q.value();
  const complex c = params.beta * params.gamma;
  const complex a = q * params.gamma;
  const complex z = p.z();
  if (params.beta == complex(0.0, 0.0)) throw DomainError("bilateral_cn needs beta != 0");

  // Terms vanish outside A_k != 0 and A_{n-k} != 0.
  const auto s = detail::support(c, a, q);
  const long lo = std::max(s.lo, n - s.hi);
  const long hi = std::min(s.hi, n - s.lo);
  if (lo > hi) return {n, p, {0.0, 0.0}, 0};
  auto inside = [&](long k) { return k >= lo && k <= hi; };
  if (s.pole_at_or_above &&
      (hi >= *s.pole_at_or_above || n - lo >= *s.pole_at_or_above))
    throw PoleError("bilateral_cn: q gamma on the pole lattice", static_cast<int>(*s.pole_at_or_above));
  if (s.pole_at_or_below &&
      (lo <= *s.pole_at_or_below || n - hi <= *s.pole_at_or_below))
    throw PoleError("bilateral_cn: beta gamma on the pole lattice", static_cast<int>(*s.pole_at_or_below));

  const complex z2 = z * z;
  constexpr long kOpen = std::numeric_limits<int>::max() / 2;
  const bool fwd_open = hi > kOpen;
  const bool bwd_open = lo < -kOpen;
  if (fwd_open && !(std::abs(q / (params.beta * z2)) < 1.0))
    throw RegionError("bilateral_cn: |q z^-2 / beta| must be < 1");
  if (bwd_open && !(std::abs(q * z2 / params.beta) < 1.0))
    throw RegionError("bilateral_cn: |q z^2 / beta| must be < 1");

  const int k0 = static_cast<int>(std::clamp<long>(0, lo, hi));
  const complex t0 = detail::pair_poch(c, a, q, k0) * detail::pair_poch(c, a, q, n - k0) *
                     qpow(z, n - 2 * k0);
  if (!is_finite(t0)) throw NumericalError("bilateral_cn: starting term overflow");

  auto forward = [&](int i) {
    const int k = k0 + i;
    if (!inside(static_cast<long>(k) + 1)) return complex(0.0, 0.0);
    return detail::pair_ratio(c, a, q, k) * detail::pair_ratio(a, c, q, n - k - 1) / z2;
  };
  auto backward = [&](int i) {
    const int k = k0 - i;
    if (!inside(static_cast<long>(k) - 1)) return complex(0.0, 0.0);
    return detail::pair_ratio(a, c, q, k - 1) * detail::pair_ratio(c, a, q, n - k) * z2;
  };

  const double qmod = params.q.modulus();
  const double big = std::max({1.0, std::abs(a), std::abs(c)});
  const double small = std::min(std::abs(a), std::abs(c));
  const int settle = std::abs(n) + detail::settle_length(big, qmod) +
                     (small > 0.0 ? detail::settle_length(1.0 / small, qmod) : 0) + 2;
  const int ftransient = fwd_open ? settle : static_cast<int>(hi - k0) + 1;
  const int btransient = bwd_open ? settle : static_cast<int>(k0 - lo) + 1;

  const auto f = detail::walk_tail(t0, forward, ftransient, policy, "bilateral_cn");
  const auto b = detail::walk_tail(t0, backward, btransient, policy, "bilateral_cn");
  CompensatedSum total;
  total.add(t0);
  total.add(f.sum);
  total.add(b.sum);
  return {n, p, require_finite(total.value(), "bilateral_cn"), 1 + f.terms + b.terms};
}

inline complex bilateral_value(int n, const SpectralPoint& p, const UltraParams& params,
                               const TruncationPolicy& policy = {}) {
  return bilateral_cn(n, p, params, policy).value;
}

/// The same function as (beta gamma;q)_n/(q gamma;q)_n z^n times a well-poised 2psi2
/// in q z^{-2}/beta. Used as an independent cross-check of bilateral_cn.
inline UltraValue bilateral_cn_via_psi(int n, const SpectralPoint& p, const UltraParams& params,
                                       const TruncationPolicy& policy = {}) {
  const QBase& base = params.q;
  const complex q = base.value();
  const complex bg = params.beta * params.gamma;
  const complex qn = qpow(q, -n);
  const complex pre = poch(bg, base, n) / poch(q * params.gamma, base, n) * qpow(p.z(), n);
  const auto r = eval_psi({SeriesKind::bilateral,
                           {bg, qn / params.gamma},
                           {q * params.gamma, q * qn / bg},
                           base,
                           q / (p.z() * p.z() * params.beta)},
                          policy);
  return {n, p, require_finite(pre * r.value, "bilateral_cn_via_psi"), r.terms};
}

/// Degree-n function of the requested family; the classical family ignores gamma.
inline UltraValue ultra_cn(UltraKind kind, int n, const SpectralPoint& p,
                           const UltraParams& params, const TruncationPolicy& policy = {}) {
  if (kind == UltraKind::classical) return {n, p, classical_cn(n, p, params.beta, params.q), n + 1};
  return bilateral_cn(n, p, params, policy);
}

/// Closed product of the generating function sum_n C_n t^n.
inline complex generating_rhs(UltraKind kind, complex t, const SpectralPoint& p,
                              const UltraParams& params, const TruncationPolicy& policy = {}) {
  const QBase& base = params.q;
  const complex q = base.value();
  const complex z = p.z();
  const complex b = params.beta;
  const double tz = std::abs(t * z);
  const double tzi = std::abs(t / z);
  if (kind == UltraKind::classical) {
    if (!(tz < 1.0) || !(tzi < 1.0)) throw RegionError("generating_rhs: need |t z^{+-1}| < 1");
    return require_finite(poch_pm(b * t, p, base, policy) / poch_pm(t, p, base, policy),
                          "generating_rhs");
  }
  const double lower = std::abs(q / b);
  if (!(tz < 1.0) || !(tzi < 1.0) || !(lower < tz) || !(lower < tzi))
    throw RegionError("generating_rhs: need |q/beta| < |t z^{+-1}| < 1");
  const complex g = params.gamma;
  const auto inf = [&](std::initializer_list<complex> as) {
    return poch_multi(as, base, infinity, policy);
  };
  const complex pre = inf({q, q / b}) / inf({q * g, q / (b * g)});
  const complex num = inf({b * g * t * z, b * g * t / z, q * z / (b * g * t), q / (b * g * t * z)});
  const complex den = inf({t * z, t / z, q * z / (b * t), q / (b * t * z)});
  return require_finite(pre * pre * num / den, "generating_rhs");
}

/// Partial sums sum_{|n|<=N} C_n t^n (n >= 0 only for the classical family), with N grown
/// until tail_window consecutive index shells fall below rel_tol of the running sum.
inline UltraValue generating_sum(UltraKind kind, complex t, const SpectralPoint& p,
                                 const UltraParams& params, const TruncationPolicy& policy = {}) {
  policy.validate();
  CompensatedSum sum;
  int terms = 0;
  int below = 0;
  double biggest = 0.0;
  for (int n = 0;; ++n) {
    if (n >= policy.max_terms) throw NonConvergence("generating_sum: exceeded max_terms shells");
    complex shell = ultra_cn(kind, n, p, params, policy).value * qpow(t, n);
    if (kind == UltraKind::bilateral && n > 0)
      shell += bilateral_cn(-n, p, params, policy).value * qpow(t, -n);
    sum.add(shell);
    terms = n;
    const double m = std::abs(shell);
    biggest = std::max(biggest, m);
    if (m <= policy.rel_tol * std::max(std::abs(sum.value()), biggest) + policy.abs_tol) {
      if (++below >= policy.tail_window) break;
    } else {
      below = 0;
    }
  }
  return {terms, p, require_finite(sum.value(), "generating_sum"), terms};
}

/// |2x(1 - beta g^2 q^n) C_n - (1 - g^2 q^{n+1}) C_{n+1} - (1 - beta^2 g^2 q^{n-1}) C_{n-1}|
/// / max(1, |C_n|), with g = gamma for the bilateral family and g = 1 for the classical one.
inline double recurrence_residual(UltraKind kind, int n, const SpectralPoint& p,
                                  const UltraParams& params, const TruncationPolicy& policy = {}) {
  if (kind == UltraKind::classical && n < 1)
    throw DomainError("classical recurrence residual needs n >= 1");
  const complex q = params.q.value();
  const complex b = params.beta;
  const complex g = kind == UltraKind::classical ? complex(1.0, 0.0) : params.gamma;
  const complex cm = ultra_cn(kind, n - 1, p, params, policy).value;
  const complex c0 = ultra_cn(kind, n, p, params, policy).value;
  const complex cp = ultra_cn(kind, n + 1, p, params, policy).value;
  const complex g2 = g * g;
  const complex r = 2.0 * p.x() * (1.0 - b * g2 * qpow(q, n)) * c0 -
                    (1.0 - g2 * qpow(q, n + 1)) * cp - (1.0 - b * b * g2 * qpow(q, n - 1)) * cm;
  return std::abs(r) / std::max(1.0, std::abs(c0));
}

/// |C_n(x; beta, gamma) - (beta/q)^n C_{-n}(x; beta, 1/(beta gamma))| / max(1, |C_n|).
inline double symmetry_residual(int n, const SpectralPoint& p, const UltraParams& params,
                                const TruncationPolicy& policy = {}) {
  const complex lhs = bilateral_value(n, p, params, policy);
  UltraParams dual = params;
  dual.gamma = 1.0 / (params.beta * params.gamma);
  const complex rhs =
      qpow(params.beta / params.q.value(), n) * bilateral_value(-n, p, dual, policy);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

/// Value at x = 0: zero for odd index, for index 2m
/// (-1)^m (beta^2 g^2; q^2)_m / (q^2 g^2; q^2)_m (q, q/beta, -q g, -q/(beta g); q)_inf
///   / (-q, -q/beta, q g, q/(beta g); q)_inf.
inline complex constant_term(int n, const UltraParams& params,
                             const TruncationPolicy& policy = {}) {
  if (n % 2 != 0) return {0.0, 0.0};
  const int m = n / 2;
  const QBase& base = params.q;
  const complex q = base.value();
  const complex b = params.beta;
  const complex g = params.gamma;
  const QBase q2 = base.squared();
  const complex head = poch(b * b * g * g, q2, m) / poch(q * q * g * g, q2, m);
  const complex tail = poch_multi({q, q / b, -q * g, -q / (b * g)}, base, infinity, policy) /
                       poch_multi({-q, -q / b, q * g, q / (b * g)}, base, infinity, policy);
  return require_finite((m % 2 == 0 ? 1.0 : -1.0) * head * tail, "constant_term");
}

/// z = q^{1/4}, the point of the closed-form degree-0 value.
inline SpectralPoint special_point_c0(const QBase& q) {
  return SpectralPoint(complex(std::pow(q.real_value(), 0.25), 0.0));
}

/// z = q^{1/2}, the point of the closed-form degree -1 value.
inline SpectralPoint special_point_cm1(const QBase& q) {
  return SpectralPoint(complex(std::sqrt(q.real_value()), 0.0));
}

/// (q, q/beta, q^{1/2}/(beta gamma), q^{1/2} gamma; q)_inf
///   / (q/(beta gamma), q gamma, q^{1/2}, q^{1/2}/beta; q)_inf.
inline complex special_value_c0(const UltraParams& params, const TruncationPolicy& policy = {}) {
  const QBase& base = params.q;
  const complex q = base.real_value();
  const complex h = std::sqrt(base.real_value());
  const complex b = params.beta;
  const complex g = params.gamma;
  return require_finite(
      poch_multi({q, q / b, h / (b * g), h * g}, base, infinity, policy) /
          poch_multi({q / (b * g), q * g, h, h / b}, base, infinity, policy),
      "special_value_c0");
}

/// q^{1/2} (1 - gamma)^2 / (gamma (1 - beta)).
inline complex special_value_cm1(const UltraParams& params) {
  const double h = std::sqrt(params.q.real_value());
  const complex g = params.gamma;
  return require_finite(h * (1.0 - g) * (1.0 - g) / (g * (1.0 - params.beta)),
                        "special_value_cm1");
}

/// Coefficient of C_{m+n-2k} in the product C_m C_n of classical polynomials.
inline complex linearization_coefficient(int m, int n, int k, complex beta, const QBase& base) {
  const complex q = base.value();
  const int s = m + n;
  const complex num = poch(q, base, s - 2 * k) * poch(beta, base, m - k) *
                      poch(beta, base, n - k) * poch(beta, base, k) *
                      poch(beta * beta, base, s - k);
  const complex den = poch(beta * beta, base, s - 2 * k) * poch(q, base, m - k) *
                      poch(q, base, n - k) * poch(q, base, k) * poch(q * beta, base, s - k);
  return require_finite(num / den * (1.0 - beta * qpow(q, s - 2 * k)) / (1.0 - beta),
                        "linearization_coefficient");
}

/// |C_m C_n - sum_k coeff(k) C_{m+n-2k}| / max(1, |C_m C_n|).
inline double linearization_residual(int m, int n, const SpectralPoint& p, complex beta,
                                     const QBase& q) {
  if (m < 0 || n < 0) throw DomainError("linearization needs m, n >= 0");
  const complex lhs = classical_cn(m, p, beta, q) * classical_cn(n, p, beta, q);
  CompensatedSum rhs;
  for (int k = 0; k <= std::min(m, n); ++k)
    rhs.add(linearization_coefficient(m, n, k, beta, q) * classical_cn(m + n - 2 * k, p, beta, q));
  return std::abs(lhs - rhs.value()) / std::max(1.0, std::abs(lhs));
}

}  // namespace qultra
