#pragma once

// Unilateral r phi s and bilateral r psi s series by term-ratio recursion,
// the standard closed-form summations, and two-sided transformation checks.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qultra/detail/walk.hpp"
#include "qultra/qcore.hpp"

namespace qultra {

enum class SeriesKind { unilateral, bilateral };

struct SeriesSpec {
  SeriesKind kind = SeriesKind::unilateral;
  std::vector<complex> upper;
  std::vector<complex> lower;
  QBase q{0.5};
  complex z;
};

struct SeriesResult {
  complex value;
  int terms = 0;
};

namespace detail {

struct Param {
  complex v;
  std::optional<int> e;  // lattice exponent: v == q^e
};

inline std::vector<Param> classify(const std::vector<complex>& vs, complex q) {
  std::vector<Param> out;
  out.reserve(vs.size());
  for (complex v : vs) out.push_back({v, lattice_exponent(v, q)});
  return out;
}

inline bool same_parameter(complex a, complex b) {
  return std::abs(a - b) <= 1e-14 * std::max(std::abs(a), std::abs(b));
}

/// Removes identical upper/lower pairs; their factors cancel for every k.
inline void cancel_pairs(std::vector<complex>& upper, std::vector<complex>& lower) {
  for (auto it = upper.begin(); it != upper.end();) {
    auto match = std::find_if(lower.begin(), lower.end(),
                              [&](complex b) { return same_parameter(*it, b); });
    if (match != lower.end()) {
      lower.erase(match);
      it = upper.erase(it);
    } else {
      ++it;
    }
  }
}

/// Last nonzero index k >= 0 of the forward side if an upper parameter is q^{-N}.
inline std::optional<int> forward_stop(const std::vector<Param>& upper) {
  std::optional<int> n;
  for (const auto& p : upper)
    if (p.e && *p.e <= 0) n = n ? std::min(*n, -*p.e) : -*p.e;
  return n;
}

/// Throws if some lower parameter q^{-j} puts a pole at a forward index <= stop.
inline void check_forward_poles(const std::vector<Param>& lower, std::optional<int> stop,
                                const char* what) {
  for (const auto& p : lower) {
    if (!p.e || *p.e > 0) continue;
    const int j = -*p.e;  // factor (1 - b q^j) vanishes; terms k > j are poles
    if (!stop || j < *stop)
      throw PoleError(std::string(what) + ": lower parameter on the pole lattice", j);
  }
}

/// Forward ratio T_{k+1}/T_k without the argument and q-power factor.
inline complex forward_factor(const std::vector<Param>& upper, const std::vector<Param>& lower,
                              complex qk, int k) {
  complex num(1.0, 0.0);
  complex den(1.0, 0.0);
  for (const auto& p : upper) {
    if (p.e && *p.e == -k) return {0.0, 0.0};
    num *= 1.0 - p.v * qk;
  }
  for (const auto& p : lower) {
    if (p.e && *p.e == -k) throw PoleError("series: vanishing lower factor", k);
    den *= 1.0 - p.v * qk;
  }
  return num / den;
}

inline double max_modulus(const std::vector<complex>& a, const std::vector<complex>& b) {
  double m = 1.0;
  for (complex v : a) m = std::max(m, std::abs(v));
  for (complex v : b) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

/// Sum of r phi s (a; b; q, z) = sum_{k>=0} (a;q)_k / ((q;q)_k (b;q)_k)
///   [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k.
inline SeriesResult eval_phi(const SeriesSpec& spec, const TruncationPolicy& policy = {}) {
  policy.validate();
  if (spec.kind != SeriesKind::unilateral) throw DomainError("eval_phi needs a unilateral spec");
  const complex q = spec.q.value();
  const auto upper = detail::classify(spec.upper, q);
  const auto lower = detail::classify(spec.lower, q);
  const int r = static_cast<int>(upper.size());
  const int s = static_cast<int>(lower.size());
  const int power = 1 + s - r;

  const auto stop = detail::forward_stop(upper);
  detail::check_forward_poles(lower, stop, "eval_phi");
  if (spec.z == complex(0.0, 0.0)) return {{1.0, 0.0}, 1};
  if (!stop && (power < 0 || (power == 0 && !(std::abs(spec.z) < 1.0))))
    throw RegionError("eval_phi: argument outside the convergence region");

  complex qk(1.0, 0.0);
  auto ratio = [&](int k) {
    const complex f = detail::forward_factor(upper, lower, qk, k);
    const complex qk1 = qk * q;
    const complex step = f / (1.0 - qk1) * qpow(-qk, power) * spec.z;
    qk = qk1;
    return step;
  };
  const int transient =
      stop ? *stop + 1 : detail::settle_length(detail::max_modulus(spec.upper, spec.lower),
                                               spec.q.modulus());
  const auto tail = detail::walk_tail(complex(1.0, 0.0), ratio, transient, policy, "eval_phi");
  return {require_finite(1.0 + tail.sum, "eval_phi"), tail.terms + 1};
}

/// Sum over all integers k of (a;q)_k / (b;q)_k [(-1)^k q^{k(k-1)/2}]^{s-r} z^k.
/// Zero parameters are allowed; (0;q)_k = 1 for every k.
inline SeriesResult eval_psi(const SeriesSpec& spec, const TruncationPolicy& policy = {}) {
  policy.validate();
  if (spec.kind != SeriesKind::bilateral) throw DomainError("eval_psi needs a bilateral spec");
  const complex q = spec.q.value();
  const double qmod = spec.q.modulus();
  const int power = static_cast<int>(spec.lower.size()) - static_cast<int>(spec.upper.size());

  std::vector<complex> up = spec.upper;
  std::vector<complex> lo = spec.lower;
  detail::cancel_pairs(up, lo);
  const auto upper = detail::classify(up, q);
  const auto lower = detail::classify(lo, q);

  // Forward side k >= 0.
  const auto fstop = detail::forward_stop(upper);
  detail::check_forward_poles(lower, fstop, "eval_psi");

  // Backward side k < 0: a lower parameter q^e (e >= 1) zeroes every term k <= -e,
  // an upper parameter q^e (e >= 1) is a pole at k = -e.
  std::optional<int> bstop;  // number of nonzero terms with k < 0
  for (const auto& p : lower)
    if (p.e && *p.e >= 1) bstop = bstop ? std::min(*bstop, *p.e - 1) : *p.e - 1;
  for (const auto& p : upper) {
    if (!p.e || *p.e < 1) continue;
    if (!bstop || *p.e <= *bstop)
      throw PoleError("eval_psi: upper parameter on the pole lattice", -*p.e);
  }

  int zero_balance = 0;  // zero lower minus zero upper parameters
  complex nonzero_quotient(1.0, 0.0);
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (const auto& p : lower) {
    if (p.v == complex(0.0, 0.0)) {
      ++zero_balance;
    } else {
      nonzero_quotient *= p.v;
      min_nonzero = std::min(min_nonzero, std::abs(p.v));
    }
  }
  for (const auto& p : upper) {
    if (p.v == complex(0.0, 0.0)) {
      --zero_balance;
    } else {
      nonzero_quotient /= p.v;
      min_nonzero = std::min(min_nonzero, std::abs(p.v));
    }
  }

  if (spec.z == complex(0.0, 0.0)) {
    if (bstop && *bstop == 0) return {{1.0, 0.0}, 1};
    throw RegionError("eval_psi: zero argument with a non-terminating negative side");
  }
  if (!fstop && (power < 0 || (power == 0 && !(std::abs(spec.z) < 1.0))))
    throw RegionError("eval_psi: argument outside the region of the k >= 0 side");
  if (!bstop && (zero_balance < 0 ||
                 (zero_balance == 0 && !(std::abs(nonzero_quotient / spec.z) < 1.0))))
    throw RegionError("eval_psi: argument outside the region of the k < 0 side");

  complex qk(1.0, 0.0);
  auto forward = [&](int k) {
    const complex f = detail::forward_factor(upper, lower, qk, k);
    const complex step = f * qpow(-qk, power) * spec.z;
    qk *= q;
    return step;
  };

  // T_{k-1}/T_k with u = q^{1-k}: prod (u - b) / prod (u - a) * (-1)^{s-r} / z.
  const double sign = (power % 2 == 0) ? 1.0 : -1.0;
  complex u = q;
  auto backward = [&](int j) {
    const int e = j + 1;  // u = q^{j+1} on the step from k = -j to k = -j-1
    complex num(1.0, 0.0);
    complex den(1.0, 0.0);
    for (const auto& p : lower) {
      if (p.e && *p.e == e) return complex(0.0, 0.0);
      num *= u - p.v;
    }
    for (const auto& p : upper) {
      if (p.e && *p.e == e) throw PoleError("eval_psi: vanishing upper factor", -e);
      den *= u - p.v;
    }
    const complex step = num / den * sign / spec.z;
    u *= q;
    return step;
  };

  const int ftransient =
      fstop ? *fstop + 1 : detail::settle_length(detail::max_modulus(up, lo), qmod);
  int btransient = 0;
  if (bstop) {
    btransient = *bstop + 1;
  } else if (std::isfinite(min_nonzero)) {
    btransient = detail::settle_length(1.0 / min_nonzero, qmod);
  }

  const auto f = detail::walk_tail(complex(1.0, 0.0), forward, ftransient, policy, "eval_psi");
  const auto b = detail::walk_tail(complex(1.0, 0.0), backward, btransient, policy, "eval_psi");
  CompensatedSum total;
  total.add(1.0);
  total.add(f.sum);
  total.add(b.sum);
  return {require_finite(total.value(), "eval_psi"), 1 + f.terms + b.terms};
}

inline SeriesResult eval_series(const SeriesSpec& spec, const TruncationPolicy& policy = {}) {
  return spec.kind == SeriesKind::unilateral ? eval_phi(spec, policy) : eval_psi(spec, policy);
}

/// Left-hand series of a named summation.
///
///   q_binomial      (a, z)     1phi0(a; -; q, z)
///   q_gauss         (a, b, c)  2phi1(a, b; c; q, c/ab)
///   ramanujan_1psi1 (a, b, z)  1psi1(a; b; q, z)
///   q_kummer_2psi2  (a, b, c)  2psi2(b, c; aq/b, aq/c; q, -aq/bc)
///   bailey_3psi3_a  (b, c, d)  3psi3(b, c, d; q/b, q/c, q/d; q, q/bcd)
///   bailey_3psi3_b  (b, c, d)  3psi3(b, c, d; q^2/b, q^2/c, q^2/d; q, q^2/bcd)
inline SeriesSpec closed_form_lhs(std::string_view name, const std::vector<complex>& p,
                                  const QBase& base) {
  const complex q = base.value();
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw DomainError(std::string(name) + " expects " + std::to_string(n) + " parameters");
  };
  if (name == "q_binomial") {
    need(2);
    return {SeriesKind::unilateral, {p[0]}, {}, base, p[1]};
  }
  if (name == "q_gauss") {
    need(3);
    return {SeriesKind::unilateral, {p[0], p[1]}, {p[2]}, base, p[2] / (p[0] * p[1])};
  }
  if (name == "ramanujan_1psi1") {
    need(3);
    return {SeriesKind::bilateral, {p[0]}, {p[1]}, base, p[2]};
  }
  if (name == "q_kummer_2psi2") {
    need(3);
    const complex a = p[0], b = p[1], c = p[2];
    return {SeriesKind::bilateral, {b, c}, {a * q / b, a * q / c}, base, -a * q / (b * c)};
  }
  if (name == "bailey_3psi3_a" || name == "bailey_3psi3_b") {
    need(3);
    const complex s = name == "bailey_3psi3_a" ? q : q * q;
    const complex b = p[0], c = p[1], d = p[2];
    return {SeriesKind::bilateral, {b, c, d}, {s / b, s / c, s / d}, base, s / (b * c * d)};
  }
  throw DomainError("unknown closed form: " + std::string(name));
}

/// Product side of a named summation; parameters as in closed_form_lhs.
inline complex closed_form(std::string_view name, const std::vector<complex>& p,
                           const QBase& base, const TruncationPolicy& policy = {}) {
  const complex q = base.value();
  const SeriesSpec lhs = closed_form_lhs(name, p, base);
  const auto inf = [&](std::initializer_list<complex> as) {
    return poch_multi(as, base, infinity, policy);
  };
  if (name == "q_binomial") {
    if (!(std::abs(p[1]) < 1.0)) throw RegionError("q_binomial needs |z| < 1");
    return require_finite(inf({p[0] * p[1]}) / inf({p[1]}), "q_binomial");
  }
  if (name == "q_gauss") {
    if (!(std::abs(lhs.z) < 1.0)) throw RegionError("q_gauss needs |c/ab| < 1");
    const complex a = p[0], b = p[1], c = p[2];
    return require_finite(inf({c / a, c / b}) / inf({c, c / (a * b)}), "q_gauss");
  }
  if (name == "ramanujan_1psi1") {
    const complex a = p[0], b = p[1], z = p[2];
    if (!(std::abs(z) < 1.0) || !(std::abs(b / a) < std::abs(z)))
      throw RegionError("ramanujan_1psi1 needs |b/a| < |z| < 1");
    return require_finite(inf({q, a * z, q / (a * z), b / a}) / inf({b, z, b / (a * z), q / a}),
                          "ramanujan_1psi1");
  }
  if (name == "q_kummer_2psi2") {
    const complex a = p[0], b = p[1], c = p[2];
    if (!(std::abs(a * q / (b * c)) < 1.0)) throw RegionError("q_kummer_2psi2 needs |aq/bc| < 1");
    const QBase q2 = base.squared();
    const complex num = poch(a * q / (b * c), base, infinity, policy) *
                        poch_multi({q * q, a * q, q / a, a * q * q / (b * b), a * q * q / (c * c)},
                                   q2, infinity, policy);
    return require_finite(num / inf({a * q / b, a * q / c, q / b, q / c, -a * q / (b * c)}),
                          "q_kummer_2psi2");
  }
  const complex s = name == "bailey_3psi3_a" ? q : q * q;
  const complex b = p[0], c = p[1], d = p[2];
  if (!(std::abs(lhs.z) < 1.0) || !(std::abs(s * s / (b * c * d)) < 1.0))
    throw RegionError(std::string(name) + " argument outside the annulus");
  return require_finite(inf({q, s / (b * c), s / (b * d), s / (c * d)}) /
                            inf({s / b, s / c, s / d, s / (b * c * d)}),
                        name == "bailey_3psi3_a" ? "bailey_3psi3_a" : "bailey_3psi3_b");
}

/// |LHS - RHS| / max(1, |LHS|) of a two-sided transformation.
///
///   bailey_2psi2_single   (a, b, c, d, z)
///   bailey_2psi2_iterated (a, b, c, d, z)
///   wellpoised_6psi8      (a, c, d, e, f)
inline double transform_residual(std::string_view name, const std::vector<complex>& p,
                                 const QBase& base, const TruncationPolicy& policy = {},
                                 int* terms_used = nullptr) {
  const complex q = base.value();
  const auto inf = [&](std::initializer_list<complex> as) {
    return poch_multi(as, base, infinity, policy);
  };
  const auto psi = [&](std::vector<complex> up, std::vector<complex> lo, complex z) {
    const auto r = eval_psi({SeriesKind::bilateral, std::move(up), std::move(lo), base, z}, policy);
    if (terms_used) *terms_used += r.terms;
    return r.value;
  };
  if (terms_used) *terms_used = 0;
  complex lhs, rhs;
  if (name == "bailey_2psi2_single" || name == "bailey_2psi2_iterated") {
    if (p.size() != 5) throw DomainError(std::string(name) + " expects (a, b, c, d, z)");
    const complex a = p[0], b = p[1], c = p[2], d = p[3], z = p[4];
    lhs = psi({a, b}, {c, d}, z);
    if (name == "bailey_2psi2_single") {
      rhs = inf({a * z, d / a, c / b, d * q / (a * b * z)}) /
            inf({z, d, q / b, c * d / (a * b * z)}) *
            psi({a, a * b * z / d}, {a * z, c}, d / a);
    } else {
      rhs = inf({a * z, b * z, c * q / (a * b * z), d * q / (a * b * z)}) /
            inf({q / a, q / b, c, d}) *
            psi({a * b * z / c, a * b * z / d}, {a * z, b * z}, c * d / (a * b * z));
    }
  } else if (name == "wellpoised_6psi8") {
    if (p.size() != 5) throw DomainError("wellpoised_6psi8 expects (a, c, d, e, f)");
    const complex a = p[0], c = p[1], d = p[2], e = p[3], f = p[4];
    const complex ra = std::sqrt(a);
    lhs = psi({e, f}, {a * q / c, a * q / d}, a * q / (e * f));
    rhs = inf({q / c, q / d, a * q / e, a * q / f}) /
          inf({a * q, q / a, a * q / (c * d), a * q / (e * f)}) *
          psi({q * ra, -q * ra, c, d, e, f},
              {ra, -ra, a * q / c, a * q / d, a * q / e, a * q / f, 0.0, 0.0},
              a * a * a * q * q / (c * d * e * f));
  } else {
    throw DomainError("unknown transformation: " + std::string(name));
  }
  const double r = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  if (!std::isfinite(r)) throw NumericalError("transform_residual: non-finite residual");
  return r;
}

}  // namespace qultra
