#pragma once

// Scalar scaffolding and q-shifted factorials.
//
//   (a;q)_k   = prod_{j=0}^{k-1} (1 - a q^j)           k >= 0
//   (a;q)_k   = 1 / (a q^k; q)_{-k}                    k <  0
//   (a;q)_inf = prod_{j>=0} (1 - a q^j)                 truncated per policy

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "qultra/errors.hpp"

namespace qultra {

using complex = std::complex<double>;

inline bool is_finite(complex v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline complex require_finite(complex v, const char* what) {
  if (!is_finite(v)) throw NumericalError(std::string("non-finite value in ") + what);
  return v;
}

/// The base q of every series, 0 < |q| < 1.
class QBase {
 public:
  QBase(double q) : QBase(complex(q, 0.0)) {}  // NOLINT(google-explicit-constructor)
  QBase(complex q) : q_(q) {                   // NOLINT(google-explicit-constructor)
    const double m = std::abs(q);
    if (!is_finite(q) || !(m > 0.0) || !(m < 1.0))
      throw DomainError("base q must satisfy 0 < |q| < 1");
  }

  complex value() const noexcept { return q_; }
  double modulus() const noexcept { return std::abs(q_); }

  bool is_real_positive() const noexcept { return q_.imag() == 0.0 && q_.real() > 0.0; }

  /// The real value of q; operations that need a positive measure or real roots call this.
  double real_value() const {
    if (!is_real_positive()) throw DomainError("operation requires real 0 < q < 1");
    return q_.real();
  }

  QBase squared() const { return QBase(q_ * q_); }

 private:
  complex q_;
};

/// Controls truncation of infinite products and series.
struct TruncationPolicy {
  double rel_tol = 1e-13;
  double abs_tol = 1e-300;
  int max_terms = 10000;
  /// Consecutive sub-threshold terms required before accepting convergence.
  int tail_window = 3;

  void validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
      throw ConfigError("rel_tol must be a positive finite number");
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
      throw ConfigError("abs_tol must be a positive finite number");
    if (tail_window < 1) throw ConfigError("tail_window must be >= 1");
    if (max_terms < tail_window) throw ConfigError("max_terms must be >= tail_window");
  }
};

/// A nonzero z encoding x = (z + 1/z)/2. z and 1/z encode the same x.
class SpectralPoint {
 public:
  explicit SpectralPoint(complex z) : z_(z) {
    if (!is_finite(z) || z == complex(0.0, 0.0))
      throw DomainError("spectral point z must be finite and nonzero");
  }

  static SpectralPoint from_theta(double theta) { return SpectralPoint(std::polar(1.0, theta)); }

  /// |x| <= 1 maps to z = x + i sqrt(1 - x^2); |x| > 1 to the real root z = x + sqrt(x^2 - 1).
  static SpectralPoint from_x(double x) {
    if (!std::isfinite(x)) throw DomainError("x must be finite");
    if (std::abs(x) <= 1.0) return SpectralPoint(complex(x, std::sqrt(1.0 - x * x)));
    return SpectralPoint(complex(x + std::sqrt(x * x - 1.0), 0.0));
  }

  complex z() const noexcept { return z_; }
  complex x() const noexcept { return 0.5 * (z_ + 1.0 / z_); }
  SpectralPoint inverse() const { return SpectralPoint(1.0 / z_); }
  SpectralPoint scaled(complex factor) const { return SpectralPoint(z_ * factor); }
  SpectralPoint negated() const { return SpectralPoint(-z_); }

 private:
  complex z_;
};

/// Tag selecting the infinite product (a;q)_inf.
struct InfiniteIndex {};
inline constexpr InfiniteIndex infinity{};

/// q^j by binary powering; negative j gives the reciprocal.
inline complex qpow(complex q, int j) {
  std::uint32_t e = j < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(j))
                          : static_cast<std::uint32_t>(j);
  complex base = q;
  complex r(1.0, 0.0);
  while (e != 0U) {
    if ((e & 1U) != 0U) r *= base;
    base *= base;
    e >>= 1U;
  }
  return j < 0 ? 1.0 / r : r;
}

/// Relative tolerance under which a parameter is taken to sit exactly on q^e.
inline constexpr double kLatticeTol = 1e-12;

/// Returns e when a == q^e (within kLatticeTol), i.e. when (1 - a q^{-e}) is an exact zero.
inline std::optional<int> lattice_exponent(complex a, complex q) {
  if (a == complex(0.0, 0.0)) return std::nullopt;
  const double e = std::log(std::abs(a)) / std::log(std::abs(q));
  if (!std::isfinite(e) || std::abs(e) > 1e6) return std::nullopt;
  const int k = static_cast<int>(std::lround(e));
  if (std::abs(a / qpow(q, k) - 1.0) <= kLatticeTol) return k;
  return std::nullopt;
}

/// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
 public:
  void add(complex v) noexcept {
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  complex value() const noexcept { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& s, double& c, double v) noexcept {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }

  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// Finite q-shifted factorial (a;q)_k for any integer k.
inline complex poch(complex a, const QBase& base, int k) {
  const complex q = base.value();
  const auto e = lattice_exponent(a, q);
  if (k >= 0) {
    if (e && *e <= 0 && -*e < k) return {0.0, 0.0};
    complex p(1.0, 0.0);
    complex qj(1.0, 0.0);
    for (int j = 0; j < k; ++j) {
      p *= 1.0 - a * qj;
      qj *= q;
    }
    return require_finite(p, "poch");
  }
  const int m = -k;
  if (e && *e >= 1 && *e <= m)
    throw PoleError("(a;q)_k with negative k has a vanishing denominator", *e);
  // 1 / prod_{j=1}^{m} (1 - a q^{-j}) = prod q^j / (q^j - a)
  complex p(1.0, 0.0);
  complex qj(1.0, 0.0);
  for (int j = 1; j <= m; ++j) {
    qj *= q;
    p *= qj / (qj - a);
  }
  return require_finite(p, "poch");
}

/// Infinite product (a;q)_inf, truncated once |a||q|^J < rel_tol (1 - |q|)
/// holds for tail_window consecutive factor indices J.
inline complex poch(complex a, const QBase& base, InfiniteIndex,
                    const TruncationPolicy& policy = {}) {
  const complex q = base.value();
  if (const auto e = lattice_exponent(a, q); e && *e <= 0) return {0.0, 0.0};
  const double threshold = policy.rel_tol * (1.0 - base.modulus());
  const double am = std::abs(a);
  complex p(1.0, 0.0);
  complex qj(1.0, 0.0);
  int below = 0;
  for (int j = 0;; ++j) {
    if (j >= policy.max_terms)
      throw NonConvergence("(a;q)_inf exceeded max_terms factors");
    p *= 1.0 - a * qj;
    if (am * std::abs(qj) < threshold) {
      if (++below >= policy.tail_window) break;
    } else {
      below = 0;
    }
    qj *= q;
  }
  return require_finite(p, "poch_inf");
}

/// prod_i (a_i;q)_k.
inline complex poch_multi(std::span<const complex> as, const QBase& q, int k) {
  complex p(1.0, 0.0);
  for (std::size_t i = 0; i < as.size(); ++i) {
    try {
      p *= poch(as[i], q, k);
    } catch (const PoleError& err) {
      throw PoleError("factor " + std::to_string(i) + ": " + err.what(), err.factor_index());
    }
  }
  return require_finite(p, "poch_multi");
}

/// prod_i (a_i;q)_inf.
inline complex poch_multi(std::span<const complex> as, const QBase& q, InfiniteIndex,
                          const TruncationPolicy& policy = {}) {
  complex p(1.0, 0.0);
  for (std::size_t i = 0; i < as.size(); ++i) {
    try {
      p *= poch(as[i], q, infinity, policy);
    } catch (const NonConvergence& err) {
      throw NonConvergence("factor " + std::to_string(i) + ": " + err.what());
    }
  }
  return require_finite(p, "poch_multi");
}

inline complex poch_multi(std::initializer_list<complex> as, const QBase& q, InfiniteIndex,
                          const TruncationPolicy& policy = {}) {
  return poch_multi(std::span<const complex>(as.begin(), as.size()), q, infinity, policy);
}

inline complex poch_multi(std::initializer_list<complex> as, const QBase& q, int k) {
  return poch_multi(std::span<const complex>(as.begin(), as.size()), q, k);
}

/// (t z, t/z; q)_inf, the "(t e^{+-i theta}; q)_inf" shorthand.
inline complex poch_pm(complex t, const SpectralPoint& p, const QBase& q,
                       const TruncationPolicy& policy = {}) {
  return require_finite(
      poch(t * p.z(), q, infinity, policy) * poch(t / p.z(), q, infinity, policy), "poch_pm");
}

}  // namespace qultra
