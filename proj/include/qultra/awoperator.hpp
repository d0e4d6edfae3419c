#pragma once

// Askey-Wilson divided-difference operator on functions of x = (z + 1/z)/2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "qultra/qcore.hpp"
#include "qultra/ultraspherical.hpp"

namespace qultra {

using XFunction = std::function<complex(const SpectralPoint&)>;

/// Distance from z = +-1 below which the operator refuses to divide.
inline constexpr double kSingularTol = 1e-12;

/// [f(q^{1/2} z) - f(q^{-1/2} z)] / ((q^{1/2} - q^{-1/2})(z - 1/z)/2).
inline complex apply_dq(const XFunction& f, const SpectralPoint& p, const QBase& base) {
  const complex z = p.z();
  if (std::abs(z - 1.0) < kSingularTol || std::abs(z + 1.0) < kSingularTol)
    throw SingularPoint("apply_dq: z = +-1 makes the divided difference singular");
  const complex h = std::sqrt(base.value());
  const complex num = f(p.scaled(h)) - f(p.scaled(1.0 / h));
  const complex den = 0.5 * (h - 1.0 / h) * (z - 1.0 / z);
  return require_finite(num / den, "apply_dq");
}

/// Checks f(z) == f(1/z) at the given points; throws DomainError otherwise.
inline void validate_x_function(const XFunction& f, std::span<const SpectralPoint> points,
                                double rel_tol) {
  for (const auto& p : points) {
    const complex a = f(p);
    const complex b = f(p.inverse());
    if (std::abs(a - b) > rel_tol * std::max(1.0, std::abs(a)))
      throw DomainError("function is not symmetric under z -> 1/z");
  }
}

/// |D_q C_n - k q^{(1-n)/2} C_{n-1}(.; q beta)| / max(1, |D_q C_n|) with
/// k = 2(1-beta)/(1-q) (classical) or 2(1-beta gamma)^2 / ((1-q)(1-beta) gamma) (bilateral).
inline double dq_action_residual(UltraKind kind, int n, const SpectralPoint& p,
                                 const UltraParams& params, const TruncationPolicy& policy = {}) {
  const QBase& base = params.q;
  const complex q = base.value();
  const complex b = params.beta;
  const complex g = params.gamma;
  const XFunction cn = [&](const SpectralPoint& s) {
    return ultra_cn(kind, n, s, params, policy).value;
  };
  const complex lhs = apply_dq(cn, p, base);

  UltraParams shifted = params;
  shifted.beta = q * b;
  const complex k = kind == UltraKind::classical
                        ? 2.0 * (1.0 - b) / (1.0 - q)
                        : 2.0 * (1.0 - b * g) * (1.0 - b * g) / ((1.0 - q) * (1.0 - b) * g);
  const complex rhs =
      k * qpow(std::sqrt(q), 1 - n) * ultra_cn(kind, n - 1, p, shifted, policy).value;
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

}  // namespace qultra
