#pragma once

// The q-ultraspherical weight on [-1, 1], periodic trapezoid quadrature in
// theta (x = cos theta), Laurent coefficients on circles, and the integral
// evaluations built on them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "qultra/hyperseries.hpp"
#include "qultra/qcore.hpp"
#include "qultra/ultraspherical.hpp"

namespace qultra {

struct WeightParams {
  double beta = 0.0;
  QBase q{0.5};

  /// Positive-measure window -1 < beta < q^{-1/2} for real 0 < q < 1.
  void validate() const {
    const double qr = q.real_value();
    if (!(beta > -1.0) || !(beta < 1.0 / std::sqrt(qr)))
      throw DomainError("weight parameter beta outside -1 < beta < q^{-1/2}");
  }
};

struct QuadratureResult {
  complex value;
  int nodes_used = 0;
  double last_refinement_delta = 0.0;
};

struct QuadratureMany {
  std::vector<complex> values;
  int nodes_used = 0;
  double last_refinement_delta = 0.0;
};

inline constexpr int kMinNodes = 64;
inline constexpr int kMaxNodes = 1 << 20;

/// (e^{2i theta}, e^{-2i theta}; q)_inf / (beta e^{2i theta}, beta e^{-2i theta}; q)_inf,
/// the weight without its 1/sqrt(1 - x^2) factor.
inline double weight_core(double theta, const WeightParams& w,
                          const TruncationPolicy& policy = {}) {
  if (w.beta == 1.0) return 1.0;
  const SpectralPoint e2 = SpectralPoint::from_theta(2.0 * theta);
  const complex num = poch_pm(1.0, e2, w.q, policy);
  if (num == complex(0.0, 0.0)) return 0.0;
  const complex v = num / poch_pm(w.beta, e2, w.q, policy);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
    throw NumericalError("weight_core: conjugate-pair product is not real");
  return v.real();
}

/// Full weight including 1/sqrt(1 - x^2), x = cos theta, theta in (0, pi).
inline double weight_value(double theta, const WeightParams& w,
                           const TruncationPolicy& policy = {}) {
  w.validate();
  if (!(theta > 0.0) || !(theta < std::numbers::pi))
    throw DomainError("weight_value needs 0 < theta < pi");
  return weight_core(theta, w, policy) / std::sin(theta);
}

/// (1/2pi) int_{-1}^{1} f(x) w(x) dx for a vector of integrands, as
/// (1/2pi) int_0^pi f(cos theta) weight_core(theta) dtheta by the trapezoid rule in theta
/// with node doubling until successive values differ by less than tol.
template <class F>
QuadratureMany integrate_many(F&& f, const WeightParams& w, double tol,
                              const TruncationPolicy& policy = {}) {
  w.validate();
  if (!(tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  const double pi = std::numbers::pi;
  std::size_t size = 0;
  auto sample = [&](double theta) {
    const double core = weight_core(theta, w, policy);
    std::vector<complex> v;
    if (core == 0.0) {
      v.assign(size, complex(0.0, 0.0));
      return v;
    }
    v = f(SpectralPoint::from_theta(theta));
    if (size == 0) size = v.size();
    if (v.size() != size) throw NumericalError("integrate_many: integrand size changed");
    for (auto& c : v) c = require_finite(c * core, "integrate");
    return v;
  };
  auto accumulate = [&](std::vector<complex>& acc, const std::vector<complex>& v, double s) {
    if (acc.size() < v.size()) acc.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += s * v[i];
  };

  // Interior midpoint-of-interval samples are evaluated first so the integrand size is known.
  int n = 16;
  std::vector<complex> interior;
  for (int i = 1; i < n; ++i) accumulate(interior, sample(i * pi / n), 1.0);
  std::vector<complex> ends;
  accumulate(ends, sample(0.0), 0.5);
  accumulate(ends, sample(pi), 0.5);
  if (interior.size() < size) interior.resize(size);
  if (ends.size() < size) ends.resize(size);

  auto estimate = [&](int nodes) {
    std::vector<complex> out(size);
    for (std::size_t i = 0; i < size; ++i)
      out[i] = (ends[i] + interior[i]) * (pi / nodes) / (2.0 * pi);
    return out;
  };
  std::vector<complex> prev = estimate(n);
  for (;;) {
    if (2 * n > kMaxNodes) throw NonConvergence("integrate: node budget exhausted");
    for (int i = 0; i < n; ++i) accumulate(interior, sample((2 * i + 1) * pi / (2 * n)), 1.0);
    n *= 2;
    std::vector<complex> cur = estimate(n);
    double delta = 0.0;
    for (std::size_t i = 0; i < size; ++i) delta = std::max(delta, std::abs(cur[i] - prev[i]));
    if (n >= kMinNodes && delta < tol) return {std::move(cur), n + 1, delta};
    prev = std::move(cur);
  }
}

/// Scalar form of integrate_many.
template <class F>
QuadratureResult integrate(F&& f, const WeightParams& w, double tol,
                           const TruncationPolicy& policy = {}) {
  auto r = integrate_many(
      [&](const SpectralPoint& p) { return std::vector<complex>{f(p)}; }, w, tol, policy);
  return {r.values.empty() ? complex(0.0, 0.0) : r.values[0], r.nodes_used,
          r.last_refinement_delta};
}

struct LaurentResult {
  std::vector<complex> coefficients;  // indices nmin..nmax
  int samples_used = 0;
};

/// Coefficients c_n, nmin <= n <= nmax, of f(t) = sum c_n t^n on the circle |t| = radius by
/// uniform 2^j-point sampling, doubling until two sizes agree to tol * max(1, |c_n|).
inline LaurentResult laurent_coefficients(const std::function<complex(complex)>& f,
                                          double radius, int nmin, int nmax,
                                          double tol = 1e-9) {
  if (nmin > nmax || !(radius > 0.0)) throw DomainError("laurent_coefficients: bad arguments");
  const double pi = std::numbers::pi;
  std::vector<complex> vals;
  auto coeffs = [&](int m) {
    std::vector<complex> c;
    for (int n = nmin; n <= nmax; ++n) {
      CompensatedSum s;
      for (int j = 0; j < m; ++j) s.add(vals[j] * std::polar(1.0, -2.0 * pi * j * n / m));
      c.push_back(s.value() / static_cast<double>(m) * std::pow(radius, -n));
    }
    return c;
  };
  int m = 16;
  for (int j = 0; j < m; ++j) vals.push_back(f(std::polar(radius, 2.0 * pi * j / m)));
  std::vector<complex> prev = coeffs(m);
  for (;;) {
    if (2 * m > kMaxNodes) throw NonConvergence("laurent_coefficients: sample budget exhausted");
    std::vector<complex> next(2 * m);
    for (int j = 0; j < m; ++j) {
      next[2 * j] = vals[j];
      next[2 * j + 1] = f(std::polar(radius, 2.0 * pi * (2 * j + 1) / (2 * m)));
    }
    vals = std::move(next);
    m *= 2;
    std::vector<complex> cur = coeffs(m);
    bool ok = true;
    for (std::size_t i = 0; i < cur.size(); ++i)
      ok = ok && std::abs(cur[i] - prev[i]) <= tol * std::max(1.0, std::abs(cur[i]));
    if (ok) return {std::move(cur), m};
    prev = std::move(cur);
  }
}

namespace detail {

/// The integral identities below hold for the absolutely continuous weight only when |beta| < 1.
inline void require_identity_window(const WeightParams& w) {
  w.validate();
  if (!(std::abs(w.beta) < 1.0))
    throw DomainError("integral identity needs |beta| < 1 (the weight gains point masses)");
}

inline complex kernel_norm(double beta, const QBase& q, const TruncationPolicy& policy) {
  const complex b = beta;
  return poch_multi({b, q.value() * b}, q, infinity, policy) /
         poch_multi({q.value(), b * b}, q, infinity, policy);
}

/// 2phi1(beta^2, beta; q beta; q, arg).
inline complex kernel_phi(double beta, const QBase& q, complex arg,
                          const TruncationPolicy& policy) {
  const complex b = beta;
  return eval_phi({SeriesKind::unilateral, {b * b, b}, {q.value() * b}, q, arg}, policy).value;
}

}  // namespace detail

/// (1/2pi) int C_m C_n w dx for the classical polynomials C(x; beta | q).
inline QuadratureResult orthogonality_entry(int m, int n, const WeightParams& w, double tol,
                                            const TruncationPolicy& policy = {}) {
  if (m < 0 || n < 0) throw DomainError("orthogonality_entry needs m, n >= 0");
  detail::require_identity_window(w);
  return integrate(
      [&](const SpectralPoint& p) {
        return classical_cn(m, p, w.beta, w.q) * classical_cn(n, p, w.beta, w.q);
      },
      w, tol, policy);
}

/// Gram matrix of C_0..C_{size-1}, row-major.
inline QuadratureMany orthogonality_gram(int size, const WeightParams& w, double tol,
                                         const TruncationPolicy& policy = {}) {
  detail::require_identity_window(w);
  return integrate_many(
      [&](const SpectralPoint& p) {
        std::vector<complex> c(size);
        for (int i = 0; i < size; ++i) c[i] = classical_cn(i, p, w.beta, w.q);
        std::vector<complex> out(static_cast<std::size_t>(size) * size);
        for (int i = 0; i < size; ++i)
          for (int j = 0; j < size; ++j) out[i * size + j] = c[i] * c[j];
        return out;
      },
      w, tol, policy);
}

/// (beta, q beta; q)_inf / (q, beta^2; q)_inf (beta^2; q)_n / (q; q)_n (1 - beta)/(1 - beta q^n).
inline complex orthogonality_norm(int n, const WeightParams& w,
                                  const TruncationPolicy& policy = {}) {
  const complex b = w.beta;
  const complex q = w.q.value();
  return require_finite(detail::kernel_norm(w.beta, w.q, policy) * poch(b * b, w.q, n) /
                            poch(q, w.q, n) * (1.0 - b) / (1.0 - b * qpow(q, n)),
                        "orthogonality_norm");
}

/// (1/2pi) int (beta t1 z^{+-1}, beta t2 z^{+-1}; q)_inf / (t1 z^{+-1}, t2 z^{+-1}; q)_inf w dx.
inline QuadratureResult kernel_integral(complex t1, complex t2, const WeightParams& w,
                                        double tol, const TruncationPolicy& policy = {}) {
  if (!(std::abs(t1) < 1.0) || !(std::abs(t2) < 1.0))
    throw RegionError("kernel_integral needs |t1| < 1 and |t2| < 1");
  detail::require_identity_window(w);
  const complex b = w.beta;
  return integrate(
      [&](const SpectralPoint& p) {
        return poch_pm(b * t1, p, w.q, policy) * poch_pm(b * t2, p, w.q, policy) /
               (poch_pm(t1, p, w.q, policy) * poch_pm(t2, p, w.q, policy));
      },
      w, tol, policy);
}

/// (beta, q beta; q)_inf / (q, beta^2; q)_inf 2phi1(beta^2, beta; q beta; q, t1 t2).
inline complex kernel_rhs(complex t1, complex t2, const WeightParams& w,
                          const TruncationPolicy& policy = {}) {
  if (!(std::abs(t1) < 1.0) || !(std::abs(t2) < 1.0))
    throw RegionError("kernel_rhs needs |t1| < 1 and |t2| < 1");
  return require_finite(
      detail::kernel_norm(w.beta, w.q, policy) * detail::kernel_phi(w.beta, w.q, t1 * t2, policy),
      "kernel_rhs");
}

/// Parameter pair (beta', gamma') of the bilateral function integrated in the delta identity.
enum class DeltaForm {
  squared,  // (beta^2, 1/beta)
  literal   // (q^2 beta^2, 1/beta)
};

inline UltraParams delta_params(double beta, const QBase& q, DeltaForm form) {
  const complex b = beta;
  const complex qq = q.value() * q.value();
  return {form == DeltaForm::squared ? b * b : qq * b * b, 1.0 / b, q};
}

/// (1/2pi) int C_n(x; beta', 1/beta | q) w(x | beta) dx.
inline QuadratureResult bilateral_delta_integral(int n, double beta, const QBase& q, double tol,
                                                 const TruncationPolicy& policy = {},
                                                 DeltaForm form = DeltaForm::squared) {
  const WeightParams w{beta, q};
  detail::require_identity_window(w);
  const UltraParams params = delta_params(beta, q, form);
  if (!(std::abs(q.value() / params.beta) < 1.0))
    throw RegionError("bilateral_delta_integral: |q/beta'| must be < 1 on the unit circle");
  return integrate([&](const SpectralPoint& p) { return bilateral_value(n, p, params, policy); },
                   w, tol, policy);
}

/// (q;q)^2_inf (beta, q/beta^2; q)_inf / ((q/beta;q)^3_inf (beta^2;q)_inf).
inline complex delta_rhs(double beta, const QBase& base, const TruncationPolicy& policy = {}) {
  const complex b = beta;
  const complex q = base.value();
  const complex qq = poch(q, base, infinity, policy);
  const complex qb = poch(q / b, base, infinity, policy);
  return require_finite(qq * qq * poch_multi({b, q / (b * b)}, base, infinity, policy) /
                            (qb * qb * qb * poch(b * b, base, infinity, policy)),
                        "delta_rhs");
}

struct ShiftedMatrix {
  std::vector<int> indices;
  std::vector<complex> lhs;  // row-major over indices x indices
  int nodes_used = 0;
  int max_shells = 0;
  double last_refinement_delta = 0.0;
};

namespace detail {

inline void check_shifted_region(const UltraParams& params) {
  const complex q = params.q.value();
  const complex b = params.beta;
  const complex g = params.gamma;
  if (b.imag() != 0.0) throw DomainError("shifted orthogonality needs real beta");
  if (!(std::abs(q / (b * b * g)) < 1.0))
    throw RegionError("shifted orthogonality needs |q/(beta^2 gamma)| < 1");
  if (!(std::abs(q * g) < 1.0)) throw RegionError("shifted orthogonality needs |q gamma| < 1");
  if (!(std::abs(q / b) < 1.0)) throw RegionError("shifted orthogonality needs |q/beta| < 1");
}

}  // namespace detail

/// lhs[m][n] = (1/2pi) int sum_k C_{m+k} C_{n+k} (q/(beta^2 gamma))^k w(x | beta) dx for every
/// pair of the given indices. At each node the k-sum grows shell by shell (k = +-K) until
/// tail_window consecutive shells fall below rel_tol of the largest partial sum, then adds
/// extra_shells more.
inline ShiftedMatrix shifted_orthogonality_matrix(const std::vector<int>& indices,
                                                  const UltraParams& params, double tol,
                                                  const TruncationPolicy& policy = {},
                                                  int extra_shells = 2) {
  if (indices.empty()) throw DomainError("shifted orthogonality needs at least one index");
  detail::check_shifted_region(params);
  const WeightParams w{params.beta.real(), params.q};
  detail::require_identity_window(w);
  const complex ratio = params.q.value() / (params.beta * params.beta * params.gamma);
  const int lo = *std::min_element(indices.begin(), indices.end());
  const int hi = *std::max_element(indices.begin(), indices.end());
  const std::size_t size = indices.size();
  int max_shells = 0;

  auto integrand = [&](const SpectralPoint& p) {
    // Cache of C_j for j in [lo - K, hi + K], grown as K increases.
    std::vector<complex> below;  // C_{lo-1}, C_{lo-2}, ...
    std::vector<complex> core;   // C_lo .. C_hi
    std::vector<complex> above;  // C_{hi+1}, C_{hi+2}, ...
    for (int j = lo; j <= hi; ++j) core.push_back(bilateral_value(j, p, params, policy));
    auto value = [&](int j) -> complex {
      if (j < lo) {
        while (static_cast<int>(below.size()) < lo - j)
          below.push_back(bilateral_value(lo - 1 - static_cast<int>(below.size()), p, params, policy));
        return below[lo - j - 1];
      }
      if (j > hi) {
        while (static_cast<int>(above.size()) < j - hi)
          above.push_back(bilateral_value(hi + 1 + static_cast<int>(above.size()), p, params, policy));
        return above[j - hi - 1];
      }
      return core[j - lo];
    };
    std::vector<CompensatedSum> sums(size * size);
    double biggest = 0.0;
    int quiet = 0;
    int extra = -1;
    for (int k = 0;; ++k) {
      if (k >= policy.max_terms)
        throw NonConvergence("shifted orthogonality: k-shells exceeded max_terms");
      double shell = 0.0;
      for (int sgn : {1, -1}) {
        if (k == 0 && sgn == -1) continue;
        const int kk = sgn * k;
        const complex rk = qpow(ratio, kk);
        for (std::size_t a = 0; a < size; ++a) {
          const complex ca = value(indices[a] + kk);
          for (std::size_t b = 0; b < size; ++b) {
            const complex term = ca * value(indices[b] + kk) * rk;
            sums[a * size + b].add(term);
            shell = std::max(shell, std::abs(term));
          }
        }
      }
      for (const auto& s : sums) biggest = std::max(biggest, std::abs(s.value()));
      if (extra >= 0) {
        if (++extra > extra_shells) {
          max_shells = std::max(max_shells, k);
          break;
        }
        continue;
      }
      if (shell <= policy.rel_tol * biggest + policy.abs_tol) {
        if (++quiet >= policy.tail_window) extra = 0;
      } else {
        quiet = 0;
      }
    }
    std::vector<complex> out(size * size);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sums[i].value();
    return out;
  };

  auto r = integrate_many(integrand, w, tol, policy);
  return {indices, std::move(r.values), r.nodes_used, max_shells, r.last_refinement_delta};
}

/// (q;q)^3 (q/beta;q)^4 (beta, q beta;q) / ((q gamma, q/(beta gamma);q)^4 (beta^2;q))
///   2phi1(beta^2, beta; q beta; q, q/(beta^2 gamma)) (beta^2 gamma/q)^n, all products infinite.
inline complex shifted_rhs(int n, const UltraParams& params, const TruncationPolicy& policy = {}) {
  detail::check_shifted_region(params);
  const QBase& base = params.q;
  const complex q = base.value();
  const complex b = params.beta;
  const complex g = params.gamma;
  const auto inf = [&](complex a) { return poch(a, base, infinity, policy); };
  const complex qq = inf(q);
  const complex qb = inf(q / b);
  const complex den = inf(q * g) * inf(q / (b * g));
  const complex head = qq * qq * qq * (qb * qb) * (qb * qb) * inf(b) * inf(q * b) /
                       ((den * den) * (den * den) * inf(b * b));
  const complex phi =
      detail::kernel_phi(b.real(), base, q / (b * b * g), policy);
  return require_finite(head * phi * qpow(b * b * g / q, n), "shifted_rhs");
}

struct ShiftedPair {
  complex lhs;
  complex rhs;
  int nodes_used = 0;
  int max_shells = 0;
};

/// Left side for (m, n) and the closed right side (zero off the diagonal).
inline ShiftedPair shifted_orthogonality_pair(int m, int n, const UltraParams& params, double tol,
                                              const TruncationPolicy& policy = {}) {
  const auto mat = shifted_orthogonality_matrix(m == n ? std::vector<int>{m} : std::vector<int>{m, n},
                                                params, tol, policy);
  const complex lhs = m == n ? mat.lhs[0] : mat.lhs[1];
  const complex rhs = m == n ? shifted_rhs(n, params, policy) : complex(0.0, 0.0);
  return {lhs, rhs, mat.nodes_used, mat.max_shells};
}

}  // namespace qultra
