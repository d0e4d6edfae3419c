#pragma once

// Named identity checks, their configuration, and the JSON/CSV report.

#include <algorithm>
#include <cerrno>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qultra/awoperator.hpp"
#include "qultra/hyperseries.hpp"
#include "qultra/quadrature.hpp"
#include "qultra/ultraspherical.hpp"

namespace qultra {

inline constexpr const char* kSuiteVersion = "1.0";

struct SuiteConfig {
  double q = 0.3;
  double beta = 0.8;
  double gamma = 0.7;
  complex t{0.6, 0.0};
  double wide_beta = 1.5;  // beta > 1 for the checks that need |q/beta| < 1 at |z|^2 = q^{+-1}
  double quad_tol = 1e-10;
  std::uint64_t seed = 20240601;
  std::vector<double> thetas{0.4, 1.0, 2.2};
  TruncationPolicy policy;
};

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw ConfigError("config key '" + key + "': not a finite number: '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError("config key '" + key + "': not an integer: '" + text + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Flat "key = value" text, one pair per line, '#' starts a comment.
inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Builds a SuiteConfig from defaults overridden by the map; rejects unknown keys.
inline SuiteConfig make_config(const ConfigMap& m) {
  SuiteConfig c;
  for (const auto& [key, value] : m) {
    if (key == "q") c.q = detail::parse_double(key, value);
    else if (key == "beta") c.beta = detail::parse_double(key, value);
    else if (key == "gamma") c.gamma = detail::parse_double(key, value);
    else if (key == "t" || key == "t_re") c.t.real(detail::parse_double(key, value));
    else if (key == "t_im") c.t.imag(detail::parse_double(key, value));
    else if (key == "wide_beta") c.wide_beta = detail::parse_double(key, value);
    else if (key == "quad_tol") c.quad_tol = detail::parse_double(key, value);
    else if (key == "rel_tol") c.policy.rel_tol = detail::parse_double(key, value);
    else if (key == "abs_tol") c.policy.abs_tol = detail::parse_double(key, value);
    else if (key == "max_terms") c.policy.max_terms = static_cast<int>(detail::parse_integer(key, value));
    else if (key == "tail_window") c.policy.tail_window = static_cast<int>(detail::parse_integer(key, value));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_integer(key, value));
    else if (key == "thetas") {
      c.thetas.clear();
      std::istringstream in(value);
      std::string item;
      while (std::getline(in, item, ',')) c.thetas.push_back(detail::parse_double(key, detail::trim(item)));
      if (c.thetas.empty()) throw ConfigError("config key 'thetas': empty list");
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  c.policy.validate();
  if (!(c.quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
  if (!(std::abs(c.q) > 0.0 && std::abs(c.q) < 1.0)) throw ConfigError("q must satisfy 0 < |q| < 1");
  return c;
}

using ParamMap = std::map<std::string, double>;

struct ReportEntry {
  std::string identity_name;
  ParamMap params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  int terms_used = 0;
  int nodes_used = 0;
};

struct SkippedEntry {
  std::string identity_name;
  ParamMap params;
  std::string reason;
};

struct ErrorEntry {
  std::string identity_name;
  ParamMap params;
  std::string message;
};

struct VerificationReport {
  std::string suite_version = kSuiteVersion;
  std::vector<ReportEntry> entries;
  std::vector<SkippedEntry> skipped;
  std::vector<ErrorEntry> errors;
  bool overall_passed = false;
};

/// Outcome of one check: residual plus the work it took.
struct CheckValue {
  double residual = 0.0;
  int terms = 0;
  int nodes = 0;

  void merge(const CheckValue& o) {
    residual = std::max(residual, o.residual);
    terms += o.terms;
    nodes = std::max(nodes, o.nodes);
  }
};

struct CheckTask {
  std::string identity_name;
  ParamMap params;
  double tolerance = 0.0;
  std::function<CheckValue()> run;
};

namespace detail {

inline double rel_diff(complex a, complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline std::vector<CheckTask> build_tasks(const SuiteConfig& c) {
  std::vector<CheckTask> tasks;
  const TruncationPolicy pol = c.policy;
  auto base_params = [&] { return ParamMap{{"q", c.q}, {"beta", c.beta}, {"gamma", c.gamma}}; };
  auto ultra = [&](double beta) { return UltraParams{beta, c.gamma, QBase(c.q)}; };

  // Random in-region parameter points, redrawn when a draw lands outside a region.
  auto sampled = [&](const std::string& name, std::uint64_t salt, int count, auto draw, auto check) {
    tasks.push_back({name, {{"q", c.q}, {"seed", static_cast<double>(c.seed)}, {"points", static_cast<double>(count)}},
                     1e-9, [=]() {
                       std::mt19937_64 rng(c.seed ^ salt);
                       CheckValue v;
                       int accepted = 0;
                       for (int tries = 0; accepted < count; ++tries) {
                         if (tries > 50 * count) throw NumericalError(name + ": could not draw in-region points");
                         const auto p = draw(rng);
                         try {
                           v.merge(check(p));
                           ++accepted;
                         } catch (const RegionError&) {
                         } catch (const PoleError&) {
                         }
                       }
                       return v;
                     }});
  };
  auto uni = [](std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const QBase q(c.q);

  sampled("ramanujan_1psi1", 0x1, 20,
          [=](std::mt19937_64& rng) {
            const complex a = std::polar(uni(rng, 0.5, 0.95), uni(rng, -0.5, 0.5));
            const complex b = std::polar(uni(rng, 0.05, 0.4), uni(rng, -0.5, 0.5));
            const double inner = std::abs(b / a);
            const complex z = std::polar(uni(rng, inner + 0.25 * (0.9 - inner), 0.9 - 0.1 * (0.9 - inner)),
                                         uni(rng, -3.0, 3.0));
            return std::vector<complex>{a, b, z};
          },
          [=](const std::vector<complex>& p) {
            const auto lhs = eval_psi(closed_form_lhs("ramanujan_1psi1", p, q), pol);
            const complex rhs = closed_form("ramanujan_1psi1", p, q, pol);
            return CheckValue{std::abs(lhs.value - rhs) / std::max(1.0, std::abs(lhs.value)), lhs.terms, 0};
          });

  for (const std::string name : {"bailey_2psi2_single", "bailey_2psi2_iterated"}) {
    sampled(name, name == "bailey_2psi2_single" ? 0x2 : 0x3, 10,
            [=](std::mt19937_64& rng) {
              return std::vector<complex>{uni(rng, 0.6, 0.95), uni(rng, 0.6, 0.95), uni(rng, 0.05, 0.2),
                                          uni(rng, 0.1, 0.3), uni(rng, 0.3, 0.6)};
            },
            [=](const std::vector<complex>& p) {
              int terms = 0;
              const double r = transform_residual(name, p, q, pol, &terms);
              return CheckValue{r, terms, 0};
            });
  }
  sampled("wellpoised_6psi8", 0x4, 10,
          [=](std::mt19937_64& rng) {
            return std::vector<complex>{uni(rng, 0.3, 0.6), uni(rng, 0.55, 0.95), uni(rng, 0.55, 0.95),
                                        uni(rng, 0.55, 0.95), uni(rng, 0.55, 0.95)};
          },
          [=](const std::vector<complex>& p) {
            int terms = 0;
            const double r = transform_residual("wellpoised_6psi8", p, q, pol, &terms);
            return CheckValue{r, terms, 0};
          });

  for (double theta : c.thetas) {
    const SpectralPoint z = SpectralPoint::from_theta(theta);
    auto at = [&](ParamMap m) {
      m["theta"] = theta;
      return m;
    };

    tasks.push_back({"gamma1_reduction", at({{"q", c.q}, {"beta", c.beta}, {"n_min", 0}, {"n_max", 8}}), 1e-10, [=] {
                       CheckValue v;
                       for (int n = 0; n <= 8; ++n) {
                         const auto b = bilateral_cn(n, z, {c.beta, 1.0, q}, pol);
                         v.merge({rel_diff(b.value, classical_cn(n, z, c.beta, q)), b.truncation_terms, 0});
                       }
                       return v;
                     }});

    tasks.push_back({"bilateral_recurrence", at({{"q", c.q}, {"beta", c.beta}, {"gamma", c.gamma}, {"n_min", -6}, {"n_max", 6}}),
                     1e-10, [=] {
                       CheckValue v;
                       for (int n = -6; n <= 6; ++n)
                         v.merge({recurrence_residual(UltraKind::bilateral, n, z, ultra(c.beta), pol), 0, 0});
                       return v;
                     }});

    tasks.push_back({"bilateral_generating_function",
                     at({{"q", c.q}, {"beta", c.beta}, {"gamma", c.gamma}, {"t_re", c.t.real()}, {"t_im", c.t.imag()}}),
                     1e-8, [=] {
                       const auto s = generating_sum(UltraKind::bilateral, c.t, z, ultra(c.beta), pol);
                       const complex rhs = generating_rhs(UltraKind::bilateral, c.t, z, ultra(c.beta), pol);
                       return CheckValue{std::abs(s.value - rhs) / std::abs(rhs), s.truncation_terms, 0};
                     }});

    tasks.push_back({"bilateral_laurent_coefficients",
                     at({{"q", c.q}, {"beta", c.beta}, {"gamma", c.gamma}, {"radius", std::abs(c.t)}, {"n_min", -4}, {"n_max", 4}}),
                     1e-7, [=] {
                       const UltraParams P = ultra(c.beta);
                       generating_rhs(UltraKind::bilateral, std::abs(c.t), z, P, pol);  // region check
                       const auto lc = laurent_coefficients(
                           [&](complex t) { return generating_rhs(UltraKind::bilateral, t, z, P, pol); },
                           std::abs(c.t), -4, 4);
                       CheckValue v;
                       v.nodes = lc.samples_used;
                       for (int n = -4; n <= 4; ++n)
                         v.merge({rel_diff(lc.coefficients[n + 4], bilateral_value(n, z, P, pol)), 0, 0});
                       return v;
                     }});

    tasks.push_back({"bilateral_symmetry", at({{"q", c.q}, {"beta", c.beta}, {"gamma", c.gamma}, {"n_min", -4}, {"n_max", 4}}),
                     1e-10, [=] {
                       CheckValue v;
                       for (int n = -4; n <= 4; ++n) v.merge({symmetry_residual(n, z, ultra(c.beta), pol), 0, 0});
                       return v;
                     }});

    tasks.push_back({"classical_dq_action", at({{"q", c.q}, {"beta", c.beta}, {"n_min", 1}, {"n_max", 6}}), 1e-10, [=] {
                       CheckValue v;
                       for (int n = 1; n <= 6; ++n)
                         v.merge({dq_action_residual(UltraKind::classical, n, z, ultra(c.beta), pol), 0, 0});
                       return v;
                     }});

    tasks.push_back({"bilateral_dq_action", at({{"q", c.q}, {"beta", c.wide_beta}, {"gamma", c.gamma}, {"n_min", -4}, {"n_max", 4}}),
                     1e-8, [=] {
                       CheckValue v;
                       for (int n = -4; n <= 4; ++n)
                         v.merge({dq_action_residual(UltraKind::bilateral, n, z, ultra(c.wide_beta), pol), 0, 0});
                       return v;
                     }});

    tasks.push_back({"linearization", at({{"q", c.q}, {"beta", c.beta}, {"m_max", 4}, {"n_max", 4}}), 1e-10, [=] {
                       CheckValue v;
                       for (int m = 0; m <= 4; ++m)
                         for (int n = 0; n <= 4; ++n) v.merge({linearization_residual(m, n, z, c.beta, q), 0, 0});
                       return v;
                     }});
  }

  {
    auto m = base_params();
    m["n_min"] = -4;
    m["n_max"] = 4;
    tasks.push_back({"bilateral_constant_terms", m, 1e-9, [=] {
                       const SpectralPoint i(complex(0.0, 1.0));
                       CheckValue v;
                       for (int n = -4; n <= 4; ++n) {
                         const auto b = bilateral_cn(n, i, ultra(c.beta), pol);
                         v.merge({rel_diff(b.value, constant_term(n, ultra(c.beta), pol)), b.truncation_terms, 0});
                       }
                       return v;
                     }});
  }

  tasks.push_back({"special_value_c0", base_params(), 1e-10, [=] {
                     const UltraParams P = ultra(c.beta);
                     const auto b = bilateral_cn(0, special_point_c0(P.q), P, pol);
                     const complex cf = special_value_c0(P, pol);
                     return CheckValue{std::abs(b.value - cf) / std::abs(cf), b.truncation_terms, 0};
                   }});

  {
    auto m = base_params();
    m["beta"] = c.wide_beta;
    tasks.push_back({"special_value_cm1", m, 1e-10, [=] {
                       const UltraParams P = ultra(c.wide_beta);
                       const auto b = bilateral_cn(-1, special_point_cm1(P.q), P, pol);
                       const complex cf = special_value_cm1(P);
                       return CheckValue{std::abs(b.value - cf) / std::abs(cf), b.truncation_terms, 0};
                     }});
  }

  const WeightParams w{c.beta, q};
  const ParamMap wparams{{"q", c.q}, {"beta", c.beta}};
  auto gram = std::make_shared<std::optional<QuadratureMany>>();
  auto get_gram = [=]() -> const QuadratureMany& {
    if (!*gram) *gram = orthogonality_gram(7, w, c.quad_tol, pol);
    return **gram;
  };
  {
    auto m = wparams;
    m["size"] = 7;
    tasks.push_back({"classical_orthogonality_diagonal", m, 1e-8, [=] {
                       const auto& g = get_gram();
                       CheckValue v{0.0, 0, g.nodes_used};
                       for (int n = 0; n < 7; ++n) {
                         const complex norm = orthogonality_norm(n, w, pol);
                         v.merge({std::abs(g.values[n * 7 + n] - norm) / std::abs(norm), 0, 0});
                       }
                       return v;
                     }});
    tasks.push_back({"classical_orthogonality_offdiagonal", m, 1e-9, [=] {
                       const auto& g = get_gram();
                       const double d0 = std::abs(g.values[0]);
                       CheckValue v{0.0, 0, g.nodes_used};
                       for (int i = 0; i < 7; ++i)
                         for (int j = 0; j < 7; ++j)
                           if (i != j) v.merge({std::abs(g.values[i * 7 + j]) / d0, 0, 0});
                       return v;
                     }});
  }
  {
    auto m = wparams;
    m["t1"] = 0.4;
    m["t2"] = -0.25;
    tasks.push_back({"kernel_integral", m, 1e-8, [=] {
                       const auto r = kernel_integral(0.4, -0.25, w, c.quad_tol, pol);
                       const complex rhs = kernel_rhs(0.4, -0.25, w, pol);
                       return CheckValue{std::abs(r.value - rhs) / std::abs(rhs), 0, r.nodes_used};
                     }});
  }
  {
    auto m = wparams;
    m["n_min"] = -3;
    m["n_max"] = 3;
    tasks.push_back({"bilateral_delta_integral", m, 1e-7, [=] {
                       const complex rhs = delta_rhs(c.beta, q, pol);
                       CheckValue v;
                       for (int n = -3; n <= 3; ++n) {
                         const auto r = bilateral_delta_integral(n, c.beta, q, c.quad_tol, pol);
                         v.merge({std::abs(r.value / rhs - (n == 0 ? 1.0 : 0.0)), 0, r.nodes_used});
                       }
                       return v;
                     }});
  }

  auto shifted = std::make_shared<std::optional<ShiftedMatrix>>();
  auto get_shifted = [=]() -> const ShiftedMatrix& {
    if (!*shifted) *shifted = shifted_orthogonality_matrix({-2, -1, 0, 1, 2}, ultra(c.beta), c.quad_tol, pol);
    return **shifted;
  };
  {
    auto m = base_params();
    m["n_min"] = -2;
    m["n_max"] = 2;
    tasks.push_back({"shifted_orthogonality_diagonal", m, 1e-6, [=] {
                       const auto& s = get_shifted();
                       CheckValue v{0.0, s.max_shells, s.nodes_used};
                       for (int i = 0; i < 5; ++i)
                         v.merge({std::abs(s.lhs[i * 5 + i] / shifted_rhs(i - 2, ultra(c.beta), pol) - 1.0), 0, 0});
                       return v;
                     }});
    tasks.push_back({"shifted_orthogonality_offdiagonal", m, 1e-6, [=] {
                       const auto& s = get_shifted();
                       const double r0 = std::abs(shifted_rhs(0, ultra(c.beta), pol));
                       CheckValue v{0.0, s.max_shells, s.nodes_used};
                       for (int i = 0; i < 5; ++i)
                         for (int j = 0; j < 5; ++j)
                           if (i != j) v.merge({std::abs(s.lhs[i * 5 + j]) / r0, 0, 0});
                       return v;
                     }});
    tasks.push_back({"shifted_orthogonality_scaling", m, 1e-6, [=] {
                       const auto& s = get_shifted();
                       const complex ratio = c.beta * c.beta * c.gamma / c.q;
                       const complex l0 = s.lhs[2 * 5 + 2];
                       CheckValue v{0.0, s.max_shells, s.nodes_used};
                       for (int i = 0; i < 5; ++i)
                         v.merge({std::abs(s.lhs[i * 5 + i] / (l0 * qpow(ratio, i - 2)) - 1.0), 0, 0});
                       return v;
                     }});
  }
  return tasks;
}

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const PoleError*>(&e)) return "PoleError";
  if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
  if (dynamic_cast<const SingularPoint*>(&e)) return "SingularPoint";
  if (dynamic_cast<const NumericalError*>(&e)) return "NumericalError";
  if (dynamic_cast<const RegionError*>(&e)) return "RegionError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  return "Error";
}

inline ReportEntry finish(const CheckTask& t, const CheckValue& v) {
  return {t.identity_name, t.params, v.residual, t.tolerance, v.residual <= t.tolerance, v.terms, v.nodes};
}

inline void finalize(VerificationReport& r) {
  const auto key = [](const auto& e) { return std::tie(e.identity_name, e.params); };
  std::sort(r.entries.begin(), r.entries.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(r.skipped.begin(), r.skipped.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(r.errors.begin(), r.errors.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  r.overall_passed = std::all_of(r.entries.begin(), r.entries.end(), [](const auto& e) { return e.passed; });
}

}  // namespace detail

/// Names of every registered identity check.
inline std::vector<std::string> identity_names() {
  std::vector<std::string> names;
  for (const auto& t : detail::build_tasks(SuiteConfig{})) names.push_back(t.identity_name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

/// Runs every check. Region, domain and pole failures become skipped entries;
/// numerical failures become failed entries with an accompanying error record.
inline VerificationReport run_suite(const SuiteConfig& config) {
  VerificationReport report;
  for (const auto& task : detail::build_tasks(config)) {
    try {
      report.entries.push_back(detail::finish(task, task.run()));
    } catch (const PoleError& e) {
      report.skipped.push_back({task.identity_name, task.params, detail::error_kind(e) + ": " + e.what()});
    } catch (const NumericalError& e) {
      report.entries.push_back({task.identity_name, task.params, DBL_MAX, task.tolerance, false, 0, 0});
      report.errors.push_back({task.identity_name, task.params, detail::error_kind(e) + ": " + e.what()});
    } catch (const Error& e) {
      report.skipped.push_back({task.identity_name, task.params, detail::error_kind(e) + ": " + e.what()});
    }
  }
  detail::finalize(report);
  return report;
}

inline VerificationReport run_suite(const ConfigMap& config) { return run_suite(make_config(config)); }

/// Runs the checks of one identity; errors propagate to the caller.
inline VerificationReport run_identity(const std::string& name, const SuiteConfig& config) {
  VerificationReport report;
  for (const auto& task : detail::build_tasks(config))
    if (task.identity_name == name) report.entries.push_back(detail::finish(task, task.run()));
  if (report.entries.empty()) throw ConfigError("unknown identity: " + name);
  detail::finalize(report);
  return report;
}

namespace detail {

inline std::string json_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out + "\"";
}

inline std::string json_params(const ParamMap& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) out += ", ";
    first = false;
    out += json_string(k) + ": " + json_number(v);
  }
  return out + "}";
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace detail

/// Single JSON object, numbers with 17 significant digits, stable key order.
inline std::string to_json(const VerificationReport& r) {
  using detail::json_number;
  using detail::json_params;
  using detail::json_string;
  std::ostringstream out;
  out << "{\n  \"suite_version\": " << json_string(r.suite_version) << ",\n  \"entries\": [";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& e = r.entries[i];
    out << (i ? "," : "") << "\n    {\"identity_name\": " << json_string(e.identity_name)
        << ", \"params\": " << json_params(e.params) << ", \"residual\": " << json_number(e.residual)
        << ", \"tolerance\": " << json_number(e.tolerance)
        << ", \"passed\": " << (e.passed ? "true" : "false") << ", \"terms_used\": " << e.terms_used
        << ", \"nodes_used\": " << e.nodes_used << "}";
  }
  out << (r.entries.empty() ? "]" : "\n  ]") << ",\n  \"skipped\": [";
  for (std::size_t i = 0; i < r.skipped.size(); ++i) {
    const auto& e = r.skipped[i];
    out << (i ? "," : "") << "\n    {\"identity_name\": " << json_string(e.identity_name)
        << ", \"params\": " << json_params(e.params) << ", \"reason\": " << json_string(e.reason) << "}";
  }
  out << (r.skipped.empty() ? "]" : "\n  ]") << ",\n  \"errors\": [";
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    const auto& e = r.errors[i];
    out << (i ? "," : "") << "\n    {\"identity_name\": " << json_string(e.identity_name)
        << ", \"params\": " << json_params(e.params) << ", \"message\": " << json_string(e.message) << "}";
  }
  out << (r.errors.empty() ? "]" : "\n  ]") << ",\n  \"overall_passed\": "
      << (r.overall_passed ? "true" : "false") << "\n}\n";
  return out.str();
}

/// One row per entry: identity_name,params,residual,tolerance,passed,terms_used,nodes_used.
inline std::string to_csv(const VerificationReport& r) {
  std::string out = "identity_name,params,residual,tolerance,passed,terms_used,nodes_used\n";
  for (const auto& e : r.entries) {
    std::string params;
    for (const auto& [k, v] : e.params) params += (params.empty() ? "" : ";") + k + "=" + detail::json_number(v);
    out += detail::csv_field(e.identity_name) + "," + detail::csv_field(params) + "," +
           detail::json_number(e.residual) + "," + detail::json_number(e.tolerance) + "," +
           (e.passed ? "true" : "false") + "," + std::to_string(e.terms_used) + "," +
           std::to_string(e.nodes_used) + "\n";
  }
  return out;
}

}  // namespace qultra
