// Command-line front end: eval, identity, suite, table.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qultra/qultra.hpp"

namespace {

using qultra::complex;

enum Exit { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumerical = 3 };

struct Common {
  std::string config_path;
  std::string format = "json";
  double q = 0, beta = 0, gamma = 0, t_re = 0, t_im = 0, rel_tol = 0, abs_tol = 0, quad_tol = 0;
  int max_terms = 0;
  CLI::Option* q_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* t_re_opt = nullptr;
  CLI::Option* t_im_opt = nullptr;
  CLI::Option* rel_tol_opt = nullptr;
  CLI::Option* abs_tol_opt = nullptr;
  CLI::Option* quad_tol_opt = nullptr;
  CLI::Option* max_terms_opt = nullptr;
};

struct Point {
  double x = 0, theta = 0, z_re = 0, z_im = 0;
  CLI::Option* x_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* z_re_opt = nullptr;
  CLI::Option* z_im_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "flat key = value config file");
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  c.q_opt = app->add_option("--q", c.q, "base q, 0 < |q| < 1");
  c.beta_opt = app->add_option("--beta", c.beta, "beta");
  c.gamma_opt = app->add_option("--gamma", c.gamma, "gamma (1 gives the classical polynomials)");
  c.t_re_opt = app->add_option("--t-re", c.t_re, "generating variable, real part");
  c.t_im_opt = app->add_option("--t-im", c.t_im, "generating variable, imaginary part");
  c.rel_tol_opt = app->add_option("--rel-tol", c.rel_tol, "series relative tolerance");
  c.abs_tol_opt = app->add_option("--abs-tol", c.abs_tol, "series absolute tolerance");
  c.max_terms_opt = app->add_option("--max-terms", c.max_terms, "series term cap");
  c.quad_tol_opt = app->add_option("--quad-tol", c.quad_tol, "quadrature refinement tolerance");
}

void add_point(CLI::App* app, Point& p) {
  p.x_opt = app->add_option("--x", p.x, "x; |x| <= 1 maps to z = x + i sqrt(1 - x^2), else z = x + sqrt(x^2 - 1)");
  p.theta_opt = app->add_option("--theta", p.theta, "angle, z = e^{i theta}");
  p.z_re_opt = app->add_option("--z-re", p.z_re, "z, real part");
  p.z_im_opt = app->add_option("--z-im", p.z_im, "z, imaginary part");
  p.x_opt->excludes(p.theta_opt)->excludes(p.z_re_opt)->excludes(p.z_im_opt);
  p.theta_opt->excludes(p.z_re_opt)->excludes(p.z_im_opt);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

qultra::SuiteConfig build_config(const Common& c) {
  qultra::ConfigMap m;
  if (!c.config_path.empty()) m = qultra::read_config_file(c.config_path);
  auto set = [&](CLI::Option* opt, const char* key, double v) {
    if (opt->count()) m[key] = fmt(v);
  };
  set(c.q_opt, "q", c.q);
  set(c.beta_opt, "beta", c.beta);
  set(c.gamma_opt, "gamma", c.gamma);
  set(c.t_re_opt, "t_re", c.t_re);
  set(c.t_im_opt, "t_im", c.t_im);
  set(c.rel_tol_opt, "rel_tol", c.rel_tol);
  set(c.abs_tol_opt, "abs_tol", c.abs_tol);
  set(c.quad_tol_opt, "quad_tol", c.quad_tol);
  if (c.max_terms_opt->count()) m["max_terms"] = std::to_string(c.max_terms);
  return qultra::make_config(m);
}

bool has_point(const Point& p) {
  return p.x_opt->count() || p.theta_opt->count() || p.z_re_opt->count() || p.z_im_opt->count();
}

qultra::SpectralPoint to_point(const Point& p) {
  if (p.x_opt->count()) return qultra::SpectralPoint::from_x(p.x);
  if (p.theta_opt->count()) return qultra::SpectralPoint::from_theta(p.theta);
  if (p.z_re_opt->count() || p.z_im_opt->count()) return qultra::SpectralPoint(complex(p.z_re, p.z_im));
  throw qultra::ConfigError("one of --x, --theta, --z-re/--z-im is required");
}

qultra::UltraKind parse_kind(const std::string& kind) {
  return kind == "classical" ? qultra::UltraKind::classical : qultra::UltraKind::bilateral;
}

qultra::UltraParams ultra_params(const qultra::SuiteConfig& c, qultra::UltraKind kind) {
  return {c.beta, kind == qultra::UltraKind::classical ? 1.0 : c.gamma, qultra::QBase(c.q)};
}

int emit_report(const qultra::VerificationReport& r, const std::string& format) {
  std::cout << (format == "csv" ? qultra::to_csv(r) : qultra::to_json(r));
  return r.overall_passed ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate two-sided q-ultraspherical functions and verify their identities"};
  app.require_subcommand(1);

  Common eval_common, identity_common, suite_common, table_common;
  Point eval_point, identity_point;
  std::string kind = "bilateral";
  int n = 0;
  int m = 0;
  std::string identity_name;
  int n_min = 0, n_max = 0, theta_steps = 16;
  double theta_min = 0.1, theta_max = 3.0;

  auto* eval = app.add_subcommand("eval", "evaluate one function value");
  add_common(eval, eval_common);
  add_point(eval, eval_point);
  eval->add_option("--kind", kind, "classical or bilateral")->check(CLI::IsMember({"classical", "bilateral"}));
  eval->add_option("--n", n, "degree")->required();
  eval->add_option("--m", m, "unused by eval; accepted for symmetry with identity");

  auto* identity = app.add_subcommand("identity", "run one named identity check");
  add_common(identity, identity_common);
  add_point(identity, identity_point);
  identity->add_option("--name", identity_name, "identity name (see --list)");
  auto* list_flag = identity->add_flag("--list", "print the identity names and exit");
  identity->add_option("--n", n, "accepted for uniformity; ranges are fixed per identity");
  identity->add_option("--m", m, "accepted for uniformity; ranges are fixed per identity");

  auto* suite = app.add_subcommand("suite", "run every identity check and print the report");
  add_common(suite, suite_common);

  auto* table = app.add_subcommand("table", "CSV grid of values over n and theta");
  add_common(table, table_common);
  table->add_option("--kind", kind, "classical or bilateral")->check(CLI::IsMember({"classical", "bilateral"}));
  auto* n_opt = table->add_option("--n", n, "single degree (overrides --n-min/--n-max)");
  table->add_option("--n-min", n_min, "first degree");
  table->add_option("--n-max", n_max, "last degree");
  table->add_option("--theta-min", theta_min, "first angle");
  table->add_option("--theta-max", theta_max, "last angle");
  table->add_option("--theta-steps", theta_steps, "number of angles")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Common& common = eval->parsed()       ? eval_common
                           : identity->parsed() ? identity_common
                           : suite->parsed()    ? suite_common
                                                : table_common;
    const Point& point = eval->parsed() ? eval_point : identity_point;
    const qultra::SuiteConfig config = build_config(common);

    if (eval->parsed()) {
      const auto k = parse_kind(kind);
      const auto p = to_point(point);
      const auto v = qultra::ultra_cn(k, n, p, ultra_params(config, k), config.policy);
      if (common.format == "csv") {
        std::cout << "n,z_re,z_im,re,im,terms\n"
                  << n << "," << fmt(p.z().real()) << "," << fmt(p.z().imag()) << "," << fmt(v.value.real())
                  << "," << fmt(v.value.imag()) << "," << v.truncation_terms << "\n";
      } else {
        std::cout << "{\"kind\": \"" << kind << "\", \"n\": " << n << ", \"z_re\": " << fmt(p.z().real())
                  << ", \"z_im\": " << fmt(p.z().imag()) << ", \"re\": " << fmt(v.value.real())
                  << ", \"im\": " << fmt(v.value.imag()) << ", \"terms\": " << v.truncation_terms << "}\n";
      }
      return kOk;
    }

    if (identity->parsed()) {
      if (list_flag->count()) {
        for (const auto& name : qultra::identity_names()) std::cout << name << "\n";
        return kOk;
      }
      if (identity_name.empty()) throw qultra::ConfigError("identity needs --name or --list");
      qultra::SuiteConfig c = config;
      if (has_point(point)) {
        const complex z = to_point(point).z();
        if (std::abs(std::abs(z) - 1.0) > 1e-12)
          throw qultra::ConfigError("identity checks sample on |z| = 1");
        c.thetas = {std::arg(z)};
      }
      return emit_report(qultra::run_identity(identity_name, c), common.format);
    }

    if (suite->parsed()) return emit_report(qultra::run_suite(config), common.format);

    if (table->parsed()) {
      if (n_opt->count()) n_min = n_max = n;
      if (n_min > n_max) throw qultra::ConfigError("table needs n-min <= n-max");
      const auto k = parse_kind(kind);
      const auto params = ultra_params(config, k);
      std::string out = "n,theta,re,im,terms\n";
      for (int deg = n_min; deg <= n_max; ++deg) {
        for (int i = 0; i < theta_steps; ++i) {
          const double theta =
              theta_steps == 1 ? theta_min : theta_min + (theta_max - theta_min) * i / (theta_steps - 1);
          const auto v = qultra::ultra_cn(k, deg, qultra::SpectralPoint::from_theta(theta), params, config.policy);
          out += std::to_string(deg) + "," + fmt(theta) + "," + fmt(v.value.real()) + "," + fmt(v.value.imag()) +
                 "," + std::to_string(v.truncation_terms) + "\n";
        }
      }
      std::cout << out;
      return kOk;
    }
  } catch (const qultra::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const qultra::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
