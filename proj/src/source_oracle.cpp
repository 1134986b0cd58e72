#include "fracspec/source_oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace fracspec {

namespace {

AnalyticFunction1D square_of(const AnalyticFunction1D& f) {
  return AnalyticFunction1D{
      [f](double x) { return f.value(x) * f.value(x); },
      [f](double x) { return 2.0 * f.value(x) * f.d1(x); },
      [f](double x) { return 2.0 * (f.d1(x) * f.d1(x) + f.value(x) * f.d2(x)); }};
}

std::map<std::string, ManufacturedCase> build_catalog() {
  std::map<std::string, ManufacturedCase> cat;

  auto quad_t = [](double t) { return t * t + 1.0; };
  auto quad_dt = [](double t) { return 2.0 * t; };

  {
    ManufacturedCase c;
    c.key = "ex1";
    c.dim = 1;
    c.m = 1;
    c.tf = quad_t;
    c.dtf = quad_dt;
    c.phi = {[](double x) { return std::cos(M_PI * x) + 1.0; },
             [](double x) { return -M_PI * std::sin(M_PI * x); },
             [](double x) { return -M_PI * M_PI * std::cos(M_PI * x); }};
    c.phi_m = c.phi;
    cat[c.key] = c;
  }
  {
    ManufacturedCase c;
    c.key = "ex2";
    c.dim = 1;
    c.m = 1;
    c.tf = [](double t) { return std::exp(0.5 * t); };
    c.dtf = [](double t) { return 0.5 * std::exp(0.5 * t); };
    c.phi = {[](double x) { return std::sin(x); },
             [](double x) { return std::cos(x); },
             [](double x) { return -std::sin(x); }};
    c.phi_m = c.phi;
    c.bc_a1 = 1.0;
    c.bc_b1 = 1.0;
    c.bc_a2 = 1.0;
    c.bc_b2 = 1.0;
    cat[c.key] = c;
  }
  {
    ManufacturedCase c;
    c.key = "ex3";
    c.dim = 2;
    c.m = 1;
    c.tf = quad_t;
    c.dtf = quad_dt;
    c.phi = {[](double x) { return std::exp(x * x); },
             [](double x) { return 2.0 * x * std::exp(x * x); },
             [](double x) { return (2.0 + 4.0 * x * x) * std::exp(x * x); }};
    c.phi_m = c.phi;
    cat[c.key] = c;
  }
  {
    ManufacturedCase c;
    c.key = "ex4";
    c.dim = 1;
    c.m = 1;
    c.has_exact = false;
    c.zero_source = true;
    c.tf = [](double) { return 1.0; };
    c.dtf = [](double) { return 0.0; };
    c.phi = {[](double x) { return std::sin(M_PI * (x + 1.0) / 2.0); },
             [](double x) { return 0.5 * M_PI * std::cos(M_PI * (x + 1.0) / 2.0); },
             [](double x) {
               return -0.25 * M_PI * M_PI * std::sin(M_PI * (x + 1.0) / 2.0);
             }};
    c.phi_m = c.phi;
    cat[c.key] = c;
  }
  {
    ManufacturedCase c;
    c.key = "ex5";
    c.dim = 2;
    c.m = 2;
    c.tf = quad_t;
    c.dtf = quad_dt;
    c.phi = {[](double x) { return std::exp(x * x); },
             [](double x) { return 2.0 * x * std::exp(x * x); },
             [](double x) { return (2.0 + 4.0 * x * x) * std::exp(x * x); }};
    c.phi_m = square_of(c.phi);
    cat[c.key] = c;
  }
  {
    // polynomial entry: exactly representable on any grid of degree >= 4,
    // used by the oracle-vs-matrix cross checks
    ManufacturedCase c;
    c.key = "poly4";
    c.dim = 1;
    c.m = 1;
    c.tf = quad_t;
    c.dtf = quad_dt;
    c.phi = {[](double x) { return (1.0 - x * x) * (1.0 - x * x); },
             [](double x) { return -4.0 * x * (1.0 - x * x); },
             [](double x) { return 12.0 * x * x - 4.0; }};
    c.phi_m = c.phi;
    cat[c.key] = c;
  }
  return cat;
}

const std::map<std::string, ManufacturedCase>& catalog() {
  static const std::map<std::string, ManufacturedCase> cat = build_catalog();
  return cat;
}

}  // namespace

const ManufacturedCase& example_case(const std::string& key) {
  auto it = catalog().find(key);
  if (it == catalog().end())
    throw std::invalid_argument("example_case: unknown catalog key '" + key + "'");
  return it->second;
}

std::vector<std::string> example_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : catalog()) keys.push_back(k);
  return keys;
}

double exact_value_1d(const ManufacturedCase& c, double x, double t) {
  if (!c.has_exact)
    throw std::invalid_argument("exact_value_1d: case has no exact solution");
  return c.tf(t) * c.phi.value(x);
}

double exact_value_2d(const ManufacturedCase& c, double x, double y, double t) {
  if (!c.has_exact)
    throw std::invalid_argument("exact_value_2d: case has no exact solution");
  return c.tf(t) * c.phi.value(x) * c.phi.value(y);
}

double initial_value_1d(const ManufacturedCase& c, double x) {
  return c.tf(0.0) * c.phi.value(x);
}

double initial_value_2d(const ManufacturedCase& c, double x, double y) {
  return c.tf(0.0) * c.phi.value(x) * c.phi.value(y);
}

double rl_deriv_analytic_monomial(double gamma_exp, double alpha, Side side,
                                  double a, double b, double x) {
  if (!(gamma_exp > -1.0))
    throw std::invalid_argument("rl_deriv_analytic_monomial: need gamma_exp > -1");
  double base = side == Side::Left ? x - a : b - x;
  double ratio = gamma_fn(gamma_exp + 1.0) / gamma_fn(gamma_exp + 1.0 - alpha);
  return ratio * std::pow(base, gamma_exp - alpha);
}

double caputo_deriv_analytic_monomial(double gamma_exp, double alpha, Side side,
                                      double a, double b, double x) {
  int n_ceil = static_cast<int>(std::ceil(alpha));
  if (gamma_exp == std::floor(gamma_exp) && gamma_exp < n_ceil) return 0.0;
  if (gamma_exp < n_ceil)
    throw std::invalid_argument(
        "caputo_deriv_analytic_monomial: non-integer gamma_exp below ceil(alpha)");
  double base = side == Side::Left ? x - a : b - x;
  double ratio = gamma_fn(gamma_exp + 1.0) / gamma_fn(gamma_exp + 1.0 - alpha);
  return ratio * std::pow(base, gamma_exp - alpha);
}

double rl_deriv_quadrature(const AnalyticFunction1D& v, double alpha, Side side,
                           double a, double b, double x, int quad_order) {
  if (!(x > a && x < b))
    throw std::invalid_argument("rl_deriv_quadrature: x must be strictly interior");
  if (!(alpha > 0.0) || alpha == std::floor(alpha))
    throw std::invalid_argument("rl_deriv_quadrature: alpha must be positive non-integer");
  if (quad_order < 1)
    throw std::invalid_argument("rl_deriv_quadrature: quadrature order must be >= 1");
  const int n = static_cast<int>(std::ceil(alpha));
  if (n > 2)
    throw std::invalid_argument("rl_deriv_quadrature: orders above 2 unsupported");

  const bool left = side == Side::Left;
  const double dist = left ? x - a : b - x;
  const double endpoint = left ? a : b;

  // boundary series sum_{k<n} (+-1)^k v^(k)(endpoint) dist^(k-alpha)/Gamma(k+1-alpha)
  double series = v.value(endpoint) * std::pow(dist, -alpha) / gamma_fn(1.0 - alpha);
  if (n == 2) {
    double d1 = v.d1(endpoint);
    double term = d1 * std::pow(dist, 1.0 - alpha) / gamma_fn(2.0 - alpha);
    series += left ? term : -term;
  }

  // regularized integral of v^(n) against the kernel, mapped to (-1,1)
  QuadRule rule = left ? gauss_jacobi_rule(n - alpha - 1.0, 0.0, quad_order)
                       : gauss_jacobi_rule(0.0, n - alpha - 1.0, quad_order);
  double mid = left ? 0.5 * (x + a) : 0.5 * (x + b);
  double half = left ? 0.5 * (x - a) : 0.5 * (b - x);
  double integral = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    double xi = mid + half * rule.nodes[i];
    double deriv = (n == 2) ? v.d2(xi) : v.d1(xi);
    integral += rule.weights[i] * deriv;
  }
  integral *= std::pow(half, n - alpha);
  double sign = (!left && n % 2 != 0) ? -1.0 : 1.0;
  return series + sign * integral / gamma_fn(n - alpha);
}

namespace {

int default_quad(const CollocationGrid& grid, int requested) {
  return requested > 0 ? requested : 2 * grid.n + 8;
}

}  // namespace

SourceEvaluator::SourceEvaluator(const ManufacturedCase& c,
                                 const CollocationGrid& grid,
                                 const SourceParams& params, int quad_order)
    : case_(&c), grid_(&grid), params_(params) {
  if (c.zero_source) return;
  const int n = grid.n;
  const int mq = default_quad(grid, quad_order);
  phi_.resize(n + 1);
  dphi_.resize(n + 1);
  phi_m_.resize(n + 1);
  frac_phi_m_.resize(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double x = grid.points[j];
    phi_[j] = c.phi.value(x);
    dphi_[j] = c.phi.d1(x);
    phi_m_[j] = c.phi_m.value(x);
    if (j == 0 || j == n) continue;  // sources are sampled at interior points
    double fr = 0.0;
    if (params.p != 0.0)
      fr += params.p * rl_deriv_quadrature(c.phi_m, params.alpha, Side::Left,
                                           grid.a, grid.b, x, mq);
    if (params.q != 0.0)
      fr += params.q * rl_deriv_quadrature(c.phi_m, params.alpha, Side::Right,
                                           grid.a, grid.b, x, mq);
    frac_phi_m_[j] = fr;
  }
}

std::vector<double> SourceEvaluator::interior(double t) const {
  const int n = grid_->n;
  const ManufacturedCase& c = *case_;
  if (c.dim == 1) {
    std::vector<double> out(n - 1, 0.0);
    if (c.zero_source) return out;
    double ft = c.tf(t), dft = c.dtf(t);
    double ftm = std::pow(ft, c.m);
    for (int j = 1; j < n; ++j)
      out[j - 1] = dft * phi_[j] - params_.kappa * ftm * frac_phi_m_[j] +
                   params_.nu * ft * dphi_[j];
    return out;
  }
  std::vector<double> out((n - 1) * static_cast<size_t>(n - 1), 0.0);
  if (c.zero_source) return out;
  double ft = c.tf(t), dft = c.dtf(t);
  double ftm = std::pow(ft, c.m);
  for (int s = 1; s < n; ++s)
    for (int r = 1; r < n; ++r) {
      double u_t = dft * phi_[r] * phi_[s];
      double frac = ftm * (frac_phi_m_[r] * phi_m_[s] + phi_m_[r] * frac_phi_m_[s]);
      double adv = ft * (dphi_[r] * phi_[s] + phi_[r] * dphi_[s]);
      out[(s - 1) * (n - 1) + (r - 1)] =
          u_t - params_.kappa * frac + params_.nu * adv;
    }
  return out;
}

std::vector<double> manufactured_source(const ManufacturedCase& c,
                                        const SourceParams& params,
                                        const CollocationGrid& grid, double t,
                                        int quad_order) {
  return SourceEvaluator(c, grid, params, quad_order).interior(t);
}

}  // namespace fracspec
