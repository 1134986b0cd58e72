#pragma once

#include "fracspec/grids.hpp"
#include "fracspec/numerics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fracspec {

// Scalar function with closed-form first and second derivatives.
struct AnalyticFunction1D {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// A manufactured solution u(x[,y],t) = tf(t) * phi(x) [* phi(y)] together
// with its boundary behaviour.  phi_m is the profile raised to the
// nonlinearity power m with its own derivatives (equal to phi when m = 1).
struct ManufacturedCase {
  std::string key;
  int dim = 1;
  int m = 1;
  bool has_exact = true;
  bool zero_source = false;
  std::function<double(double)> tf;
  std::function<double(double)> dtf;
  AnalyticFunction1D phi;
  AnalyticFunction1D phi_m;
  // Robin boundary coefficients for the 1D solve:
  //   a1*u(a) - b1*u_x(a) = g1(t),  a2*u(b) + b2*u_x(b) = g2(t)
  double bc_a1 = 1.0, bc_b1 = 0.0, bc_a2 = 1.0, bc_b2 = 0.0;
};

const ManufacturedCase& example_case(const std::string& key);
std::vector<std::string> example_keys();

// Exact solution values (throws for entries without one).
double exact_value_1d(const ManufacturedCase& c, double x, double t);
double exact_value_2d(const ManufacturedCase& c, double x, double y, double t);
// Initial profile u(.,0); defined for every entry.
double initial_value_1d(const ManufacturedCase& c, double x);
double initial_value_2d(const ManufacturedCase& c, double x, double y);

// Riemann-Liouville derivative of (x-a)^gamma_exp (Left) or (b-x)^gamma_exp
// (Right) straight from the monomial formula.
double rl_deriv_analytic_monomial(double gamma_exp, double alpha, Side side,
                                  double a, double b, double x);
// Caputo counterpart: zero for integer gamma_exp below ceil(alpha), the same
// formula otherwise.
double caputo_deriv_analytic_monomial(double gamma_exp, double alpha, Side side,
                                      double a, double b, double x);

// Riemann-Liouville derivative of an analytic function at interior x:
// boundary series plus Gauss-Jacobi quadrature of the regularized integral.
double rl_deriv_quadrature(const AnalyticFunction1D& v, double alpha, Side side,
                           double a, double b, double x, int quad_order);

struct SourceParams {
  double alpha = 1.5;
  double kappa = 1.0;
  double nu = 1.0;
  double p = 0.5;
  double q = 0.5;
};

// Precomputes the per-axis fractional derivative samples of a case's profile
// on a grid once (the expensive quadrature), then assembles source values at
// any time level by combining the cached vectors.
class SourceEvaluator {
 public:
  SourceEvaluator(const ManufacturedCase& c, const CollocationGrid& grid,
                  const SourceParams& params, int quad_order = 0);

  // source f at interior collocation points; 1D: j = 1..N-1; 2D: row-major
  // over (x_r, y_s) with r fastest, r,s = 1..N-1
  std::vector<double> interior(double t) const;

  const ManufacturedCase& mcase() const { return *case_; }

 private:
  const ManufacturedCase* case_;
  const CollocationGrid* grid_;
  SourceParams params_;
  std::vector<double> phi_, dphi_, frac_phi_m_, phi_m_;
};

// One-shot evaluation of the manufactured source at interior points.
std::vector<double> manufactured_source(const ManufacturedCase& c,
                                        const SourceParams& params,
                                        const CollocationGrid& grid, double t,
                                        int quad_order = 0);

}  // namespace fracspec
