#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <vector>

namespace fracspec {

// 256-bit binary floating point, used when double coefficients degrade.
using ext_t = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

// Working precision for the Lagrange coefficient expansion.  Extended mode is
// parameterized by bit count for forward compatibility, but only the built-in
// 256-bit type is available.
struct PrecisionMode {
  enum class Kind { Double, Extended };
  Kind kind = Kind::Double;
  int bits = 53;

  static PrecisionMode dbl() { return PrecisionMode{Kind::Double, 53}; }
  static PrecisionMode extended(int bits = 256);
  bool is_extended() const { return kind == Kind::Extended; }
};

// Euler gamma function for real x, accurate to ~1e-14 relative error for
// |x| <= 50.  Throws std::domain_error at the poles (x = 0, -1, -2, ...).
double gamma_fn(double x);

// sin(pi*x) with exact argument reduction, avoiding the catastrophic error of
// std::sin(M_PI*x) near integers.
double sin_pi(double x);

// Gamma function in 256-bit arithmetic (Spouge's approximation).  Same pole
// behaviour as gamma_fn.
ext_t gamma_ext(const ext_t& x);

ext_t sin_pi_ext(const ext_t& x);

const ext_t& pi_ext();

// Side selector for one-sided fractional operators and anchored expansions.
enum class Side { Left, Right };

// Gauss-Jacobi quadrature on (-1,1) with weight (1-s)^gamma_exp (1+s)^delta_exp.
// Exact for polynomials of degree <= 2*order-1.
struct QuadRule {
  double gamma_exp = 0.0;
  double delta_exp = 0.0;
  int order = 0;
  std::vector<double> nodes;    // ascending, strictly inside (-1,1)
  std::vector<double> weights;  // positive
};

QuadRule gauss_jacobi_rule(double gamma_exp, double delta_exp, int order);

}  // namespace fracspec
