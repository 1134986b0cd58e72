#pragma once

#include "fracspec/grids.hpp"
#include "fracspec/numerics.hpp"

#include <vector>

namespace fracspec {

// Lagrange cardinal polynomials of a grid expanded in the power basis
// (x - anchor)^(N-k), anchor = a (Left) or b (Right).  coeff[i][k] multiplies
// (x - anchor)^(N-k) in the expansion of cardinal i.  In extended mode the
// full-precision coefficients are kept alongside their double roundings.
struct PowerBasisCoeffs {
  Side anchor = Side::Left;
  double anchor_value = -1.0;
  int n = 0;
  PrecisionMode precision;
  std::vector<std::vector<double>> coeff;
  std::vector<std::vector<ext_t>> coeff_ext;  // empty in Double mode
};

// Default coefficient precision policy: Double through degree 14, 256-bit
// extended from 15 up (double coefficients degrade past ~1e-8 there).
PrecisionMode default_precision(int n);

// Power-sum (Henrici) expansion of all cardinals.
PowerBasisCoeffs expand_lagrange(const CollocationGrid& grid, Side anchor,
                                 PrecisionMode precision);

// Same contract, computed by solving the Vandermonde system in powers of
// (x - anchor); retained as an independent cross-check.
PowerBasisCoeffs expand_lagrange_vandermonde(const CollocationGrid& grid,
                                             Side anchor, PrecisionMode precision);

// Evaluate cardinal i at x from its power-basis expansion.
double eval_cardinal(const PowerBasisCoeffs& coeffs, int i, double x);
ext_t eval_cardinal_ext(const PowerBasisCoeffs& coeffs, int i, const ext_t& x);

// Max absolute coefficient error of the Double expansion against the 256-bit
// reference, Legendre grid on [-1,1], left anchor.
double coeff_error_report(int n);

}  // namespace fracspec
