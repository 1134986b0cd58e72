#pragma once

#include "fracspec/grids.hpp"
#include "fracspec/lagrange.hpp"
#include "fracspec/linalg.hpp"

#include <vector>

namespace fracspec {

enum class DerivKind { RLLeft, RLRight, CaputoLeft, CaputoRight, FirstOrder };

// Dense differentiation matrix on a collocation grid.  Rows listed in
// undefined_rows have no finite value (Riemann-Liouville at the anchored
// endpoint); their entries are stored as zeros and must not be read.
struct DiffMatrix {
  DerivKind kind = DerivKind::FirstOrder;
  double alpha = 1.0;
  GridFamily family = GridFamily::Legendre;
  int n = 0;
  double a = -1.0;
  double b = 1.0;
  PrecisionMode precision;
  Mat entries;
  std::vector<int> undefined_rows;
};

DiffMatrix rl_left_matrix(const CollocationGrid& grid, double alpha,
                          const PowerBasisCoeffs& coeffs);
DiffMatrix rl_right_matrix(const CollocationGrid& grid, double alpha,
                           const PowerBasisCoeffs& coeffs);
DiffMatrix caputo_left_matrix(const CollocationGrid& grid, double alpha,
                              const PowerBasisCoeffs& coeffs);
DiffMatrix caputo_right_matrix(const CollocationGrid& grid, double alpha,
                               const PowerBasisCoeffs& coeffs);

// Convenience overloads expanding coefficients internally with the default
// precision policy.
DiffMatrix rl_left_matrix(const CollocationGrid& grid, double alpha);
DiffMatrix rl_right_matrix(const CollocationGrid& grid, double alpha);
DiffMatrix caputo_left_matrix(const CollocationGrid& grid, double alpha);
DiffMatrix caputo_right_matrix(const CollocationGrid& grid, double alpha);

// Closed-form first-derivative matrix for the grid family, scaled to [a,b].
DiffMatrix first_order_matrix(const CollocationGrid& grid);

// Matrix-vector product; entries of undefined rows come back as NaN.
std::vector<double> apply_diffmatrix(const DiffMatrix& dm,
                                     const std::vector<double>& values);

}  // namespace fracspec
