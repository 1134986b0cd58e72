#pragma once

#include "fracspec/grids.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/numerics.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fracspec {

struct ErrorNorms {
  double l_inf = 0.0;
  double l2 = 0.0;
};

// L_inf is the max absolute difference over all nodes; L2 is the weighted
// root sum of squares.  The weight vector must match the values in length
// (2D callers pass tensor-product weights).
ErrorNorms error_norms(const std::vector<double>& numeric,
                       const std::vector<double>& exact,
                       const std::vector<double>& weights);

// Weights for the discrete L2 norm: Legendre grids use their quadrature
// weights, Chebyshev grids a uniform (b-a)/(n+1) per node.
std::vector<double> norm_weights_1d(const CollocationGrid& grid);
// Product weights over the full (n+1)^2 tensor grid, x index fastest.
std::vector<double> norm_weights_2d(const CollocationGrid& grid);

struct ConvergenceRow {
  int n = 0;
  double l_inf = 0.0;
  double l2 = 0.0;
};

struct ConvergenceTable {
  std::string case_key;
  GridFamily family = GridFamily::Legendre;
  double alpha = 0.0;
  double tau = 0.0;
  double t_final = 0.0;
  std::vector<ConvergenceRow> rows;  // n strictly increasing
};

struct SweepSpec {
  std::string case_key = "ex1";
  GridFamily family = GridFamily::Legendre;
  std::vector<double> alphas = {1.5};
  std::vector<int> degrees = {6, 8, 10, 12};
  double a = -1.0, b = 1.0;
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  int jobs = 1;        // worker threads for the (alpha, n) cells
  int quad_points = 0;
  std::optional<PrecisionMode> precision;  // unset: per-n default
};

// Solves every (alpha, n) cell of the sweep and tabulates the error norms
// against the exact solution at t_final; one table per alpha, rows ordered
// by n.  Cells run on `jobs` threads; output does not depend on scheduling.
std::vector<ConvergenceTable> convergence_sweep(const SweepSpec& spec);

// Least-squares slope of log10(L2) versus n over the rows above the
// precision floor.  Throws if fewer than two rows qualify.
double fitted_slope(const ConvergenceTable& table, double floor = 1e-13);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::string source;  // free-text descriptor of the matrix analyzed
};

// Dense nonsymmetric eigenvalues (balance + Hessenberg + shifted QR); each
// eigenvalue drives the smallest singular value of A - lambda*I below
// 1e-8 * norm(A).
Spectrum eigenvalues_dense(const Mat& a, const std::string& source = "");

// max modulus over the spectrum
double spectral_radius(const Mat& a);

}  // namespace fracspec
