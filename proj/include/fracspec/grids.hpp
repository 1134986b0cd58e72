#pragma once

#include <utility>
#include <vector>

namespace fracspec {

enum class GridFamily { Legendre, Chebyshev };

// Collocation grid of n+1 points on [a, b], endpoints included, ascending.
// Legendre grids carry Gauss-Lobatto quadrature weights; Chebyshev grids do not.
struct CollocationGrid {
  GridFamily family = GridFamily::Legendre;
  int n = 0;  // polynomial degree; n+1 points
  double a = -1.0;
  double b = 1.0;
  std::vector<double> points;
  std::vector<double> weights;
};

// Chebyshev-Gauss-Lobatto points -cos(pi*i/n) mapped to [a, b].
CollocationGrid chebyshev_lobatto(int n, double a = -1.0, double b = 1.0);

// Legendre-Gauss-Lobatto points (endpoints plus roots of P_n') with
// quadrature weights, mapped to [a, b].
CollocationGrid legendre_lobatto(int n, double a = -1.0, double b = 1.0);

CollocationGrid make_grid(GridFamily family, int n, double a = -1.0, double b = 1.0);

// Legendre polynomial value and derivative (P_n(x), P_n'(x)) by recurrence.
std::pair<double, double> legendre_eval(int n, double x);

}  // namespace fracspec
