#include "fracspec/grids.hpp"

#include <cmath>
#include <stdexcept>

namespace fracspec {

namespace {

void check_params(int n, double a, double b) {
  if (n < 1 || n > 64)
    throw std::invalid_argument("grid: degree must be between 1 and 64");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("grid: need finite a < b");
}

// Fill points on [a,b] from reference points on [-1,1] given for the left
// half; the right half is mirrored exactly so that symmetric grids stay
// symmetric to the bit.
void mirror_and_map(CollocationGrid& g, const std::vector<double>& left_half) {
  int n = g.n;
  std::vector<double> ref(n + 1);
  for (int i = 0; i <= n / 2; ++i) {
    ref[i] = left_half[i];
    ref[n - i] = -left_half[i];
  }
  if (n % 2 == 0) ref[n / 2] = 0.0;
  ref[0] = -1.0;
  ref[n] = 1.0;
  g.points.resize(n + 1);
  if (g.a == -1.0 && g.b == 1.0) {
    g.points = ref;
  } else {
    double mid = 0.5 * (g.a + g.b);
    double half = 0.5 * (g.b - g.a);
    for (int i = 0; i <= n; ++i) g.points[i] = mid + half * ref[i];
    g.points[0] = g.a;
    g.points[n] = g.b;
  }
}

}  // namespace

std::pair<double, double> legendre_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre_eval: negative degree");
  double p0 = 1.0, d0 = 0.0;
  if (n == 0) return {p0, d0};
  double p1 = x, d1 = 1.0;
  for (int k = 1; k < n; ++k) {
    double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    double d2 = ((2.0 * k + 1.0) * (p1 + x * d1) - k * d0) / (k + 1.0);
    p0 = p1;
    d0 = d1;
    p1 = p2;
    d1 = d2;
  }
  return {p1, d1};
}

CollocationGrid chebyshev_lobatto(int n, double a, double b) {
  check_params(n, a, b);
  CollocationGrid g;
  g.family = GridFamily::Chebyshev;
  g.n = n;
  g.a = a;
  g.b = b;
  std::vector<double> half(n / 2 + 1);
  for (int i = 0; i <= n / 2; ++i) half[i] = -std::cos(M_PI * i / n);
  mirror_and_map(g, half);
  return g;
}

CollocationGrid legendre_lobatto(int n, double a, double b) {
  check_params(n, a, b);
  CollocationGrid g;
  g.family = GridFamily::Legendre;
  g.n = n;
  g.a = a;
  g.b = b;

  // interior points are the roots of P_n'; Newton from Chebyshev seeds
  std::vector<double> half(n / 2 + 1);
  half[0] = -1.0;
  for (int i = 1; i <= n / 2; ++i) {
    double x = -std::cos(M_PI * i / n);
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_eval(n, x);
      // P_n'' from the Legendre equation
      double ddp = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      double dx = dp / ddp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    half[i] = x;
  }
  mirror_and_map(g, half);

  g.weights.resize(n + 1);
  double scale = 0.5 * (b - a);
  double c = 2.0 / (n * (n + 1.0));
  std::vector<double> ref(n + 1);
  for (int i = 0; i <= n / 2; ++i) {
    ref[i] = half[i];
    if (i == 0) ref[i] = -1.0;
  }
  for (int i = 0; i <= n / 2; ++i) {
    auto [p, dp] = legendre_eval(n, ref[i]);
    (void)dp;
    double w = c / (p * p) * scale;
    g.weights[i] = w;
    g.weights[n - i] = w;
  }
  return g;
}

CollocationGrid make_grid(GridFamily family, int n, double a, double b) {
  return family == GridFamily::Legendre ? legendre_lobatto(n, a, b)
                                        : chebyshev_lobatto(n, a, b);
}

}  // namespace fracspec
