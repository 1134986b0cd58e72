#include "fracspec/fracmat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracspec {

namespace {

void check_fractional_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("fracmat: alpha must be positive");
  if (alpha == std::floor(alpha))
    throw std::invalid_argument(
        "fracmat: integer alpha is not a fractional kind; use first_order_matrix");
}

void check_coeffs(const CollocationGrid& grid, const PowerBasisCoeffs& coeffs,
                  Side expected) {
  if (coeffs.anchor != expected)
    throw std::invalid_argument("fracmat: coefficient expansion anchored on the wrong side");
  if (coeffs.n != grid.n)
    throw std::invalid_argument("fracmat: coefficient degree does not match grid");
  double want = expected == Side::Left ? grid.a : grid.b;
  if (coeffs.anchor_value != want)
    throw std::invalid_argument("fracmat: coefficient anchor does not match grid interval");
}

// Gamma(n_ceil + 1 - alpha + t) for integer offsets t, built from one base
// gamma evaluation by the recurrence Gamma(u+1) = u*Gamma(u); keeps the
// extended path down to a single transcendental call per matrix.
std::vector<ext_t> gamma_ladder_ext(double alpha, int n_ceil, int n) {
  // denominators Gamma(N-k+1-alpha), k = 0..N: arguments u + t with
  // u = n_ceil+1-alpha in (1,2) and t = N-k-n_ceil in [-n_ceil, N-n_ceil]
  ext_t u = ext_t(n_ceil) + 1 - ext_t(alpha);
  ext_t base = gamma_ext(u);
  int lo = -n_ceil, hi = n - n_ceil;
  std::vector<ext_t> g(hi - lo + 1);
  g[-lo] = base;
  for (int t = 1; t <= hi; ++t) g[t - lo] = g[t - 1 - lo] * (u + (t - 1));
  for (int t = -1; t >= lo; --t) g[t - lo] = g[t + 1 - lo] / (u + t);
  return g;  // index t - lo holds Gamma(u + t)
}

struct FracParams {
  Side side;
  bool caputo;
  DerivKind kind;
};

DiffMatrix build_fractional(const CollocationGrid& grid, double alpha,
                            const PowerBasisCoeffs& coeffs, FracParams fp) {
  check_fractional_alpha(alpha);
  check_coeffs(grid, coeffs, fp.side);
  const int n = grid.n;
  const int n_ceil = static_cast<int>(std::ceil(alpha));
  // Caputo drops the terms whose monomial degree is below ceil(alpha)
  const int k_max = fp.caputo ? n - n_ceil : n;
  if (fp.caputo && k_max < 0)
    throw std::invalid_argument("fracmat: grid degree below ceil(alpha)");

  DiffMatrix dm;
  dm.kind = fp.kind;
  dm.alpha = alpha;
  dm.family = grid.family;
  dm.n = n;
  dm.a = grid.a;
  dm.b = grid.b;
  dm.precision = coeffs.precision;
  dm.entries = Mat(n + 1, n + 1);

  const bool left = fp.side == Side::Left;
  auto dist = [&](int j) { return left ? grid.points[j] - grid.a : grid.b - grid.points[j]; };

  for (int j = 0; j <= n; ++j) {
    if (!fp.caputo && dist(j) == 0.0) {
      dm.undefined_rows.push_back(j);
      continue;
    }
  }

  auto row_undefined = [&](int j) {
    for (int r : dm.undefined_rows)
      if (r == j) return true;
    return false;
  };

  if (coeffs.precision.is_extended()) {
    // gden[deg] = Gamma(deg + 1 - alpha)
    std::vector<ext_t> gden = gamma_ladder_ext(alpha, n_ceil, n);
    // ratio[k] = Gamma(N-k+1)/Gamma(N-k+1-alpha), with the right-side
    // (-1)^(N-k) sign folded in for the Right anchor
    std::vector<ext_t> factorial(n + 1);
    factorial[0] = 1;
    for (int d = 1; d <= n; ++d) factorial[d] = factorial[d - 1] * d;
    std::vector<ext_t> ratio(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
      int deg = n - k;
      ext_t r = factorial[deg] / gden[deg];
      if (!left && deg % 2 != 0) r = -r;
      ratio[k] = r;
    }
    for (int j = 0; j <= n; ++j) {
      if (row_undefined(j)) continue;
      ext_t y = ext_t(dist(j));
      for (int i = 0; i <= n; ++i) {
        ext_t acc = 0;
        for (int k = 0; k <= k_max; ++k) {
          double expo = n - k - alpha;
          ext_t p = (y == 0) ? ext_t(0) : pow(y, ext_t(expo));
          acc += coeffs.coeff_ext[i][k] * ratio[k] * p;
        }
        dm.entries(j, i) = acc.convert_to<double>();
      }
    }
  } else {
    std::vector<double> ratio(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
      int deg = n - k;
      double r = gamma_fn(deg + 1.0) / gamma_fn(deg + 1.0 - alpha);
      if (!left && deg % 2 != 0) r = -r;
      ratio[k] = r;
    }
    for (int j = 0; j <= n; ++j) {
      if (row_undefined(j)) continue;
      double y = dist(j);
      for (int i = 0; i <= n; ++i) {
        double acc = 0.0;
        for (int k = 0; k <= k_max; ++k) {
          double expo = n - k - alpha;
          double p = (y == 0.0) ? 0.0 : std::pow(y, expo);
          acc += coeffs.coeff[i][k] * ratio[k] * p;
        }
        dm.entries(j, i) = acc;
      }
    }
  }
  return dm;
}

DiffMatrix first_order_legendre(const CollocationGrid& grid) {
  const int n = grid.n;
  DiffMatrix dm;
  dm.kind = DerivKind::FirstOrder;
  dm.alpha = 1.0;
  dm.family = grid.family;
  dm.n = n;
  dm.a = grid.a;
  dm.b = grid.b;
  dm.precision = PrecisionMode::dbl();
  dm.entries = Mat(n + 1, n + 1);

  // reference points and P_n values
  std::vector<double> ref(n + 1), pn(n + 1);
  for (int i = 0; i <= n; ++i) {
    ref[i] = (2.0 * grid.points[i] - (grid.a + grid.b)) / (grid.b - grid.a);
    pn[i] = legendre_eval(n, ref[i]).first;
  }
  double scale = 2.0 / (grid.b - grid.a);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double v;
      if (j == i) {
        if (j == 0)
          v = -n * (n + 1.0) / 4.0;
        else if (j == n)
          v = n * (n + 1.0) / 4.0;
        else
          v = 0.0;
      } else {
        v = pn[j] / (pn[i] * (ref[j] - ref[i]));
      }
      dm.entries(j, i) = v * scale;
    }
  return dm;
}

DiffMatrix first_order_chebyshev(const CollocationGrid& grid) {
  const int n = grid.n;
  DiffMatrix dm;
  dm.kind = DerivKind::FirstOrder;
  dm.alpha = 1.0;
  dm.family = grid.family;
  dm.n = n;
  dm.a = grid.a;
  dm.b = grid.b;
  dm.precision = PrecisionMode::dbl();
  dm.entries = Mat(n + 1, n + 1);

  std::vector<double> ref(n + 1);
  for (int i = 0; i <= n; ++i)
    ref[i] = (2.0 * grid.points[i] - (grid.a + grid.b)) / (grid.b - grid.a);
  auto c = [&](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
  double scale = 2.0 / (grid.b - grid.a);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double v;
      if (j == i) {
        if (j == 0)
          v = -(2.0 * n * n + 1.0) / 6.0;
        else if (j == n)
          v = (2.0 * n * n + 1.0) / 6.0;
        else
          v = -ref[j] / (2.0 * (1.0 - ref[j] * ref[j]));
      } else {
        double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        v = (c(j) / c(i)) * sign / (ref[j] - ref[i]);
      }
      dm.entries(j, i) = v * scale;
    }
  return dm;
}

}  // namespace

DiffMatrix rl_left_matrix(const CollocationGrid& grid, double alpha,
                          const PowerBasisCoeffs& coeffs) {
  return build_fractional(grid, alpha, coeffs,
                          {Side::Left, false, DerivKind::RLLeft});
}

DiffMatrix rl_right_matrix(const CollocationGrid& grid, double alpha,
                           const PowerBasisCoeffs& coeffs) {
  return build_fractional(grid, alpha, coeffs,
                          {Side::Right, false, DerivKind::RLRight});
}

DiffMatrix caputo_left_matrix(const CollocationGrid& grid, double alpha,
                              const PowerBasisCoeffs& coeffs) {
  return build_fractional(grid, alpha, coeffs,
                          {Side::Left, true, DerivKind::CaputoLeft});
}

DiffMatrix caputo_right_matrix(const CollocationGrid& grid, double alpha,
                               const PowerBasisCoeffs& coeffs) {
  return build_fractional(grid, alpha, coeffs,
                          {Side::Right, true, DerivKind::CaputoRight});
}

DiffMatrix rl_left_matrix(const CollocationGrid& grid, double alpha) {
  return rl_left_matrix(grid, alpha,
                        expand_lagrange(grid, Side::Left, default_precision(grid.n)));
}

DiffMatrix rl_right_matrix(const CollocationGrid& grid, double alpha) {
  return rl_right_matrix(grid, alpha,
                         expand_lagrange(grid, Side::Right, default_precision(grid.n)));
}

DiffMatrix caputo_left_matrix(const CollocationGrid& grid, double alpha) {
  return caputo_left_matrix(grid, alpha,
                            expand_lagrange(grid, Side::Left, default_precision(grid.n)));
}

DiffMatrix caputo_right_matrix(const CollocationGrid& grid, double alpha) {
  return caputo_right_matrix(grid, alpha,
                             expand_lagrange(grid, Side::Right, default_precision(grid.n)));
}

DiffMatrix first_order_matrix(const CollocationGrid& grid) {
  return grid.family == GridFamily::Legendre ? first_order_legendre(grid)
                                             : first_order_chebyshev(grid);
}

std::vector<double> apply_diffmatrix(const DiffMatrix& dm,
                                     const std::vector<double>& values) {
  std::vector<double> out = mat_vec(dm.entries, values);
  for (int r : dm.undefined_rows)
    out[r] = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace fracspec
