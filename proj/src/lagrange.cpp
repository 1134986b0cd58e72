#include "fracspec/lagrange.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace fracspec {

namespace {

void check_distinct(const std::vector<double>& pts) {
  for (size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i] > pts[i - 1]))
      throw std::invalid_argument("expand_lagrange: grid nodes must be distinct");
}

// Coefficients of cardinal i in powers of (x - anchor), highest power first.
// The nodal polynomial prod_{j!=i}(x - x_j) is first expanded around the grid
// midpoint with the Newton power-sum recurrence (the centered nodes are
// sign-symmetric, which keeps the recurrence mild), then rebased onto the
// anchor with a Horner-style Taylor shift. Expanding directly in powers of
// (x - anchor) feeds the recurrence same-sign roots and loses several more
// digits to cancellation. Nodes are visited left to right for the Left anchor
// and right to left for the Right anchor, so that on a mirror-symmetric grid
// both runs perform the identical sequence of operations on sign-flipped
// values and the two coefficient sets mirror each other bit for bit.
template <typename R>
std::vector<std::vector<R>> henrici(const std::vector<double>& pts,
                                    double anchor_value, bool reverse) {
  const int n = static_cast<int>(pts.size()) - 1;
  std::vector<int> order(n + 1);
  for (int j = 0; j <= n; ++j) order[j] = reverse ? n - j : j;

  // center and shift are fixed in double so every precision expands around
  // the same point
  const double mid = 0.5 * (pts.front() + pts.back());
  const double sigma = anchor_value - mid;

  std::vector<R> z(n + 1);
  for (int j = 0; j <= n; ++j) z[j] = R(pts[j]) - R(mid);

  std::vector<std::vector<R>> c(n + 1, std::vector<R>(n + 1));
  std::vector<R> s(n + 1), a(n + 1), asc(n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) s[k] = R(0);
    for (int jj = 0; jj <= n; ++jj) {
      int j = order[jj];
      if (j == i) continue;
      R zp = z[j];
      for (int k = 1; k <= n; ++k) {
        s[k] += zp;
        zp *= z[j];
      }
    }
    a[0] = R(1);
    for (int m = 1; m <= n; ++m) {
      R acc = R(0);
      for (int l = 1; l <= m; ++l) acc += s[l] * a[m - l];
      a[m] = -acc / R(m);
    }
    // ascending powers of (x - mid); a[k] multiplies (x - mid)^(n - k)
    for (int k = 0; k <= n; ++k) asc[k] = a[n - k];
    // rebase: q(w) = p(w + sigma) where w = x - anchor
    for (int k = 0; k <= n; ++k)
      for (int j = n - 1; j >= k; --j) asc[j] += R(sigma) * asc[j + 1];
    R denom = R(1);
    for (int jj = 0; jj <= n; ++jj) {
      int j = order[jj];
      if (j == i) continue;
      denom *= R(pts[i]) - R(pts[j]);
    }
    for (int k = 0; k <= n; ++k) c[i][k] = asc[n - k] / denom;
  }
  return c;
}

// Gaussian elimination with partial pivoting, good enough for the
// (N+1)-square Vandermonde cross-check in either precision.
template <typename R>
std::vector<std::vector<R>> solve_vandermonde(const std::vector<double>& pts,
                                              double anchor_value) {
  using std::abs;
  const int n = static_cast<int>(pts.size()) - 1;
  const int np = n + 1;
  // augmented [B | I], B[j][k] = (x_j - anchor)^(n-k)
  std::vector<std::vector<R>> aug(np, std::vector<R>(2 * np, R(0)));
  for (int j = 0; j < np; ++j) {
    R zj = R(pts[j]) - R(anchor_value);
    R pw = R(1);
    for (int k = n; k >= 0; --k) {
      aug[j][k] = pw;
      pw *= zj;
    }
    aug[j][np + j] = R(1);
  }
  for (int k = 0; k < np; ++k) {
    int piv = k;
    R best = abs(aug[k][k]);
    for (int i = k + 1; i < np; ++i)
      if (abs(aug[i][k]) > best) {
        best = abs(aug[i][k]);
        piv = i;
      }
    if (best == R(0))
      throw std::runtime_error("expand_lagrange_vandermonde: singular system");
    std::swap(aug[k], aug[piv]);
    for (int i = 0; i < np; ++i) {
      if (i == k) continue;
      R f = aug[i][k] / aug[k][k];
      if (f == R(0)) continue;
      for (int j = k; j < 2 * np; ++j) aug[i][j] -= f * aug[k][j];
    }
  }
  // B c_i = e_i, so c_{i,k} = inv(B)[k][i]
  std::vector<std::vector<R>> c(np, std::vector<R>(np));
  for (int i = 0; i < np; ++i)
    for (int k = 0; k < np; ++k) c[i][k] = aug[k][np + i] / aug[k][k];

  if constexpr (std::is_same_v<R, double>) {
    // one refinement sweep with an accurate residual; plain elimination on
    // this basis is too rough past N ~ 10 to serve as a cross-check
    std::vector<std::vector<ext_t>> bx(np, std::vector<ext_t>(np));
    for (int j = 0; j < np; ++j) {
      ext_t zj = ext_t(pts[j]) - ext_t(anchor_value);
      ext_t pw = 1;
      for (int k = n; k >= 0; --k) {
        bx[j][k] = pw;
        pw *= zj;
      }
    }
    std::vector<double> r(np);
    for (int i = 0; i < np; ++i) {
      for (int j = 0; j < np; ++j) {
        ext_t acc = (j == i) ? ext_t(1) : ext_t(0);
        for (int k = 0; k < np; ++k) acc -= bx[j][k] * ext_t(c[i][k]);
        r[j] = acc.convert_to<double>();
      }
      for (int k = 0; k < np; ++k) {
        double upd = 0.0;
        for (int j = 0; j < np; ++j) upd += (aug[k][np + j] / aug[k][k]) * r[j];
        c[i][k] += upd;
      }
    }
  }
  return c;
}

double anchor_of(const CollocationGrid& g, Side s) {
  return s == Side::Left ? g.a : g.b;
}

}  // namespace

PrecisionMode default_precision(int n) {
  return n >= 15 ? PrecisionMode::extended() : PrecisionMode::dbl();
}

PowerBasisCoeffs expand_lagrange(const CollocationGrid& grid, Side anchor,
                                 PrecisionMode precision) {
  check_distinct(grid.points);
  PowerBasisCoeffs out;
  out.anchor = anchor;
  out.anchor_value = anchor_of(grid, anchor);
  out.n = grid.n;
  out.precision = precision;
  bool reverse = (anchor == Side::Right);
  if (precision.is_extended()) {
    out.coeff_ext = henrici<ext_t>(grid.points, out.anchor_value, reverse);
    out.coeff.assign(grid.n + 1, std::vector<double>(grid.n + 1));
    for (int i = 0; i <= grid.n; ++i)
      for (int k = 0; k <= grid.n; ++k)
        out.coeff[i][k] = out.coeff_ext[i][k].convert_to<double>();
  } else {
    out.coeff = henrici<double>(grid.points, out.anchor_value, reverse);
  }
  return out;
}

PowerBasisCoeffs expand_lagrange_vandermonde(const CollocationGrid& grid,
                                             Side anchor, PrecisionMode precision) {
  check_distinct(grid.points);
  PowerBasisCoeffs out;
  out.anchor = anchor;
  out.anchor_value = anchor_of(grid, anchor);
  out.n = grid.n;
  out.precision = precision;
  if (precision.is_extended()) {
    out.coeff_ext = solve_vandermonde<ext_t>(grid.points, out.anchor_value);
    out.coeff.assign(grid.n + 1, std::vector<double>(grid.n + 1));
    for (int i = 0; i <= grid.n; ++i)
      for (int k = 0; k <= grid.n; ++k)
        out.coeff[i][k] = out.coeff_ext[i][k].convert_to<double>();
  } else {
    out.coeff = solve_vandermonde<double>(grid.points, out.anchor_value);
  }
  return out;
}

double eval_cardinal(const PowerBasisCoeffs& coeffs, int i, double x) {
  double y = x - coeffs.anchor_value;
  double acc = 0.0;
  for (int k = 0; k <= coeffs.n; ++k) acc = acc * y + coeffs.coeff[i][k];
  return acc;
}

ext_t eval_cardinal_ext(const PowerBasisCoeffs& coeffs, int i, const ext_t& x) {
  if (coeffs.coeff_ext.empty())
    throw std::invalid_argument("eval_cardinal_ext: coefficients are not extended");
  ext_t y = x - ext_t(coeffs.anchor_value);
  ext_t acc = 0;
  for (int k = 0; k <= coeffs.n; ++k) acc = acc * y + coeffs.coeff_ext[i][k];
  return acc;
}

double coeff_error_report(int n) {
  CollocationGrid g = legendre_lobatto(n);
  PowerBasisCoeffs dbl = expand_lagrange(g, Side::Left, PrecisionMode::dbl());
  PowerBasisCoeffs ext = expand_lagrange(g, Side::Left, PrecisionMode::extended());
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n; ++k)
      worst = std::max(worst, std::abs(dbl.coeff[i][k] - ext.coeff[i][k]));
  return worst;
}

}  // namespace fracspec
