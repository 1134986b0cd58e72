#include "fracspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracspec {

PrecisionMode PrecisionMode::extended(int bits) {
  if (bits < 128)
    throw std::invalid_argument("PrecisionMode: extended mode needs at least 128 bits");
  if (bits != 256)
    throw std::invalid_argument("PrecisionMode: only 256-bit extended mode is built in");
  return PrecisionMode{Kind::Extended, bits};
}

double sin_pi(double x) {
  double k = std::nearbyint(x);
  double d = x - k;  // |d| <= 0.5, exact for |x| < 2^52
  double s = std::sin(M_PI * d);
  bool odd = std::fmod(std::abs(k), 2.0) == 1.0;
  return odd ? -s : s;
}

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 7, 9 terms.
double gamma_positive(double x) {
  static const double c[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  double acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (x - 1.0 + i);
  double t = x + 6.5;  // x + g - 0.5
  return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma_fn: pole at non-positive integer");
  if (x >= 0.5) return gamma_positive(x);
  // reflection through sin(pi x) Gamma(x) Gamma(1-x) = pi
  return M_PI / (sin_pi(x) * gamma_positive(1.0 - x));
}

namespace {

constexpr int kSpougeA = 110;

struct SpougeTable {
  ext_t c0;
  std::vector<ext_t> c;  // c[k], k = 1 .. a-1

  SpougeTable() {
    const ext_t a = kSpougeA;
    c0 = sqrt(2 * pi_ext());
    c.resize(kSpougeA);
    ext_t fact = 1;  // (k-1)!
    for (int k = 1; k < kSpougeA; ++k) {
      if (k > 1) fact *= k - 1;
      ext_t ak = a - k;
      ext_t term = pow(ak, ext_t(k) - ext_t(0.5)) * exp(ak) / fact;
      c[k] = (k % 2 == 1) ? term : -term;
    }
  }
};

ext_t gamma_ext_positive(const ext_t& x) {
  static const SpougeTable tab;
  ext_t z = x - 1;
  ext_t acc = tab.c0;
  for (int k = 1; k < kSpougeA; ++k) acc += tab.c[k] / (z + k);
  ext_t za = z + kSpougeA;
  return pow(za, z + ext_t(0.5)) * exp(-za) * acc;
}

}  // namespace

const ext_t& pi_ext() {
  static const ext_t value = acos(ext_t(-1));
  return value;
}

ext_t sin_pi_ext(const ext_t& x) {
  ext_t k = round(x);
  ext_t d = x - k;
  ext_t s = sin(pi_ext() * d);
  long long ki = k.convert_to<long long>();
  return (ki % 2 != 0) ? -s : s;
}

ext_t gamma_ext(const ext_t& x) {
  if (x <= 0 && x == floor(x))
    throw std::domain_error("gamma_ext: pole at non-positive integer");
  if (x >= ext_t(0.5)) return gamma_ext_positive(x);
  return pi_ext() / (sin_pi_ext(x) * gamma_ext_positive(1 - x));
}

namespace {

// Symmetric tridiagonal QL with implicit shifts.  d is the diagonal, e the
// subdiagonal (e[0] unused); z tracks the first component of each eigenvector.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& z) {
  int n = static_cast<int>(d.size());
  if (n == 1) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error("gauss_jacobi_rule: eigenvalue iteration stalled");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double zt = z[i + 1];
          z[i + 1] = s * z[i] + c * zt;
          z[i] = c * z[i] - s * zt;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

QuadRule gauss_jacobi_rule(double gamma_exp, double delta_exp, int order) {
  const int m = order;
  if (m < 1) throw std::invalid_argument("gauss_jacobi_rule: need at least one node");
  if (!(gamma_exp > -1.0) || !(delta_exp > -1.0))
    throw std::invalid_argument("gauss_jacobi_rule: weight exponents must exceed -1");

  double apb = gamma_exp + delta_exp;
  std::vector<double> d(m), e(m, 0.0);
  // three-term recurrence for monic Jacobi polynomials with weight
  // (1-s)^gamma (1+s)^delta
  d[0] = (delta_exp - gamma_exp) / (apb + 2.0);
  for (int k = 1; k < m; ++k) {
    double s = 2.0 * k + apb;
    d[k] = (delta_exp * delta_exp - gamma_exp * gamma_exp) / (s * (s + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + gamma_exp) * (1.0 + delta_exp) /
           ((2.0 + apb) * (2.0 + apb) * (3.0 + apb));
    } else {
      double s = 2.0 * k + apb;
      bk = 4.0 * k * (k + gamma_exp) * (k + delta_exp) * (k + apb) /
           (s * s * (s + 1.0) * (s - 1.0));
    }
    e[k] = std::sqrt(bk);
  }

  double mu0 = std::pow(2.0, apb + 1.0) * gamma_fn(gamma_exp + 1.0) *
               gamma_fn(delta_exp + 1.0) / gamma_fn(apb + 2.0);

  std::vector<double> z(m, 0.0);
  z[0] = 1.0;
  tridiag_ql(d, e, z);

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });

  QuadRule rule;
  rule.gamma_exp = gamma_exp;
  rule.delta_exp = delta_exp;
  rule.order = m;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = d[idx[i]];
    rule.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
  }
  return rule;
}

}  // namespace fracspec
