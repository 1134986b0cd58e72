#include "fracspec/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fracspec {

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> mat_vec(const Mat& a, const std::vector<double>& x) {
  if (a.cols != static_cast<int>(x.size()))
    throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Mat mat_add(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("mat_add: shape mismatch");
  Mat c = a;
  for (size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

Mat mat_scale(const Mat& a, double s) {
  Mat c = a;
  for (double& v : c.data) v *= s;
  return c;
}

Mat identity(int n) {
  Mat c(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 1.0;
  return c;
}

double norm_inf(const Mat& a) {
  double best = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat c(a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int r = 0; r < b.rows; ++r)
        for (int s = 0; s < b.cols; ++s)
          c(i * b.rows + r, j * b.cols + s) = aij * b(r, s);
    }
  return c;
}

LuFactor lu_factor(Mat a) {
  if (a.rows != a.cols) throw std::invalid_argument("lu_factor: matrix not square");
  int n = a.rows;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("lu_factor: matrix is singular");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      double m = a(i, k) / a(k, k);
      a(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  return LuFactor{std::move(a), std::move(perm)};
}

std::vector<double> lu_solve(const LuFactor& f, std::vector<double> b) {
  int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("lu_solve: size mismatch");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

namespace {

// Iterative row/column scaling so that row and column norms are comparable;
// a similarity transform, so eigenvalues are untouched.
void balance(Mat& a) {
  int n = a.rows;
  const double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        double ginv = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= ginv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form (in place).
void hessenberg(Mat& a) {
  int n = a.rows;
  std::vector<double> v(n);
  for (int k = 1; k < n - 1; ++k) {
    double scale = 0.0;
    for (int i = k; i < n; ++i) scale += std::abs(a(i, k - 1));
    if (scale == 0.0) continue;
    double h = 0.0;
    for (int i = k; i < n; ++i) {
      v[i] = a(i, k - 1) / scale;
      h += v[i] * v[i];
    }
    double g = (v[k] >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
    h -= v[k] * g;
    v[k] -= g;
    if (h == 0.0) continue;
    // apply P = I - v v^T / h from both sides
    for (int j = 0; j < n; ++j) {
      double f = 0.0;
      for (int i = k; i < n; ++i) f += v[i] * a(i, j);
      f /= h;
      for (int i = k; i < n; ++i) a(i, j) -= f * v[i];
    }
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j = k; j < n; ++j) f += a(i, j) * v[j];
      f /= h;
      for (int j = k; j < n; ++j) a(i, j) -= f * v[j];
    }
    a(k, k - 1) = scale * g;
    for (int i = k + 1; i < n; ++i) a(i, k - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns eigenvalues.
std::vector<std::complex<double>> hqr(Mat& a, int max_iter) {
  int n = a.rows;
  std::vector<std::complex<double>> w(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return w;

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        w[nn] = x + t;
        --nn;
      } else {
        double y = a(nn - 1, nn - 1);
        double wv = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + wv;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            w[nn - 1] = w[nn] = x + z;
            if (z != 0.0) w[nn] = x - wv / z;
          } else {
            w[nn] = std::complex<double>(x + p, -z);
            w[nn - 1] = std::conj(w[nn]);
          }
          nn -= 2;
        } else {
          if (its == max_iter)
            throw std::runtime_error("eig_dense: QR iteration did not converge");
          if (its == 10 || its == 20) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            wv = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0, q = 0, r = 0, z = 0;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - wv) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rr - ss;
            r = a(m + 2, m + 1);
            double scale = std::abs(p) + std::abs(q) + std::abs(r);
            p /= scale;
            q /= scale;
            r /= scale;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                      std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            int mmin = (nn < k + 3) ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (nn >= 0 && l < nn);
  }
  return w;
}

}  // namespace

std::vector<std::complex<double>> eig_dense(Mat a, int max_iter) {
  if (a.rows != a.cols) throw std::invalid_argument("eig_dense: matrix not square");
  if (a.rows == 0) return {};
  if (a.rows == 1) return {std::complex<double>(a(0, 0), 0.0)};
  balance(a);
  hessenberg(a);
  return hqr(a, max_iter);
}

}  // namespace fracspec
