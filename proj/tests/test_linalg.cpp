#include "fracspec/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

using namespace fracspec;

namespace {

Mat random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  return a;
}

// Complex Gaussian elimination with partial pivoting, test-local oracle for
// the eigenvalue residual certificate.
std::vector<std::complex<double>> complex_solve(
    std::vector<std::vector<std::complex<double>>> a,
    std::vector<std::complex<double>> b) {
  int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a[k][k]);
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > best) {
        best = std::abs(a[i][k]);
        piv = i;
      }
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      std::complex<double> m = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<std::complex<double>> x(n);
  for (int i = n - 1; i >= 0; --i) {
    std::complex<double> s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("matrix product and identity") {
  Mat a = random_matrix(7, 11);
  Mat ai = mat_mul(a, identity(7));
  Mat ia = mat_mul(identity(7), a);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      CHECK(ai(i, j) == a(i, j));
      CHECK(ia(i, j) == a(i, j));
    }
  CHECK_THROWS_AS(mat_mul(Mat(2, 3), Mat(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(mat_vec(Mat(2, 3), std::vector<double>(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(mat_add(Mat(2, 3), Mat(3, 2)), std::invalid_argument);
}

TEST_CASE("kronecker product small hand case") {
  Mat a(2, 2), b(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  b(0, 0) = 0; b(0, 1) = 5; b(1, 0) = 6; b(1, 1) = 7;
  Mat k = kron(a, b);
  REQUIRE(k.rows == 4);
  REQUIRE(k.cols == 4);
  CHECK(k(0, 1) == 5.0);
  CHECK(k(1, 0) == 6.0);
  CHECK(k(0, 3) == 10.0);
  CHECK(k(3, 2) == 4.0 * 6.0);
  CHECK(k(2, 2) == 0.0);
  // mixed-product identity (A kron B)(x kron y) = (A x) kron (B y)
  std::vector<double> x{1.0, -2.0}, y{0.5, 3.0}, xy(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) xy[i * 2 + j] = x[i] * y[j];
  std::vector<double> lhs = mat_vec(k, xy);
  std::vector<double> ax = mat_vec(a, x), by = mat_vec(b, y);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(lhs[i * 2 + j] == doctest::Approx(ax[i] * by[j]).epsilon(1e-14));
}

TEST_CASE("norm_inf is the max absolute row sum") {
  Mat a(2, 3);
  a(0, 0) = 1; a(0, 1) = -2; a(0, 2) = 3;
  a(1, 0) = -4; a(1, 1) = 0; a(1, 2) = 1;
  CHECK(norm_inf(a) == 6.0);
}

TEST_CASE("lu solves a random system to near machine accuracy") {
  const int n = 20;
  Mat a = random_matrix(n, 42);
  for (int i = 0; i < n; ++i) a(i, i) += 4.0;  // keep it well conditioned
  std::vector<double> x_true(n);
  for (int i = 0; i < n; ++i) x_true[i] = std::sin(0.7 * i) + 0.3;
  std::vector<double> b = mat_vec(a, x_true);
  LuFactor f = lu_factor(a);
  std::vector<double> x = lu_solve(f, b);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - x_true[i]) <= 1e-12);
  CHECK_THROWS_AS(lu_solve(f, std::vector<double>(n + 1)),
                  std::invalid_argument);
}

TEST_CASE("lu rejects singular and non-square input") {
  Mat s(2, 2);
  s(0, 0) = 1; s(0, 1) = 2; s(1, 0) = 2; s(1, 1) = 4;
  // exactly dependent rows surface as a zero pivot after elimination
  CHECK_THROWS_AS(lu_factor(s), std::runtime_error);
  CHECK_THROWS_AS(lu_factor(Mat(2, 3)), std::invalid_argument);
}

TEST_CASE("eig_dense frozen spectra") {
  Mat rot(2, 2);
  rot(0, 1) = 1.0;
  rot(1, 0) = -1.0;
  auto ev = eig_dense(rot);
  REQUIRE(ev.size() == 2);
  double im0 = ev[0].imag(), im1 = ev[1].imag();
  CHECK(std::abs(ev[0].real()) <= 1e-14);
  CHECK(std::abs(ev[1].real()) <= 1e-14);
  CHECK(std::abs(std::abs(im0) - 1.0) <= 1e-14);
  CHECK(im0 == doctest::Approx(-im1).epsilon(1e-14));

  auto id5 = eig_dense(identity(5));
  REQUIRE(id5.size() == 5);
  for (auto z : id5) {
    CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(z.imag()) <= 1e-14);
  }

  Mat d(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  auto dd = eig_dense(d);
  double big = std::max(std::abs(dd[0]), std::abs(dd[1]));
  CHECK(big == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(eig_dense(Mat(2, 3)), std::invalid_argument);
}

TEST_CASE("eig_dense trace identity and conjugate pairing on a random matrix") {
  const int n = 20;
  Mat a = random_matrix(n, 1234);
  auto ev = eig_dense(a);
  REQUIRE(static_cast<int>(ev.size()) == n);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += a(i, i);
  std::complex<double> sum = 0.0;
  for (auto z : ev) sum += z;
  CHECK(std::abs(sum.real() - trace) <= 1e-9 * std::max(1.0, std::abs(trace)));
  CHECK(std::abs(sum.imag()) <= 1e-9);
  // every strictly complex eigenvalue has a conjugate partner
  for (auto z : ev) {
    if (std::abs(z.imag()) <= 1e-12) continue;
    double best = 1e300;
    for (auto w : ev) best = std::min(best, std::abs(w - std::conj(z)));
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("eig_dense eigenvalues pass an inverse-iteration residual certificate") {
  const int n = 12;
  Mat a = random_matrix(n, 777);
  auto ev = eig_dense(a);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double scale = norm_inf(a);
  for (auto lambda : ev) {
    // (A - lambda I) x = b with random b: ||b|| / ||x|| bounds sigma_min,
    // which is tiny iff lambda is near a true eigenvalue.
    std::vector<std::vector<std::complex<double>>> m(
        n, std::vector<std::complex<double>>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m[i][j] = std::complex<double>(a(i, j)) -
                  (i == j ? lambda : std::complex<double>(0.0));
    std::vector<std::complex<double>> b(n);
    double bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      b[i] = std::complex<double>(dist(rng), dist(rng));
      bnorm = std::max(bnorm, std::abs(b[i]));
    }
    std::vector<std::complex<double>> x = complex_solve(m, b);
    double xnorm = 0.0;
    for (auto& v : x) xnorm = std::max(xnorm, std::abs(v));
    // one more inverse-iteration pass sharpens the certificate
    double xn2 = xnorm;
    {
      std::vector<std::complex<double>> x2 = complex_solve(m, x);
      double n2 = 0.0;
      for (auto& v : x2) n2 = std::max(n2, std::abs(v));
      if (n2 > 0.0) xn2 = n2 / xnorm;
    }
    double sigma_bound = std::min(bnorm / xnorm, 1.0 / xn2);
    CHECK(sigma_bound <= 1e-6 * scale);
  }
}
