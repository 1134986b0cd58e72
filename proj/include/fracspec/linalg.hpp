#pragma once

#include <complex>
#include <vector>

namespace fracspec {

// Dense row-major matrix of doubles.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

Mat mat_mul(const Mat& a, const Mat& b);
std::vector<double> mat_vec(const Mat& a, const std::vector<double>& x);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_scale(const Mat& a, double s);
Mat identity(int n);
// max row sum of absolute values
double norm_inf(const Mat& a);

// Kronecker product a (x) b
Mat kron(const Mat& a, const Mat& b);

// LU factorization with partial pivoting, P*A = L*U.
struct LuFactor {
  Mat lu;
  std::vector<int> perm;
};

LuFactor lu_factor(Mat a);
std::vector<double> lu_solve(const LuFactor& f, std::vector<double> b);

// Eigenvalues of a general real matrix: balance, Householder reduction to
// Hessenberg form, then Francis double-shift QR.  Throws std::runtime_error
// if the QR iteration fails to converge within max_iter sweeps per eigenvalue.
std::vector<std::complex<double>> eig_dense(Mat a, int max_iter = 30);

}  // namespace fracspec
