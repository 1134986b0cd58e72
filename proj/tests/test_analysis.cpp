#include "fracspec/analysis.hpp"

#include "fracspec/solver1d.hpp"
#include "fracspec/solver2d.hpp"
#include "fracspec/source_oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

using namespace fracspec;

TEST_CASE("error norms: frozen case, homogeneity, and validation") {
  std::vector<double> num = {1.0, 2.0, 3.0};
  std::vector<double> exact = {1.0, 1.0, 3.0};
  std::vector<double> w = {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
  ErrorNorms e = error_norms(num, exact, w);
  CHECK(e.l_inf == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.l2 == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));

  ErrorNorms zero = error_norms(exact, exact, w);
  CHECK(zero.l_inf == 0.0);
  CHECK(zero.l2 == 0.0);

  // scaling the discrepancy scales both norms linearly
  std::vector<double> num5 = {1.0, 6.0, 3.0};  // 5x the difference
  ErrorNorms e5 = error_norms(num5, exact, w);
  CHECK(e5.l_inf == doctest::Approx(5.0 * e.l_inf).epsilon(1e-14));
  CHECK(e5.l2 == doctest::Approx(5.0 * e.l2).epsilon(1e-14));

  std::vector<double> short_w = {1.0, 1.0};
  CHECK_THROWS_AS(error_norms(num, exact, short_w), std::invalid_argument);
  std::vector<double> short_e = {1.0, 1.0};
  CHECK_THROWS_AS(error_norms(num, short_e, w), std::invalid_argument);
}

TEST_CASE("norm weights follow the grid family") {
  CollocationGrid leg = make_grid(GridFamily::Legendre, 8, -1.0, 3.0);
  std::vector<double> wl = norm_weights_1d(leg);
  REQUIRE(wl.size() == 9);
  for (int i = 0; i <= 8; ++i) CHECK(wl[i] == leg.weights[i]);

  CollocationGrid che = make_grid(GridFamily::Chebyshev, 8, -1.0, 3.0);
  std::vector<double> wc = norm_weights_1d(che);
  for (int i = 0; i <= 8; ++i)
    CHECK(wc[i] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));

  std::vector<double> w2 = norm_weights_2d(leg);
  REQUIRE(w2.size() == 81);
  double sum = 0.0;
  for (int s = 0; s <= 8; ++s)
    for (int r = 0; r <= 8; ++r) {
      CHECK(w2[s * 9 + r] == doctest::Approx(wl[r] * wl[s]).epsilon(1e-14));
      sum += w2[s * 9 + r];
    }
  CHECK(sum == doctest::Approx(16.0).epsilon(1e-13));  // (b-a)^2
}

TEST_CASE("convergence sweep tabulates per-alpha solver runs") {
  SweepSpec spec;
  spec.alphas = {1.3, 1.7};
  spec.degrees = {4, 6};
  std::vector<ConvergenceTable> tables = convergence_sweep(spec);
  REQUIRE(tables.size() == 2);
  for (size_t a = 0; a < tables.size(); ++a) {
    const ConvergenceTable& t = tables[a];
    CHECK(t.case_key == "ex1");
    CHECK(t.family == GridFamily::Legendre);
    CHECK(t.alpha == spec.alphas[a]);
    CHECK(t.tau == spec.tau);
    CHECK(t.t_final == spec.t_final);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].n == 4);
    CHECK(t.rows[1].n == 6);
    for (const ConvergenceRow& r : t.rows) {
      CHECK(r.l_inf > 0.0);
      CHECK(r.l2 > 0.0);
      CHECK(std::isfinite(r.l2));
    }
  }

  // one cell cross-checked against a direct solver run
  Problem1D p;
  p.alpha = 1.3;
  p.n = 6;
  Solution1D sol = solve_1d(p);
  const ManufacturedCase& c = example_case("ex1");
  std::vector<double> exact(p.n + 1);
  for (int i = 0; i <= p.n; ++i)
    exact[i] = exact_value_1d(c, sol.grid.points[i], 1.0);
  ErrorNorms e =
      error_norms(sol.final_state.values, exact, norm_weights_1d(sol.grid));
  CHECK(std::abs(tables[0].rows[1].l_inf - e.l_inf) <= 1e-14);
  CHECK(std::abs(tables[0].rows[1].l2 - e.l2) <= 1e-14);

  // errors fall as the degree grows (both columns)
  CHECK(tables[0].rows[1].l_inf < tables[0].rows[0].l_inf);
  CHECK(tables[0].rows[1].l2 < tables[0].rows[0].l2);
}

TEST_CASE("convergence sweep output does not depend on the thread count") {
  SweepSpec spec;
  spec.alphas = {1.5};
  spec.degrees = {4, 6, 8};
  spec.jobs = 1;
  std::vector<ConvergenceTable> serial = convergence_sweep(spec);
  spec.jobs = 4;
  std::vector<ConvergenceTable> parallel = convergence_sweep(spec);
  REQUIRE(serial.size() == parallel.size());
  for (size_t t = 0; t < serial.size(); ++t)
    for (size_t r = 0; r < serial[t].rows.size(); ++r) {
      CHECK(serial[t].rows[r].l_inf == parallel[t].rows[r].l_inf);
      CHECK(serial[t].rows[r].l2 == parallel[t].rows[r].l2);
    }
}

TEST_CASE("convergence sweep dispatches two-dimensional cases") {
  SweepSpec spec;
  spec.case_key = "ex3";
  spec.alphas = {1.5};
  spec.degrees = {4, 6};
  std::vector<ConvergenceTable> tables = convergence_sweep(spec);
  REQUIRE(tables.size() == 1);
  REQUIRE(tables[0].rows.size() == 2);
  CHECK(tables[0].rows[1].l2 < tables[0].rows[0].l2);

  SweepSpec bad = spec;
  bad.degrees = {};
  CHECK_THROWS_AS(convergence_sweep(bad), std::invalid_argument);
}

TEST_CASE("fitted slope recovers a synthetic decay rate") {
  ConvergenceTable t;
  for (int n : {4, 6, 8, 10}) {
    ConvergenceRow r;
    r.n = n;
    r.l2 = std::pow(10.0, -0.8 * n);
    r.l_inf = r.l2;
    t.rows.push_back(r);
  }
  CHECK(fitted_slope(t) == doctest::Approx(-0.8).epsilon(1e-12));

  // rows at the precision floor are excluded from the fit
  ConvergenceRow floor_row;
  floor_row.n = 12;
  floor_row.l2 = 5e-14;
  floor_row.l_inf = 5e-14;
  t.rows.push_back(floor_row);
  CHECK(fitted_slope(t, 1e-13) == doctest::Approx(-0.8).epsilon(1e-12));

  ConvergenceTable too_small;
  ConvergenceRow only;
  only.n = 4;
  only.l2 = 1e-3;
  too_small.rows.push_back(only);
  CHECK_THROWS_AS(fitted_slope(too_small), std::invalid_argument);

  ConvergenceTable all_floor = t;
  for (ConvergenceRow& r : all_floor.rows) r.l2 = 1e-15;
  CHECK_THROWS_AS(fitted_slope(all_floor), std::invalid_argument);
}

TEST_CASE("dense eigenvalues: frozen spectra and invariants") {
  Spectrum s = eigenvalues_dense(identity(5), "eye");
  CHECK(s.source == "eye");
  REQUIRE(s.eigenvalues.size() == 5);
  for (const std::complex<double>& z : s.eigenvalues) {
    CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(z.imag()) <= 1e-12);
  }

  Mat rot(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  Spectrum sr = eigenvalues_dense(rot);
  REQUIRE(sr.eigenvalues.size() == 2);
  double worst = 1e9;
  for (const std::complex<double>& z : sr.eigenvalues)
    worst = std::min(worst, std::abs(z - std::complex<double>(0.0, 1.0)));
  CHECK(worst <= 1e-12);

  // trace and conjugate pairing on a random matrix
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat a(12, 12);
  double tr = 0.0;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) a(i, j) = dist(rng);
    tr += a(i, i);
  }
  std::vector<std::complex<double>> eig = eig_dense(a);
  REQUIRE(eig.size() == 12);
  std::complex<double> sum = 0.0;
  for (const std::complex<double>& z : eig) sum += z;
  CHECK(sum.real() == doctest::Approx(tr).epsilon(1e-9));
  CHECK(std::abs(sum.imag()) <= 1e-9);
  for (const std::complex<double>& z : eig) {
    if (std::abs(z.imag()) < 1e-12) continue;
    double best = 1e9;
    for (const std::complex<double>& w : eig)
      best = std::min(best, std::abs(w - std::conj(z)));
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("spectral radius: diagonal case and non-square rejection") {
  Mat d(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  d(2, 2) = 0.1;
  CHECK(spectral_radius(d) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spectral_radius(identity(4)) == doctest::Approx(1.0).epsilon(1e-12));

  Mat rect(2, 3);
  CHECK_THROWS_AS(spectral_radius(rect), std::invalid_argument);
}

TEST_CASE("crank-nicolson iteration matrices are power bounded") {
  Problem1D p1;  // ex1, alpha 1.5, tau 0.1, theta 0.5
  p1.n = 6;
  double rho6 = spectral_radius(iteration_matrix_1d(p1));
  CHECK(rho6 >= 0.8);
  CHECK(rho6 <= 0.87);
  p1.n = 12;
  double rho12 = spectral_radius(iteration_matrix_1d(p1));
  CHECK(rho12 >= 0.8);
  CHECK(rho12 <= 0.87);

  Problem2D p2;  // ex3 parameters, same operator structure
  p2.n = 10;
  double rho2d = spectral_radius(iteration_matrix_2d(p2));
  CHECK(rho2d >= 0.6);
  CHECK(rho2d <= 0.75);
}
