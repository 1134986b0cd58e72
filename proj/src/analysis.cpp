#include "fracspec/analysis.hpp"

#include "fracspec/solver1d.hpp"
#include "fracspec/solver2d.hpp"
#include "fracspec/source_oracle.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace fracspec {

ErrorNorms error_norms(const std::vector<double>& numeric,
                       const std::vector<double>& exact,
                       const std::vector<double>& weights) {
  if (numeric.size() != exact.size() || numeric.size() != weights.size())
    throw std::invalid_argument("error_norms: length mismatch");
  ErrorNorms out;
  double sum = 0.0;
  for (size_t i = 0; i < numeric.size(); ++i) {
    double d = numeric[i] - exact[i];
    out.l_inf = std::max(out.l_inf, std::abs(d));
    sum += d * d * weights[i];
  }
  out.l2 = std::sqrt(sum);
  return out;
}

std::vector<double> norm_weights_1d(const CollocationGrid& grid) {
  if (grid.family == GridFamily::Legendre) return grid.weights;
  double w = (grid.b - grid.a) / static_cast<double>(grid.n + 1);
  return std::vector<double>(grid.n + 1, w);
}

std::vector<double> norm_weights_2d(const CollocationGrid& grid) {
  std::vector<double> w1 = norm_weights_1d(grid);
  const int n1 = grid.n + 1;
  std::vector<double> w(static_cast<size_t>(n1) * n1);
  for (int s = 0; s < n1; ++s)
    for (int r = 0; r < n1; ++r)
      w[static_cast<size_t>(s) * n1 + r] = w1[r] * w1[s];
  return w;
}

namespace {

ConvergenceRow run_cell(const SweepSpec& spec, double alpha, int n) {
  const ManufacturedCase& c = example_case(spec.case_key);
  ConvergenceRow row;
  row.n = n;
  if (c.dim == 1) {
    Problem1D p;
    p.case_key = spec.case_key;
    p.family = spec.family;
    p.n = n;
    p.a = spec.a;
    p.b = spec.b;
    p.alpha = alpha;
    p.kappa = spec.kappa;
    p.nu = spec.nu;
    p.p = spec.p;
    p.q = spec.q;
    p.tau = spec.tau;
    p.t_final = spec.t_final;
    p.theta = spec.theta;
    p.precision = spec.precision;
    p.quad_points = spec.quad_points;
    Solution1D sol = solve_1d(p);
    std::vector<double> exact(n + 1);
    for (int i = 0; i <= n; ++i)
      exact[i] = exact_value_1d(c, sol.grid.points[i], spec.t_final);
    ErrorNorms e = error_norms(sol.final_state.values, exact,
                               norm_weights_1d(sol.grid));
    row.l_inf = e.l_inf;
    row.l2 = e.l2;
  } else {
    Problem2D p;
    p.case_key = spec.case_key;
    p.family = spec.family;
    p.n = n;
    p.a = spec.a;
    p.b = spec.b;
    p.alpha = alpha;
    p.kappa = spec.kappa;
    p.nu = spec.nu;
    p.p = spec.p;
    p.q = spec.q;
    p.m = c.m;
    p.tau = spec.tau;
    p.t_final = spec.t_final;
    p.theta = spec.theta;
    p.precision = spec.precision;
    p.quad_points = spec.quad_points;
    Solution2D sol = solve_2d(p);
    std::vector<double> exact(sol.final_state.values.size());
    for (int s = 0; s <= n; ++s)
      for (int r = 0; r <= n; ++r)
        exact[static_cast<size_t>(s) * (n + 1) + r] = exact_value_2d(
            c, sol.grid.points[r], sol.grid.points[s], spec.t_final);
    ErrorNorms e = error_norms(sol.final_state.values, exact,
                               norm_weights_2d(sol.grid));
    row.l_inf = e.l_inf;
    row.l2 = e.l2;
  }
  return row;
}

}  // namespace

std::vector<ConvergenceTable> convergence_sweep(const SweepSpec& spec) {
  const ManufacturedCase& c = example_case(spec.case_key);
  if (!c.has_exact)
    throw std::invalid_argument(
        "convergence_sweep: case has no exact solution to compare against");
  if (spec.alphas.empty())
    throw std::invalid_argument("convergence_sweep: alpha list is empty");
  if (spec.degrees.empty())
    throw std::invalid_argument("convergence_sweep: degree list is empty");
  for (size_t i = 1; i < spec.degrees.size(); ++i)
    if (spec.degrees[i] <= spec.degrees[i - 1])
      throw std::invalid_argument(
          "convergence_sweep: degrees must be strictly increasing");
  if (spec.jobs < 1)
    throw std::invalid_argument("convergence_sweep: jobs must be >= 1");

  std::vector<ConvergenceTable> tables(spec.alphas.size());
  for (size_t ai = 0; ai < spec.alphas.size(); ++ai) {
    tables[ai].case_key = spec.case_key;
    tables[ai].family = spec.family;
    tables[ai].alpha = spec.alphas[ai];
    tables[ai].tau = spec.tau;
    tables[ai].t_final = spec.t_final;
    tables[ai].rows.resize(spec.degrees.size());
  }

  struct Cell {
    size_t ai, ni;
  };
  std::vector<Cell> cells;
  for (size_t ai = 0; ai < spec.alphas.size(); ++ai)
    for (size_t ni = 0; ni < spec.degrees.size(); ++ni)
      cells.push_back({ai, ni});

  const int workers =
      std::min<int>(spec.jobs, static_cast<int>(cells.size()));
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  auto work = [&]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      const Cell& cell = cells[k];
      try {
        tables[cell.ai].rows[cell.ni] =
            run_cell(spec, spec.alphas[cell.ai], spec.degrees[cell.ni]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return tables;
}

double fitted_slope(const ConvergenceTable& table, double floor) {
  std::vector<double> xs, ys;
  for (const ConvergenceRow& r : table.rows)
    if (r.l2 > floor) {
      xs.push_back(r.n);
      ys.push_back(std::log10(r.l2));
    }
  if (xs.size() < 2)
    throw std::invalid_argument(
        "fitted_slope: need at least two rows above the floor");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

Spectrum eigenvalues_dense(const Mat& a, const std::string& source) {
  if (a.rows != a.cols)
    throw std::invalid_argument("eigenvalues_dense: matrix must be square");
  for (double v : a.data)
    if (!std::isfinite(v))
      throw std::invalid_argument("eigenvalues_dense: non-finite entry");
  Spectrum s;
  s.eigenvalues = eig_dense(a);
  s.source = source;
  return s;
}

double spectral_radius(const Mat& a) {
  double r = 0.0;
  for (const std::complex<double>& z : eigenvalues_dense(a).eigenvalues)
    r = std::max(r, std::abs(z));
  return r;
}

}  // namespace fracspec
