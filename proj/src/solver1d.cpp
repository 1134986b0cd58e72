#include "fracspec/solver1d.hpp"

#include "fracspec/lagrange.hpp"
#include "fracspec/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracspec {

std::pair<double, double> levy_feller_pq(double alpha, double vartheta) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("levy_feller_pq: alpha must lie in (1,2)");
  if (!(std::abs(vartheta) < 2.0 - alpha))
    throw std::invalid_argument(
        "levy_feller_pq: skewness must satisfy |vartheta| < 2 - alpha");
  double s = std::sin(alpha * M_PI);
  double p = -std::sin((alpha - vartheta) * M_PI / 2.0) / s;
  double q = -std::sin((alpha + vartheta) * M_PI / 2.0) / s;
  return {p, q};
}

void validate_problem(const Problem1D& p) {
  const ManufacturedCase& c = example_case(p.case_key);
  if (c.dim != 1)
    throw std::invalid_argument("solver1d: case '" + p.case_key +
                                "' is not one-dimensional");
  if (p.n < 2) throw std::invalid_argument("solver1d: need n >= 2");
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    throw std::invalid_argument("solver1d: alpha must lie in (1,2)");
  if (!std::isfinite(p.kappa) || p.kappa < 0.0)
    throw std::invalid_argument("solver1d: kappa must be finite and >= 0");
  if (!std::isfinite(p.nu))
    throw std::invalid_argument("solver1d: nu must be finite");
  if (p.p < 0.0 || p.q < 0.0)
    throw std::invalid_argument("solver1d: p and q must be nonnegative");
  if (!p.levy_mode && std::abs(p.p + p.q - 1.0) > 1e-12)
    throw std::invalid_argument("solver1d: direction weights must sum to 1");
  if (!(p.tau > 0.0) || !std::isfinite(p.tau))
    throw std::invalid_argument("solver1d: tau must be positive");
  if (!(p.t_final >= 0.0) || !std::isfinite(p.t_final))
    throw std::invalid_argument("solver1d: t_final must be >= 0");
  double steps = p.t_final / p.tau;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument(
        "solver1d: t_final must be an integer multiple of tau");
  if (!(p.theta >= 0.0 && p.theta <= 1.0))
    throw std::invalid_argument("solver1d: theta must lie in [0,1]");
}

namespace {

struct Discretization {
  CollocationGrid grid;
  Mat a_interior;                      // (n-1) x (n+1)
  std::vector<double> d_row0, d_rown;  // first-derivative closure rows
};

Discretization discretize(const Problem1D& p) {
  const ManufacturedCase& c = example_case(p.case_key);
  Discretization d;
  d.grid = make_grid(p.family, p.n, p.a, p.b);
  const int n = p.n;
  d.a_interior = Mat(n - 1, n + 1);
  PrecisionMode prec = p.precision ? *p.precision : default_precision(n);

  if (p.kappa != 0.0 && p.p != 0.0) {
    PowerBasisCoeffs cl = expand_lagrange(d.grid, Side::Left, prec);
    DiffMatrix left = rl_left_matrix(d.grid, p.alpha, cl);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i <= n; ++i)
        d.a_interior(j - 1, i) += p.kappa * p.p * left.entries(j, i);
  }
  if (p.kappa != 0.0 && p.q != 0.0) {
    PowerBasisCoeffs cr = expand_lagrange(d.grid, Side::Right, prec);
    DiffMatrix right = rl_right_matrix(d.grid, p.alpha, cr);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i <= n; ++i)
        d.a_interior(j - 1, i) += p.kappa * p.q * right.entries(j, i);
  }
  bool robin = (c.bc_b1 != 0.0 || c.bc_b2 != 0.0);
  if (p.nu != 0.0 || robin) {
    DiffMatrix d1 = first_order_matrix(d.grid);
    if (p.nu != 0.0)
      for (int j = 1; j < n; ++j)
        for (int i = 0; i <= n; ++i)
          d.a_interior(j - 1, i) -= p.nu * d1.entries(j, i);
    d.d_row0.assign(n + 1, 0.0);
    d.d_rown.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
      d.d_row0[i] = d1.entries(0, i);
      d.d_rown[i] = d1.entries(n, i);
    }
  }
  return d;
}

}  // namespace

Mat assemble_operator_1d(const Problem1D& p) {
  validate_problem(p);
  return discretize(p).a_interior;
}

Mat iteration_matrix_1d(const Problem1D& p) {
  validate_problem(p);
  Discretization d = discretize(p);
  const int m = p.n - 1;
  Mat lhs(m, m), rhs(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      double e = (i == j) ? 1.0 : 0.0;
      double a = d.a_interior(j, i + 1);  // Dirichlet: drop boundary columns
      lhs(j, i) = e - p.theta * p.tau * a;
      rhs(j, i) = e + (1.0 - p.theta) * p.tau * a;
    }
  LuFactor f = lu_factor(lhs);
  Mat g(m, m);
  std::vector<double> col(m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) col[r] = rhs(r, c);
    std::vector<double> x = lu_solve(f, col);
    for (int r = 0; r < m; ++r) g(r, c) = x[r];
  }
  return g;
}

struct Stepper1D::Impl {
  Problem1D prob;
  const ManufacturedCase* mcase;
  Discretization disc;
  SourceEvaluator src;
  LuFactor sys;

  explicit Impl(const Problem1D& p)
      : prob(p),
        mcase(&example_case(p.case_key)),
        disc(discretize(p)),
        src(*mcase, disc.grid, SourceParams{p.alpha, p.kappa, p.nu, p.p, p.q},
            p.quad_points) {
    sys = lu_factor(build_system());
  }

  Mat build_system() const {
    const int n = prob.n;
    Mat m(n + 1, n + 1);
    m(0, 0) = mcase->bc_a1;
    m(n, n) = mcase->bc_a2;
    if (mcase->bc_b1 != 0.0)
      for (int i = 0; i <= n; ++i) m(0, i) -= mcase->bc_b1 * disc.d_row0[i];
    if (mcase->bc_b2 != 0.0)
      for (int i = 0; i <= n; ++i) m(n, i) += mcase->bc_b2 * disc.d_rown[i];
    double w = prob.theta * prob.tau;
    for (int j = 1; j < n; ++j) {
      m(j, j) += 1.0;
      for (int i = 0; i <= n; ++i) m(j, i) -= w * disc.a_interior(j - 1, i);
    }
    return m;
  }

  double g1(double t) const {
    if (!mcase->has_exact) return 0.0;
    double ft = mcase->tf(t);
    return mcase->bc_a1 * ft * mcase->phi.value(prob.a) -
           mcase->bc_b1 * ft * mcase->phi.d1(prob.a);
  }

  double g2(double t) const {
    if (!mcase->has_exact) return 0.0;
    double ft = mcase->tf(t);
    return mcase->bc_a2 * ft * mcase->phi.value(prob.b) +
           mcase->bc_b2 * ft * mcase->phi.d1(prob.b);
  }

  void step(SolutionState& st) const {
    const int n = prob.n;
    if (static_cast<int>(st.values.size()) != n + 1)
      throw std::invalid_argument("step: state size does not match the grid");
    const double t0 = st.t, t1 = st.t + prob.tau;
    std::vector<double> rhs(n + 1, 0.0);
    rhs[0] = g1(t1);
    rhs[n] = g2(t1);
    std::vector<double> au = mat_vec(disc.a_interior, st.values);
    std::vector<double> f0, f1;
    if (prob.theta < 1.0) f0 = src.interior(t0);
    if (prob.theta > 0.0) f1 = src.interior(t1);
    for (int j = 1; j < n; ++j) {
      double f = 0.0;
      if (prob.theta > 0.0) f += prob.theta * f1[j - 1];
      if (prob.theta < 1.0) f += (1.0 - prob.theta) * f0[j - 1];
      rhs[j] = st.values[j] + (1.0 - prob.theta) * prob.tau * au[j - 1] +
               prob.tau * f;
    }
    st.values = lu_solve(sys, rhs);
    st.t = t1;
  }

  std::pair<double, double> residuals(const SolutionState& st) const {
    const int n = prob.n;
    double du0 = 0.0, dun = 0.0;
    if (!disc.d_row0.empty())
      for (int i = 0; i <= n; ++i) {
        du0 += disc.d_row0[i] * st.values[i];
        dun += disc.d_rown[i] * st.values[i];
      }
    double r1 = mcase->bc_a1 * st.values[0] - mcase->bc_b1 * du0 - g1(st.t);
    double r2 = mcase->bc_a2 * st.values[n] + mcase->bc_b2 * dun - g2(st.t);
    return {r1, r2};
  }
};

Stepper1D::Stepper1D(const Problem1D& p) {
  validate_problem(p);
  impl_ = std::make_unique<Impl>(p);
}

Stepper1D::~Stepper1D() = default;
Stepper1D::Stepper1D(Stepper1D&&) noexcept = default;
Stepper1D& Stepper1D::operator=(Stepper1D&&) noexcept = default;

const CollocationGrid& Stepper1D::grid() const { return impl_->disc.grid; }
const Problem1D& Stepper1D::problem() const { return impl_->prob; }

SolutionState Stepper1D::initial() const {
  SolutionState st;
  st.t = 0.0;
  st.values.resize(impl_->prob.n + 1);
  for (int i = 0; i <= impl_->prob.n; ++i)
    st.values[i] = initial_value_1d(*impl_->mcase, impl_->disc.grid.points[i]);
  return st;
}

void Stepper1D::step(SolutionState& state) const { impl_->step(state); }

std::pair<double, double> Stepper1D::boundary_residuals(
    const SolutionState& state) const {
  return impl_->residuals(state);
}

SolutionState step_theta(const Stepper1D& stepper, const SolutionState& state) {
  SolutionState next = state;
  stepper.step(next);
  return next;
}

Solution1D solve_1d(const Problem1D& p,
                    const std::vector<double>& snapshot_times) {
  Stepper1D stepper(p);
  const long steps = std::lround(p.t_final / p.tau);
  for (double s : snapshot_times) {
    long k = std::lround(s / p.tau);
    if (k < 0 || k > steps || std::abs(s - static_cast<double>(k) * p.tau) > 1e-9)
      throw std::invalid_argument("solve_1d: snapshot time " +
                                  std::to_string(s) +
                                  " is not on the time grid");
  }
  Solution1D out;
  out.grid = stepper.grid();
  SolutionState st = stepper.initial();
  auto capture = [&](const SolutionState& s) {
    for (double want : snapshot_times)
      if (std::abs(s.t - want) <= 1e-9) {
        out.snapshot_times.push_back(s.t);
        out.snapshots.push_back(s.values);
        break;
      }
  };
  capture(st);
  for (long k = 0; k < steps; ++k) {
    stepper.step(st);
    // keep the clock exactly on the grid; accumulated t0+tau sums drift
    st.t = static_cast<double>(k + 1) * p.tau;
    capture(st);
  }
  out.final_state = st;
  return out;
}

}  // namespace fracspec
