#include "fracspec/solver2d.hpp"

#include "fracspec/lagrange.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracspec {

void validate_problem(const Problem2D& p) {
  const ManufacturedCase& c = example_case(p.case_key);
  if (c.dim != 2)
    throw std::invalid_argument("solver2d: case '" + p.case_key +
                                "' is not two-dimensional");
  if (p.n < 2) throw std::invalid_argument("solver2d: need n >= 2");
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    throw std::invalid_argument("solver2d: alpha must lie in (1,2)");
  if (!std::isfinite(p.kappa) || p.kappa < 0.0)
    throw std::invalid_argument("solver2d: kappa must be finite and >= 0");
  if (!std::isfinite(p.nu))
    throw std::invalid_argument("solver2d: nu must be finite");
  if (p.p < 0.0 || p.q < 0.0)
    throw std::invalid_argument("solver2d: p and q must be nonnegative");
  if (std::abs(p.p + p.q - 1.0) > 1e-12)
    throw std::invalid_argument("solver2d: direction weights must sum to 1");
  if (p.m < 1) throw std::invalid_argument("solver2d: m must be >= 1");
  if (!c.zero_source && p.m != c.m)
    throw std::invalid_argument("solver2d: case '" + p.case_key +
                                "' carries source data for m = " +
                                std::to_string(c.m));
  if (!(p.tau > 0.0) || !std::isfinite(p.tau))
    throw std::invalid_argument("solver2d: tau must be positive");
  if (!(p.t_final >= 0.0) || !std::isfinite(p.t_final))
    throw std::invalid_argument("solver2d: t_final must be >= 0");
  double steps = p.t_final / p.tau;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument(
        "solver2d: t_final must be an integer multiple of tau");
  if (!(p.theta >= 0.0 && p.theta <= 1.0))
    throw std::invalid_argument("solver2d: theta must lie in [0,1]");
  if (p.m > 1 && p.theta != 0.5)
    throw std::invalid_argument(
        "solver2d: the nonlinear scheme requires theta = 0.5");
  if (!(p.newton_tol > 0.0))
    throw std::invalid_argument("solver2d: newton_tol must be positive");
  if (p.newton_max_iter < 1)
    throw std::invalid_argument("solver2d: newton_max_iter must be >= 1");
}

namespace {

std::string short_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Per-axis matrices shared by the Kronecker assembly and boundary folding.
struct Axis2D {
  CollocationGrid grid;
  Mat frac;  // kappa*(p*DL + q*DR), full size, interior rows used
  Mat dmat;  // first-order matrix, full size
  bool has_frac = false;
  bool has_adv = false;
};

Axis2D build_axis(const Problem2D& p) {
  Axis2D ax;
  ax.grid = make_grid(p.family, p.n, p.a, p.b);
  const int n = p.n;
  PrecisionMode prec = p.precision ? *p.precision : default_precision(n);
  ax.frac = Mat(n + 1, n + 1);
  if (p.kappa != 0.0 && p.p != 0.0) {
    PowerBasisCoeffs cl = expand_lagrange(ax.grid, Side::Left, prec);
    DiffMatrix left = rl_left_matrix(ax.grid, p.alpha, cl);
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        ax.frac(j, i) += p.kappa * p.p * left.entries(j, i);
    ax.has_frac = true;
  }
  if (p.kappa != 0.0 && p.q != 0.0) {
    PowerBasisCoeffs cr = expand_lagrange(ax.grid, Side::Right, prec);
    DiffMatrix right = rl_right_matrix(ax.grid, p.alpha, cr);
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        ax.frac(j, i) += p.kappa * p.q * right.entries(j, i);
    ax.has_frac = true;
  }
  if (p.nu != 0.0) {
    ax.dmat = first_order_matrix(ax.grid).entries;
    ax.has_adv = true;
  } else {
    ax.dmat = Mat(n + 1, n + 1);
  }
  return ax;
}

Mat interior_block(const Mat& full, int n) {
  Mat b(n - 1, n - 1);
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) b(j - 1, i - 1) = full(j, i);
  return b;
}

KronOperators kron_from_axis(const Axis2D& ax, const Problem2D& p) {
  const int n = p.n;
  const int dim = (n - 1) * (n - 1);
  Mat eye = identity(n - 1);
  KronOperators ops;
  if (ax.has_frac) {
    Mat f = interior_block(ax.frac, n);
    ops.d_f = mat_add(kron(eye, f), kron(f, eye));
  } else {
    ops.d_f = Mat(dim, dim);
  }
  if (ax.has_adv) {
    Mat d = interior_block(ax.dmat, n);
    ops.d_i = mat_scale(mat_add(kron(eye, d), kron(d, eye)), -p.nu);
  } else {
    ops.d_i = Mat(dim, dim);
  }
  ops.m_linear = mat_add(ops.d_f, ops.d_i);
  ops.e = identity(dim);
  return ops;
}

// Time-independent parts of the boundary-folded source: the folded value at
// time t is f(t) + tf(t)^m * bnd_m + tf(t) * bnd_adv.
struct Folding {
  std::vector<double> bnd_m, bnd_adv;
};

Folding make_folding(const Problem2D& p, const ManufacturedCase& c,
                     const Axis2D& ax) {
  const int n = p.n;
  Folding out;
  out.bnd_m.assign(static_cast<size_t>(n - 1) * (n - 1), 0.0);
  out.bnd_adv.assign(out.bnd_m.size(), 0.0);
  if (!c.has_exact) return out;
  std::vector<double> phi(n + 1), phim(n + 1);
  for (int i = 0; i <= n; ++i) {
    phi[i] = c.phi.value(ax.grid.points[i]);
    phim[i] = c.phi_m.value(ax.grid.points[i]);
  }
  for (int s = 1; s < n; ++s)
    for (int r = 1; r < n; ++r) {
      size_t idx = static_cast<size_t>(s - 1) * (n - 1) + (r - 1);
      if (ax.has_frac)
        out.bnd_m[idx] = ax.frac(r, 0) * phim[0] * phim[s] +
                         ax.frac(r, n) * phim[n] * phim[s] +
                         ax.frac(s, 0) * phim[r] * phim[0] +
                         ax.frac(s, n) * phim[r] * phim[n];
      if (ax.has_adv)
        out.bnd_adv[idx] =
            -p.nu * (ax.dmat(r, 0) * phi[0] * phi[s] +
                     ax.dmat(r, n) * phi[n] * phi[s] +
                     ax.dmat(s, 0) * phi[r] * phi[0] +
                     ax.dmat(s, n) * phi[r] * phi[n]);
    }
  return out;
}

std::vector<double> pow_vec(const std::vector<double>& u, int m) {
  if (m == 1) return u;
  std::vector<double> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    double v = u[i];
    double acc = v;
    for (int k = 1; k < m; ++k) acc *= v;
    out[i] = acc;
  }
  return out;
}

// Residual F(u) = u - tau/2 (D_F u^m + D_I u) - b.  When scale_out is given
// it receives the largest componentwise magnitude sum entering any r[i],
// including the |matrix|*|vector| accumulation terms, which bounds the
// max-norm rounding noise of evaluating F at machine precision.
std::vector<double> nonlinear_residual(const KronOperators& ops, int m,
                                       double tau,
                                       const std::vector<double>& b,
                                       const std::vector<double>& u,
                                       double* scale_out = nullptr) {
  std::vector<double> um = pow_vec(u, m);
  std::vector<double> dfu = mat_vec(ops.d_f, um);
  std::vector<double> diu = mat_vec(ops.d_i, u);
  std::vector<double> r(u.size());
  for (size_t i = 0; i < u.size(); ++i)
    r[i] = u[i] - 0.5 * tau * (dfu[i] + diu[i]) - b[i];
  if (scale_out) {
    double scale = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      double af = 0.0, ai = 0.0;
      for (size_t j = 0; j < u.size(); ++j) {
        af += std::abs(ops.d_f(static_cast<int>(i), static_cast<int>(j))) *
              std::abs(um[j]);
        ai += std::abs(ops.d_i(static_cast<int>(i), static_cast<int>(j))) *
              std::abs(u[j]);
      }
      scale = std::max(scale, std::abs(u[i]) + 0.5 * tau * (af + ai) +
                                  std::abs(b[i]));
    }
    *scale_out = scale;
  }
  return r;
}

std::vector<double> newton_solve(const KronOperators& ops, int m, double tau,
                                 const std::vector<double>& b,
                                 std::vector<double> u, double tol,
                                 int max_iter, int* iterations) {
  const int dim = static_cast<int>(u.size());
  int updates = 0;
  double prev_rnorm = std::numeric_limits<double>::infinity();
  for (;;) {
    double scale = 0.0;
    std::vector<double> r = nonlinear_residual(ops, m, tau, b, u, &scale);
    double rnorm = 0.0;
    for (double v : r) rnorm = std::max(rnorm, std::abs(v));
    // Accept on tol, or once the iteration stalls at the rounding floor of
    // the residual evaluation itself (tighter tol is then unattainable).
    double floor = 32.0 * std::numeric_limits<double>::epsilon() * scale;
    if (rnorm <= tol || (rnorm <= floor && rnorm >= 0.25 * prev_rnorm)) {
      if (iterations) *iterations = updates;
      return u;
    }
    if (updates >= max_iter)
      throw std::runtime_error(
          "newton_step_nonlinear: residual " + short_sci(rnorm) +
          " still above tol after " + std::to_string(max_iter) + " updates");
    // J = I - tau/2 (D_I + m * D_F * diag(u^{m-1}))
    std::vector<double> du(dim);
    for (int i = 0; i < dim; ++i)
      du[i] = (m == 1) ? 1.0 : m * std::pow(u[i], m - 1);
    Mat jac(dim, dim);
    for (int row = 0; row < dim; ++row) {
      for (int col = 0; col < dim; ++col)
        jac(row, col) =
            -0.5 * tau * (ops.d_i(row, col) + ops.d_f(row, col) * du[col]);
      jac(row, row) += 1.0;
    }
    LuFactor f = lu_factor(std::move(jac));
    std::vector<double> delta = lu_solve(f, r);
    for (int i = 0; i < dim; ++i) u[i] -= delta[i];
    ++updates;
    prev_rnorm = rnorm;
  }
}

}  // namespace

KronOperators assemble_kron(const Problem2D& p) {
  validate_problem(p);
  return kron_from_axis(build_axis(p), p);
}

std::vector<double> boundary_folded_source(const Problem2D& p, double t) {
  validate_problem(p);
  const ManufacturedCase& c = example_case(p.case_key);
  Axis2D ax = build_axis(p);
  Folding fold = make_folding(p, c, ax);
  SourceEvaluator src(c, ax.grid, SourceParams{p.alpha, p.kappa, p.nu, p.p, p.q},
                      p.quad_points);
  std::vector<double> f = src.interior(t);
  if (c.has_exact) {
    double ft = c.tf(t);
    double ftm = std::pow(ft, p.m);
    for (size_t i = 0; i < f.size(); ++i)
      f[i] += ftm * fold.bnd_m[i] + ft * fold.bnd_adv[i];
  }
  return f;
}

struct Stepper2D::Impl {
  Problem2D prob;
  const ManufacturedCase* mcase;
  Axis2D axis;
  KronOperators ops;
  Folding fold;
  SourceEvaluator src;
  bool nonlinear;
  LuFactor linear_sys;  // (E - theta*tau*M), linear path only
  mutable int last_newton = 0;

  Impl(const Problem2D& p, bool force_nonlinear)
      : prob(p),
        mcase(&example_case(p.case_key)),
        axis(build_axis(p)),
        ops(kron_from_axis(axis, p)),
        fold(make_folding(p, *mcase, axis)),
        src(*mcase, axis.grid, SourceParams{p.alpha, p.kappa, p.nu, p.p, p.q},
            p.quad_points),
        nonlinear(p.m > 1 || force_nonlinear) {
    if (nonlinear && prob.theta != 0.5)
      throw std::invalid_argument(
          "solver2d: the nonlinear scheme requires theta = 0.5");
    if (!nonlinear) {
      const int dim = ops.e.rows;
      Mat lhs(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          lhs(r, c) = ops.e(r, c) - prob.theta * prob.tau * ops.m_linear(r, c);
      linear_sys = lu_factor(std::move(lhs));
    }
  }

  std::vector<double> folded(double t) const {
    std::vector<double> f = src.interior(t);
    if (mcase->has_exact) {
      double ft = mcase->tf(t);
      double ftm = std::pow(ft, prob.m);
      for (size_t i = 0; i < f.size(); ++i)
        f[i] += ftm * fold.bnd_m[i] + ft * fold.bnd_adv[i];
    }
    return f;
  }

  std::vector<double> extract_interior(const std::vector<double>& full) const {
    const int n = prob.n;
    std::vector<double> u(static_cast<size_t>(n - 1) * (n - 1));
    for (int s = 1; s < n; ++s)
      for (int r = 1; r < n; ++r)
        u[static_cast<size_t>(s - 1) * (n - 1) + (r - 1)] =
            full[static_cast<size_t>(s) * (n + 1) + r];
    return u;
  }

  double boundary_value(double x, double y, double t) const {
    return mcase->has_exact ? exact_value_2d(*mcase, x, y, t) : 0.0;
  }

  void write_full(std::vector<double>& full, const std::vector<double>& u,
                  double t) const {
    const int n = prob.n;
    for (int s = 1; s < n; ++s)
      for (int r = 1; r < n; ++r)
        full[static_cast<size_t>(s) * (n + 1) + r] =
            u[static_cast<size_t>(s - 1) * (n - 1) + (r - 1)];
    const std::vector<double>& x = axis.grid.points;
    for (int i = 0; i <= n; ++i) {
      full[i] = boundary_value(x[i], x[0], t);
      full[static_cast<size_t>(n) * (n + 1) + i] = boundary_value(x[i], x[n], t);
      full[static_cast<size_t>(i) * (n + 1)] = boundary_value(x[0], x[i], t);
      full[static_cast<size_t>(i) * (n + 1) + n] = boundary_value(x[n], x[i], t);
    }
  }

  void step(SolutionState& st) const {
    const int n = prob.n;
    if (st.values.size() != static_cast<size_t>(n + 1) * (n + 1))
      throw std::invalid_argument("step: state size does not match the grid");
    const double t0 = st.t, t1 = st.t + prob.tau;
    std::vector<double> u = extract_interior(st.values);
    std::vector<double> f0 = folded(t0), f1 = folded(t1);
    if (!nonlinear) {
      std::vector<double> mu = mat_vec(ops.m_linear, u);
      std::vector<double> rhs(u.size());
      for (size_t i = 0; i < u.size(); ++i)
        rhs[i] = u[i] + (1.0 - prob.theta) * prob.tau * mu[i] +
                 prob.tau * (prob.theta * f1[i] + (1.0 - prob.theta) * f0[i]);
      u = lu_solve(linear_sys, rhs);
      last_newton = 0;
    } else {
      std::vector<double> dfu = mat_vec(ops.d_f, pow_vec(u, prob.m));
      std::vector<double> diu = mat_vec(ops.d_i, u);
      std::vector<double> b(u.size());
      for (size_t i = 0; i < u.size(); ++i)
        b[i] = u[i] + 0.5 * prob.tau * (dfu[i] + diu[i]) +
               0.5 * prob.tau * (f0[i] + f1[i]);
      u = newton_solve(ops, prob.m, prob.tau, b, u, prob.newton_tol,
                       prob.newton_max_iter, &last_newton);
    }
    write_full(st.values, u, t1);
    st.t = t1;
  }
};

Stepper2D::Stepper2D(const Problem2D& p, bool force_nonlinear) {
  validate_problem(p);
  impl_ = std::make_unique<Impl>(p, force_nonlinear);
}

Stepper2D::~Stepper2D() = default;
Stepper2D::Stepper2D(Stepper2D&&) noexcept = default;
Stepper2D& Stepper2D::operator=(Stepper2D&&) noexcept = default;

const CollocationGrid& Stepper2D::grid() const { return impl_->axis.grid; }
const Problem2D& Stepper2D::problem() const { return impl_->prob; }
const KronOperators& Stepper2D::operators() const { return impl_->ops; }
int Stepper2D::last_newton_iterations() const { return impl_->last_newton; }

SolutionState Stepper2D::initial() const {
  const int n = impl_->prob.n;
  const std::vector<double>& x = impl_->axis.grid.points;
  SolutionState st;
  st.t = 0.0;
  st.values.resize(static_cast<size_t>(n + 1) * (n + 1));
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= n; ++r)
      st.values[static_cast<size_t>(s) * (n + 1) + r] =
          initial_value_2d(*impl_->mcase, x[r], x[s]);
  return st;
}

void Stepper2D::step(SolutionState& state) const { impl_->step(state); }

SolutionState step_linear_2d(const Problem2D& p, const SolutionState& state,
                             const KronOperators& ops,
                             const std::vector<double>& f_prev,
                             const std::vector<double>& f_next) {
  validate_problem(p);
  const ManufacturedCase& c = example_case(p.case_key);
  const int n = p.n;
  if (state.values.size() != static_cast<size_t>(n + 1) * (n + 1))
    throw std::invalid_argument("step_linear_2d: state size mismatch");
  const int dim = (n - 1) * (n - 1);
  if (ops.m_linear.rows != dim || ops.m_linear.cols != dim)
    throw std::invalid_argument("step_linear_2d: operator size mismatch");
  if (static_cast<int>(f_prev.size()) != dim ||
      static_cast<int>(f_next.size()) != dim)
    throw std::invalid_argument("step_linear_2d: source size mismatch");
  CollocationGrid grid = make_grid(p.family, p.n, p.a, p.b);
  std::vector<double> u(dim);
  for (int s = 1; s < n; ++s)
    for (int r = 1; r < n; ++r)
      u[static_cast<size_t>(s - 1) * (n - 1) + (r - 1)] =
          state.values[static_cast<size_t>(s) * (n + 1) + r];
  Mat lhs(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int col = 0; col < dim; ++col)
      lhs(r, col) = ops.e(r, col) - p.theta * p.tau * ops.m_linear(r, col);
  std::vector<double> mu = mat_vec(ops.m_linear, u);
  std::vector<double> rhs(dim);
  for (int i = 0; i < dim; ++i)
    rhs[i] = u[i] + (1.0 - p.theta) * p.tau * mu[i] +
             p.tau * (p.theta * f_next[i] + (1.0 - p.theta) * f_prev[i]);
  LuFactor f = lu_factor(std::move(lhs));
  u = lu_solve(f, rhs);
  SolutionState next;
  next.t = state.t + p.tau;
  next.values.assign(static_cast<size_t>(n + 1) * (n + 1), 0.0);
  for (int s = 1; s < n; ++s)
    for (int r = 1; r < n; ++r)
      next.values[static_cast<size_t>(s) * (n + 1) + r] =
          u[static_cast<size_t>(s - 1) * (n - 1) + (r - 1)];
  if (c.has_exact) {
    const std::vector<double>& x = grid.points;
    for (int i = 0; i <= n; ++i) {
      next.values[i] = exact_value_2d(c, x[i], x[0], next.t);
      next.values[static_cast<size_t>(n) * (n + 1) + i] =
          exact_value_2d(c, x[i], x[n], next.t);
      next.values[static_cast<size_t>(i) * (n + 1)] =
          exact_value_2d(c, x[0], x[i], next.t);
      next.values[static_cast<size_t>(i) * (n + 1) + n] =
          exact_value_2d(c, x[n], x[i], next.t);
    }
  }
  return next;
}

std::vector<double> newton_step_nonlinear(const Problem2D& p,
                                          const std::vector<double>& u_prev,
                                          const KronOperators& ops,
                                          const std::vector<double>& f_prev,
                                          const std::vector<double>& f_next,
                                          double tol, int max_iter,
                                          int* iterations) {
  validate_problem(p);
  if (!(tol > 0.0))
    throw std::invalid_argument("newton_step_nonlinear: tol must be positive");
  if (max_iter < 1)
    throw std::invalid_argument("newton_step_nonlinear: max_iter must be >= 1");
  const int dim = (p.n - 1) * (p.n - 1);
  if (static_cast<int>(u_prev.size()) != dim ||
      static_cast<int>(f_prev.size()) != dim ||
      static_cast<int>(f_next.size()) != dim)
    throw std::invalid_argument("newton_step_nonlinear: size mismatch");
  std::vector<double> dfu = mat_vec(ops.d_f, pow_vec(u_prev, p.m));
  std::vector<double> diu = mat_vec(ops.d_i, u_prev);
  std::vector<double> b(u_prev.size());
  for (size_t i = 0; i < u_prev.size(); ++i)
    b[i] = u_prev[i] + 0.5 * p.tau * (dfu[i] + diu[i]) +
           0.5 * p.tau * (f_prev[i] + f_next[i]);
  return newton_solve(ops, p.m, p.tau, b, u_prev, tol, max_iter, iterations);
}

Mat iteration_matrix_2d(const Problem2D& p) {
  validate_problem(p);
  KronOperators ops = assemble_kron(p);
  const int dim = ops.e.rows;
  Mat lhs(dim, dim), rhs(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      double e = ops.e(r, c);
      lhs(r, c) = e - p.theta * p.tau * ops.m_linear(r, c);
      rhs(r, c) = e + (1.0 - p.theta) * p.tau * ops.m_linear(r, c);
    }
  LuFactor f = lu_factor(std::move(lhs));
  Mat g(dim, dim);
  std::vector<double> col(dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) col[r] = rhs(r, c);
    std::vector<double> x = lu_solve(f, col);
    for (int r = 0; r < dim; ++r) g(r, c) = x[r];
  }
  return g;
}

Solution2D solve_2d(const Problem2D& p,
                    const std::vector<double>& snapshot_times) {
  Stepper2D stepper(p);
  const long steps = std::lround(p.t_final / p.tau);
  for (double s : snapshot_times) {
    long k = std::lround(s / p.tau);
    if (k < 0 || k > steps ||
        std::abs(s - static_cast<double>(k) * p.tau) > 1e-9)
      throw std::invalid_argument("solve_2d: snapshot time " +
                                  std::to_string(s) +
                                  " is not on the time grid");
  }
  Solution2D out;
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
    st.t = static_cast<double>(k + 1) * p.tau;
    capture(st);
  }
  out.final_state = st;
  return out;
}

}  // namespace fracspec
