#pragma once

#include "fracspec/fracmat.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/solver1d.hpp"
#include "fracspec/source_oracle.hpp"

#include <memory>
#include <optional>

namespace fracspec {

// Two-dimensional problem on the square [a,b]^2 with the same collocation
// grid along both axes:
//   u_t = kappa*(p*(DLx+DLy) + q*(DRx+DRy)) u^m - nu*(u_x + u_y) + f
// Dirichlet boundary data, the initial profile, and the source all come from
// the named catalog case.  theta applies to the linear path (m = 1); the
// nonlinear path is Crank-Nicolson, so it requires theta = 0.5.
struct Problem2D {
  std::string case_key = "ex3";
  GridFamily family = GridFamily::Legendre;
  int n = 10;
  double a = -1.0, b = 1.0;
  double alpha = 1.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  int m = 1;  // nonlinearity power; must match the catalog case
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  std::optional<PrecisionMode> precision;
  int quad_points = 0;
  double newton_tol = 1e-12;
  int newton_max_iter = 25;
};

// Interior operators of size (n-1)^2, unknowns ordered with the x index
// fastest: idx = (s-1)*(n-1) + (r-1) for (x_r, y_s).
struct KronOperators {
  Mat m_linear;  // d_f + d_i
  Mat d_f;       // fractional part; acts on u^[m]
  Mat d_i;       // advection part, sign included; acts on u
  Mat e;         // identity
};

void validate_problem(const Problem2D& p);

KronOperators assemble_kron(const Problem2D& p);

// Source samples at interior points plus the boundary-column terms of the
// discrete operators applied to the known boundary data at time t.
std::vector<double> boundary_folded_source(const Problem2D& p, double t);

// One theta step of the linear (m = 1) scheme.  States hold the full
// (n+1)^2 grid with the x index fastest; boundary entries are refreshed from
// the exact boundary data at the new time.
SolutionState step_linear_2d(const Problem2D& p, const SolutionState& state,
                             const KronOperators& ops,
                             const std::vector<double>& f_prev,
                             const std::vector<double>& f_next);

// Crank-Nicolson step of the nonlinear scheme: solves
//   (E - tau/2 D_I) U - tau/2 D_F U^[m] = b(U^k, f)
// by Newton iteration with the analytic Jacobian, starting from U^k.
// u_prev, f_prev, f_next and the result are interior vectors.  Throws
// std::runtime_error when the residual max-norm stays above tol after
// max_iter updates.  iterations (optional) receives the update count.
std::vector<double> newton_step_nonlinear(const Problem2D& p,
                                          const std::vector<double>& u_prev,
                                          const KronOperators& ops,
                                          const std::vector<double>& f_prev,
                                          const std::vector<double>& f_next,
                                          double tol, int max_iter,
                                          int* iterations = nullptr);

// Iteration matrix (E - theta*tau*M)^{-1} (E + (1-theta)*tau*M) of the
// linear scheme on the interior unknowns.
Mat iteration_matrix_2d(const Problem2D& p);

class Stepper2D {
 public:
  // force_nonlinear routes an m = 1 problem through the Newton path (used to
  // check the two paths agree); m > 1 always takes the Newton path.
  explicit Stepper2D(const Problem2D& p, bool force_nonlinear = false);
  ~Stepper2D();
  Stepper2D(Stepper2D&&) noexcept;
  Stepper2D& operator=(Stepper2D&&) noexcept;

  const CollocationGrid& grid() const;  // shared axis grid
  const Problem2D& problem() const;
  const KronOperators& operators() const;
  SolutionState initial() const;  // full grid, x fastest
  void step(SolutionState& state) const;
  // Newton updates spent in the most recent step (0 on the linear path).
  int last_newton_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Solution2D {
  CollocationGrid grid;  // shared axis grid
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;  // full grid fields
  SolutionState final_state;                   // full grid field
};

Solution2D solve_2d(const Problem2D& p,
                    const std::vector<double>& snapshot_times = {});

}  // namespace fracspec
