#pragma once

#include "fracspec/fracmat.hpp"
#include "fracspec/source_oracle.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace fracspec {

// One-dimensional fractional advection-diffusion problem
//   u_t = kappa*(p*DL^alpha + q*DR^alpha) u - nu*u_x + f
// on [a,b] with Robin boundary closure and theta time stepping.
struct Problem1D {
  std::string case_key = "ex1";
  GridFamily family = GridFamily::Legendre;
  int n = 10;
  double a = -1.0, b = 1.0;
  double alpha = 1.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  bool levy_mode = false;  // lifts the p+q=1 normalization requirement
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  std::optional<PrecisionMode> precision;
  int quad_points = 0;  // 0 -> 2N+8
};

struct SolutionState {
  double t = 0.0;
  std::vector<double> values;
};

// Direction weights of the Levy-Feller operator; requires |vartheta| < 2-alpha.
std::pair<double, double> levy_feller_pq(double alpha, double vartheta);

void validate_problem(const Problem1D& p);

// Interior spatial operator: rows 1..N-1, all N+1 columns.
Mat assemble_operator_1d(const Problem1D& p);

// Iteration matrix G = (I - theta*tau*A)^{-1} (I + (1-theta)*tau*A) on the
// Dirichlet-eliminated interior block.
Mat iteration_matrix_1d(const Problem1D& p);

// Holds the grid, factored time-step system, and cached source data; cheap to
// step repeatedly.
class Stepper1D {
 public:
  explicit Stepper1D(const Problem1D& p);
  ~Stepper1D();
  Stepper1D(Stepper1D&&) noexcept;
  Stepper1D& operator=(Stepper1D&&) noexcept;

  const CollocationGrid& grid() const;
  const Problem1D& problem() const;
  SolutionState initial() const;
  // advance one step of length tau
  void step(SolutionState& state) const;
  // residuals of the two discrete boundary equations at the state's time
  std::pair<double, double> boundary_residuals(const SolutionState& state) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One theta step (spec-level op; delegates to the stepper).
SolutionState step_theta(const Stepper1D& stepper, const SolutionState& state);

struct Solution1D {
  CollocationGrid grid;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  SolutionState final_state;
};

Solution1D solve_1d(const Problem1D& p,
                    const std::vector<double>& snapshot_times = {});

}  // namespace fracspec
