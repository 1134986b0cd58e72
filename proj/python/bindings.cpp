#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracspec/analysis.hpp"
#include "fracspec/fracmat.hpp"
#include "fracspec/grids.hpp"
#include "fracspec/lagrange.hpp"
#include "fracspec/numerics.hpp"
#include "fracspec/solver1d.hpp"
#include "fracspec/solver2d.hpp"
#include "fracspec/source_oracle.hpp"

#include <stdexcept>

namespace py = pybind11;
using namespace fracspec;

namespace {

GridFamily family_from(const std::string& s) {
  if (s == "legendre") return GridFamily::Legendre;
  if (s == "chebyshev") return GridFamily::Chebyshev;
  throw std::invalid_argument("unknown family '" + s +
                              "' (expected legendre or chebyshev)");
}

Side side_from(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw std::invalid_argument("unknown side '" + s +
                              "' (expected left or right)");
}

std::optional<PrecisionMode> precision_from(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "double") return PrecisionMode::dbl();
  if (s == "extended") return PrecisionMode::extended();
  throw std::invalid_argument("unknown precision '" + s +
                              "' (expected auto, double, or extended)");
}

std::vector<std::vector<double>> mat_rows(const Mat& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) rows[i][j] = m(i, j);
  return rows;
}

py::dict grid_dict(const CollocationGrid& g) {
  py::dict d;
  d["family"] = g.family == GridFamily::Legendre ? "legendre" : "chebyshev";
  d["n"] = g.n;
  d["a"] = g.a;
  d["b"] = g.b;
  d["points"] = g.points;
  d["weights"] = g.weights;
  return d;
}

py::dict diffmatrix_dict(const DiffMatrix& dm) {
  py::dict d;
  d["alpha"] = dm.alpha;
  d["n"] = dm.n;
  d["entries"] = mat_rows(dm.entries);
  d["undefined_rows"] = dm.undefined_rows;
  d["precision"] = dm.precision.is_extended() ? "extended" : "double";
  return d;
}

DiffMatrix build_matrix(const std::string& kind, const std::string& family,
                        int n, double alpha, double a, double b,
                        const std::string& precision) {
  CollocationGrid g = make_grid(family_from(family), n, a, b);
  if (kind == "first") return first_order_matrix(g);
  std::optional<PrecisionMode> prec = precision_from(precision);
  PrecisionMode eff = prec ? *prec : default_precision(n);
  if (kind == "rl-left")
    return rl_left_matrix(g, alpha, expand_lagrange(g, Side::Left, eff));
  if (kind == "rl-right")
    return rl_right_matrix(g, alpha, expand_lagrange(g, Side::Right, eff));
  if (kind == "caputo-left")
    return caputo_left_matrix(g, alpha, expand_lagrange(g, Side::Left, eff));
  if (kind == "caputo-right")
    return caputo_right_matrix(g, alpha, expand_lagrange(g, Side::Right, eff));
  throw std::invalid_argument(
      "unknown kind '" + kind +
      "' (first, rl-left, rl-right, caputo-left, caputo-right)");
}

Problem1D problem1d_from(const std::string& case_key,
                         const std::string& family, int n, double alpha,
                         double kappa, double nu, double p, double q,
                         double tau, double t_final, double theta, double a,
                         double b, const std::string& precision,
                         bool levy_mode) {
  Problem1D prob;
  prob.case_key = case_key;
  prob.family = family_from(family);
  prob.n = n;
  prob.a = a;
  prob.b = b;
  prob.alpha = alpha;
  prob.kappa = kappa;
  prob.nu = nu;
  prob.p = p;
  prob.q = q;
  prob.levy_mode = levy_mode;
  prob.tau = tau;
  prob.t_final = t_final;
  prob.theta = theta;
  prob.precision = precision_from(precision);
  return prob;
}

}  // namespace

PYBIND11_MODULE(_fracspec, m) {
  m.doc() = "spectral collocation operators for fractional advection-diffusion";

  m.def("gamma_fn", &gamma_fn, py::arg("x"), "gamma function (double path)");

  m.def(
      "gauss_jacobi_rule",
      [](double gamma_exp, double delta_exp, int order) {
        QuadRule r = gauss_jacobi_rule(gamma_exp, delta_exp, order);
        py::dict d;
        d["nodes"] = r.nodes;
        d["weights"] = r.weights;
        return d;
      },
      py::arg("gamma_exp"), py::arg("delta_exp"), py::arg("order"),
      "Gauss-Jacobi quadrature on (-1,1) with weight (1-x)^gamma (1+x)^delta");

  m.def(
      "make_grid",
      [](const std::string& family, int n, double a, double b) {
        return grid_dict(make_grid(family_from(family), n, a, b));
      },
      py::arg("family") = "legendre", py::arg("n") = 10, py::arg("a") = -1.0,
      py::arg("b") = 1.0, "collocation nodes (and weights for legendre)");

  m.def(
      "diff_matrix",
      [](const std::string& kind, const std::string& family, int n,
         double alpha, double a, double b, const std::string& precision) {
        return diffmatrix_dict(
            build_matrix(kind, family, n, alpha, a, b, precision));
      },
      py::arg("kind"), py::arg("family") = "legendre", py::arg("n") = 8,
      py::arg("alpha") = 1.5, py::arg("a") = -1.0, py::arg("b") = 1.0,
      py::arg("precision") = "auto",
      "differentiation matrix as a nested list of rows");

  m.def(
      "rl_deriv_monomial",
      [](double gamma_exp, double alpha, const std::string& side, double a,
         double b, double x) {
        return rl_deriv_analytic_monomial(gamma_exp, alpha, side_from(side), a,
                                          b, x);
      },
      py::arg("gamma_exp"), py::arg("alpha"), py::arg("side") = "left",
      py::arg("a") = -1.0, py::arg("b") = 1.0, py::arg("x") = 0.0);

  m.def("levy_feller_pq", &levy_feller_pq, py::arg("alpha"),
        py::arg("vartheta"), "direction weights (p, q)");

  m.def("coeff_error_report", &coeff_error_report, py::arg("n"),
        "max |double - extended| cardinal coefficient difference");

  m.def("example_keys", &example_keys, "catalog case keys");

  m.def(
      "solve_1d",
      [](const std::string& case_key, const std::string& family, int n,
         double alpha, double kappa, double nu, double p, double q, double tau,
         double t_final, double theta, double a, double b,
         const std::string& precision, bool levy_mode,
         const std::vector<double>& snapshots) {
        Problem1D prob =
            problem1d_from(case_key, family, n, alpha, kappa, nu, p, q, tau,
                           t_final, theta, a, b, precision, levy_mode);
        Solution1D sol = solve_1d(prob, snapshots);
        py::dict d;
        d["x"] = sol.grid.points;
        d["t"] = sol.final_state.t;
        d["u"] = sol.final_state.values;
        d["snapshot_times"] = sol.snapshot_times;
        d["snapshots"] = sol.snapshots;
        return d;
      },
      py::arg("case_key") = "ex1", py::arg("family") = "legendre",
      py::arg("n") = 10, py::arg("alpha") = 1.5, py::arg("kappa") = 1.0,
      py::arg("nu") = 1.0, py::arg("p") = 0.5, py::arg("q") = 0.5,
      py::arg("tau") = 0.1, py::arg("t_final") = 1.0, py::arg("theta") = 0.5,
      py::arg("a") = -1.0, py::arg("b") = 1.0, py::arg("precision") = "auto",
      py::arg("levy_mode") = false,
      py::arg("snapshots") = std::vector<double>{});

  m.def(
      "solve_2d",
      [](const std::string& case_key, const std::string& family, int n,
         double alpha, double kappa, double nu, double p, double q, int mpow,
         double tau, double t_final, double theta, double a, double b,
         const std::string& precision,
         const std::vector<double>& snapshots) {
        Problem2D prob;
        prob.case_key = case_key;
        prob.family = family_from(family);
        prob.n = n;
        prob.a = a;
        prob.b = b;
        prob.alpha = alpha;
        prob.kappa = kappa;
        prob.nu = nu;
        prob.p = p;
        prob.q = q;
        prob.m = mpow;
        prob.tau = tau;
        prob.t_final = t_final;
        prob.theta = theta;
        prob.precision = precision_from(precision);
        Solution2D sol = solve_2d(prob, snapshots);
        py::dict d;
        d["x"] = sol.grid.points;
        d["t"] = sol.final_state.t;
        d["u"] = sol.final_state.values;  // full grid, x index fastest
        d["snapshot_times"] = sol.snapshot_times;
        d["snapshots"] = sol.snapshots;
        return d;
      },
      py::arg("case_key") = "ex3", py::arg("family") = "legendre",
      py::arg("n") = 8, py::arg("alpha") = 1.5, py::arg("kappa") = 1.0,
      py::arg("nu") = 1.0, py::arg("p") = 0.5, py::arg("q") = 0.5,
      py::arg("m") = 1, py::arg("tau") = 0.1, py::arg("t_final") = 1.0,
      py::arg("theta") = 0.5, py::arg("a") = -1.0, py::arg("b") = 1.0,
      py::arg("precision") = "auto",
      py::arg("snapshots") = std::vector<double>{});

  m.def(
      "exact_solution_1d",
      [](const std::string& case_key, const std::vector<double>& x, double t) {
        const ManufacturedCase& c = example_case(case_key);
        std::vector<double> out(x.size());
        for (size_t i = 0; i < x.size(); ++i)
          out[i] = exact_value_1d(c, x[i], t);
        return out;
      },
      py::arg("case_key"), py::arg("x"), py::arg("t"));

  m.def(
      "error_norms",
      [](const std::vector<double>& numeric, const std::vector<double>& exact,
         const std::vector<double>& weights) {
        ErrorNorms e = error_norms(numeric, exact, weights);
        return py::make_tuple(e.l_inf, e.l2);
      },
      py::arg("numeric"), py::arg("exact"), py::arg("weights"));

  m.def(
      "iteration_spectrum_1d",
      [](const std::string& case_key, const std::string& family, int n,
         double alpha, double tau, double theta) {
        Problem1D prob;
        prob.case_key = case_key;
        prob.family = family_from(family);
        prob.n = n;
        prob.alpha = alpha;
        prob.tau = tau;
        prob.t_final = tau;
        prob.theta = theta;
        return eigenvalues_dense(iteration_matrix_1d(prob)).eigenvalues;
      },
      py::arg("case_key") = "ex1", py::arg("family") = "legendre",
      py::arg("n") = 6, py::arg("alpha") = 1.5, py::arg("tau") = 0.1,
      py::arg("theta") = 0.5,
      "eigenvalues of the interior-block iteration matrix");
}
