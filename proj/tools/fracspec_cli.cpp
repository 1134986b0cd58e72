#include <CLI11.hpp>
#include <json.hpp>

#include "fracspec/analysis.hpp"
#include "fracspec/fracmat.hpp"
#include "fracspec/grids.hpp"
#include "fracspec/io.hpp"
#include "fracspec/lagrange.hpp"
#include "fracspec/solver1d.hpp"
#include "fracspec/solver2d.hpp"
#include "fracspec/source_oracle.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;
using namespace fracspec;

namespace {

// Flat or nested JSON config: top-level keys feed the main app, one object
// per subcommand feeds that subcommand's flags.  Flags given on the command
// line keep precedence (CLI11 only fills unset options from the config).
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::FileError("config root must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten({}, j, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const std::vector<std::string>& parents, const json& j,
                      std::vector<CLI::ConfigItem>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        std::vector<std::string> next = parents;
        next.push_back(it.key());
        flatten(next, *it, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array())
        for (const json& v : *it) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(*it));
      out.push_back(std::move(item));
    }
  }
};

GridFamily family_from(const std::string& s) {
  if (s == "legendre") return GridFamily::Legendre;
  if (s == "chebyshev") return GridFamily::Chebyshev;
  throw std::invalid_argument("unknown family '" + s +
                              "' (expected legendre or chebyshev)");
}

std::optional<PrecisionMode> precision_from(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "double") return PrecisionMode::dbl();
  if (s == "extended") return PrecisionMode::extended();
  throw std::invalid_argument("unknown precision '" + s +
                              "' (expected auto, double, or extended)");
}

std::string precision_label(const std::optional<PrecisionMode>& p, int n) {
  PrecisionMode eff = p ? *p : default_precision(n);
  return eff.is_extended() ? "extended" : "double";
}

std::string num_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string grid_csv(const CollocationGrid& g) {
  bool with_w = g.family == GridFamily::Legendre;
  std::string s = with_w ? "i,x,w\n" : "i,x\n";
  for (int i = 0; i <= g.n; ++i) {
    s += std::to_string(i) + "," + format_sci(g.points[i]);
    if (with_w) s += "," + format_sci(g.weights[i]);
    s += "\n";
  }
  return s;
}

std::string matrix_csv(const DiffMatrix& dm) {
  const int n = dm.n;
  std::string s = "c0";
  for (int j = 1; j <= n; ++j) s += ",c" + std::to_string(j);
  s += "\n";
  std::vector<char> undef(n + 1, 0);
  for (int r : dm.undefined_rows) undef[r] = 1;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (j) s += ",";
      s += undef[i] ? "inf" : format_sci(dm.entries(i, j));
    }
    s += "\n";
  }
  return s;
}

std::string convergence_csv(const ConvergenceTable& t) {
  std::string s = "N,Linf,L2\n";
  for (const ConvergenceRow& r : t.rows)
    s += std::to_string(r.n) + "," + format_sci(r.l_inf) + "," +
         format_sci(r.l2) + "\n";
  return s;
}

std::string snapshot1d_csv(const CollocationGrid& g,
                           const std::vector<double>& u) {
  std::string s = "x,u\n";
  for (int i = 0; i <= g.n; ++i)
    s += format_sci(g.points[i]) + "," + format_sci(u[i]) + "\n";
  return s;
}

std::string snapshot2d_csv(const CollocationGrid& g,
                           const std::vector<double>& u) {
  const int n = g.n;
  std::string s = "x,y,u\n";
  for (int sy = 0; sy <= n; ++sy)
    for (int r = 0; r <= n; ++r)
      s += format_sci(g.points[r]) + "," + format_sci(g.points[sy]) + "," +
           format_sci(u[static_cast<size_t>(sy) * (n + 1) + r]) + "\n";
  return s;
}

std::string spectrum_csv(const Spectrum& sp) {
  std::string s = "re,im\n";
  for (const std::complex<double>& z : sp.eigenvalues)
    s += format_sci(z.real()) + "," + format_sci(z.imag()) + "\n";
  return s;
}

struct PointsArgs {
  std::string family = "legendre";
  int n = 10;
  double a = -1.0, b = 1.0;
  std::string out = "points.csv";
};

struct DiffmatArgs {
  std::string kind = "first";
  std::string family = "legendre";
  int n = 8;
  double alpha = 1.5;
  bool alpha_given = false;
  double a = -1.0, b = 1.0;
  std::string precision = "auto";
  std::string out = "diffmat.csv";
};

struct SolveArgs {
  std::string case_key;
  std::string family = "legendre";
  int n = 10;
  double a = -1.0, b = 1.0;
  double alpha = 1.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  int m = 1;
  std::string precision = "auto";
  int quad_points = 0;
  std::vector<double> snapshots;
  std::string out_dir = ".";
  std::string prefix;
};

struct ConvergeArgs {
  std::string case_key = "ex1";
  std::string family = "legendre";
  std::vector<double> alphas = {1.5};
  std::vector<int> degrees = {6, 8, 10, 12};
  double a = -1.0, b = 1.0;
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  int jobs = 1;
  int quad_points = 0;
  std::string precision = "auto";
  std::string out_dir = ".";
  std::string prefix;
};

struct EigensArgs {
  std::string case_key = "ex1";
  std::string family = "legendre";
  int n = 6;
  double alpha = 1.5;
  double kappa = 1.0, nu = 1.0;
  double p = 0.5, q = 0.5;
  double tau = 0.1;
  double theta = 0.5;
  std::string precision = "auto";
  std::string out = "eigens.csv";
};

struct LevyArgs {
  double alpha = 1.8;
  double vartheta = 0.1;
  std::string family = "legendre";
  int n = 20;
  double kappa = 1.0, nu = 1.0;
  double tau = 0.1;
  double t_final = 1.0;
  double theta = 0.5;
  std::vector<double> snapshots;
  std::string out_dir = ".";
  std::string prefix = "levy";
};

struct CoeffArgs {
  std::vector<int> degrees = {15, 20, 25};
  std::string out = "coeff_report.csv";
};

json base_meta(const std::string& command) {
  json j;
  j["command"] = command;
  return j;
}

void run_points(const PointsArgs& a) {
  CollocationGrid g = make_grid(family_from(a.family), a.n, a.a, a.b);
  write_text_file(a.out, grid_csv(g));
  json meta = base_meta("points");
  meta["family"] = a.family;
  meta["n"] = a.n;
  meta["a"] = a.a;
  meta["b"] = a.b;
  meta["precision"] = "double";
  write_meta(a.out, meta);
}

void run_diffmat(const DiffmatArgs& a) {
  GridFamily fam = family_from(a.family);
  std::optional<PrecisionMode> prec = precision_from(a.precision);
  CollocationGrid g = make_grid(fam, a.n, a.a, a.b);
  DiffMatrix dm;
  if (a.kind == "first") {
    if (a.alpha_given)
      throw std::invalid_argument("diffmat: --alpha only applies to fractional kinds");
    dm = first_order_matrix(g);
  } else {
    if (!a.alpha_given)
      throw std::invalid_argument("diffmat: fractional kinds require --alpha");
    PrecisionMode eff = prec ? *prec : default_precision(a.n);
    if (a.kind == "rl-left")
      dm = rl_left_matrix(g, a.alpha, expand_lagrange(g, Side::Left, eff));
    else if (a.kind == "rl-right")
      dm = rl_right_matrix(g, a.alpha, expand_lagrange(g, Side::Right, eff));
    else if (a.kind == "caputo-left")
      dm = caputo_left_matrix(g, a.alpha, expand_lagrange(g, Side::Left, eff));
    else if (a.kind == "caputo-right")
      dm = caputo_right_matrix(g, a.alpha, expand_lagrange(g, Side::Right, eff));
    else
      throw std::invalid_argument(
          "diffmat: unknown kind '" + a.kind +
          "' (first, rl-left, rl-right, caputo-left, caputo-right)");
  }
  write_text_file(a.out, matrix_csv(dm));
  json meta = base_meta("diffmat");
  meta["kind"] = a.kind;
  meta["family"] = a.family;
  meta["n"] = a.n;
  meta["a"] = a.a;
  meta["b"] = a.b;
  if (a.kind != "first") meta["alpha"] = a.alpha;
  meta["precision"] =
      a.kind == "first" ? "double" : precision_label(prec, a.n);
  write_meta(a.out, meta);
}

json solve_meta(const SolveArgs& a, const std::string& command, double t_snap) {
  json meta = base_meta(command);
  meta["case"] = a.case_key;
  meta["family"] = a.family;
  meta["n"] = a.n;
  meta["a"] = a.a;
  meta["b"] = a.b;
  meta["alpha"] = a.alpha;
  meta["kappa"] = a.kappa;
  meta["nu"] = a.nu;
  meta["p"] = a.p;
  meta["q"] = a.q;
  meta["tau"] = a.tau;
  meta["t_final"] = a.t_final;
  meta["theta"] = a.theta;
  meta["quad_points"] = a.quad_points;
  meta["precision"] = precision_label(precision_from(a.precision), a.n);
  meta["snapshot_t"] = t_snap;
  return meta;
}

void run_solve1d(SolveArgs a) {
  if (a.case_key.empty()) a.case_key = "ex1";
  if (a.prefix.empty()) a.prefix = a.case_key;
  if (a.snapshots.empty()) a.snapshots = {a.t_final};
  Problem1D p;
  p.case_key = a.case_key;
  p.family = family_from(a.family);
  p.n = a.n;
  p.a = a.a;
  p.b = a.b;
  p.alpha = a.alpha;
  p.kappa = a.kappa;
  p.nu = a.nu;
  p.p = a.p;
  p.q = a.q;
  p.tau = a.tau;
  p.t_final = a.t_final;
  p.theta = a.theta;
  p.precision = precision_from(a.precision);
  p.quad_points = a.quad_points;
  Solution1D sol = solve_1d(p, a.snapshots);
  ensure_dir(a.out_dir);
  for (size_t k = 0; k < sol.snapshot_times.size(); ++k) {
    std::string path = join_path(
        a.out_dir, a.prefix + "_t" + num_tag(sol.snapshot_times[k]) + ".csv");
    write_text_file(path, snapshot1d_csv(sol.grid, sol.snapshots[k]));
    write_meta(path, solve_meta(a, "solve1d", sol.snapshot_times[k]));
  }
}

void run_solve2d(SolveArgs a) {
  if (a.case_key.empty()) a.case_key = "ex3";
  if (a.prefix.empty()) a.prefix = a.case_key;
  if (a.snapshots.empty()) a.snapshots = {a.t_final};
  Problem2D p;
  p.case_key = a.case_key;
  p.family = family_from(a.family);
  p.n = a.n;
  p.a = a.a;
  p.b = a.b;
  p.alpha = a.alpha;
  p.kappa = a.kappa;
  p.nu = a.nu;
  p.p = a.p;
  p.q = a.q;
  p.m = a.m;
  p.tau = a.tau;
  p.t_final = a.t_final;
  p.theta = a.theta;
  p.precision = precision_from(a.precision);
  p.quad_points = a.quad_points;
  Solution2D sol = solve_2d(p, a.snapshots);
  ensure_dir(a.out_dir);
  for (size_t k = 0; k < sol.snapshot_times.size(); ++k) {
    std::string path = join_path(
        a.out_dir, a.prefix + "_t" + num_tag(sol.snapshot_times[k]) + ".csv");
    write_text_file(path, snapshot2d_csv(sol.grid, sol.snapshots[k]));
    json meta = solve_meta(a, "solve2d", sol.snapshot_times[k]);
    meta["m"] = a.m;
    write_meta(path, meta);
  }
}

void run_converge(ConvergeArgs a) {
  if (a.prefix.empty()) a.prefix = a.case_key + "_" + a.family;
  SweepSpec spec;
  spec.case_key = a.case_key;
  spec.family = family_from(a.family);
  spec.alphas = a.alphas;
  spec.degrees = a.degrees;
  spec.a = a.a;
  spec.b = a.b;
  spec.tau = a.tau;
  spec.t_final = a.t_final;
  spec.theta = a.theta;
  spec.kappa = a.kappa;
  spec.nu = a.nu;
  spec.p = a.p;
  spec.q = a.q;
  spec.jobs = a.jobs;
  spec.quad_points = a.quad_points;
  spec.precision = precision_from(a.precision);
  std::vector<ConvergenceTable> tables = convergence_sweep(spec);
  ensure_dir(a.out_dir);
  for (const ConvergenceTable& t : tables) {
    std::string path =
        join_path(a.out_dir, a.prefix + "_alpha" + num_tag(t.alpha) + ".csv");
    write_text_file(path, convergence_csv(t));
    json meta = base_meta("converge");
    meta["case"] = a.case_key;
    meta["family"] = a.family;
    meta["alpha"] = t.alpha;
    meta["degrees"] = a.degrees;
    meta["a"] = a.a;
    meta["b"] = a.b;
    meta["tau"] = a.tau;
    meta["t_final"] = a.t_final;
    meta["theta"] = a.theta;
    meta["kappa"] = a.kappa;
    meta["nu"] = a.nu;
    meta["p"] = a.p;
    meta["q"] = a.q;
    meta["jobs"] = a.jobs;
    meta["quad_points"] = a.quad_points;
    meta["precision"] =
        a.precision == "auto" ? "auto" : precision_label(precision_from(a.precision), 0);
    write_meta(path, meta);
  }
}

void run_eigens(const EigensArgs& a) {
  const ManufacturedCase& c = example_case(a.case_key);
  Mat g;
  if (c.dim == 1) {
    Problem1D p;
    p.case_key = a.case_key;
    p.family = family_from(a.family);
    p.n = a.n;
    p.alpha = a.alpha;
    p.kappa = a.kappa;
    p.nu = a.nu;
    p.p = a.p;
    p.q = a.q;
    p.tau = a.tau;
    p.t_final = a.tau;  // matrix assembly does not march in time
    p.theta = a.theta;
    p.precision = precision_from(a.precision);
    g = iteration_matrix_1d(p);
  } else {
    Problem2D p;
    p.case_key = a.case_key;
    p.family = family_from(a.family);
    p.n = a.n;
    p.alpha = a.alpha;
    p.kappa = a.kappa;
    p.nu = a.nu;
    p.p = a.p;
    p.q = a.q;
    p.m = c.m;
    p.tau = a.tau;
    p.t_final = a.tau;
    p.theta = a.theta;
    p.precision = precision_from(a.precision);
    g = iteration_matrix_2d(p);
  }
  Spectrum sp = eigenvalues_dense(
      g, "iteration matrix, case " + a.case_key + ", interior block");
  write_text_file(a.out, spectrum_csv(sp));
  json meta = base_meta("eigens");
  meta["case"] = a.case_key;
  meta["family"] = a.family;
  meta["n"] = a.n;
  meta["alpha"] = a.alpha;
  meta["kappa"] = a.kappa;
  meta["nu"] = a.nu;
  meta["p"] = a.p;
  meta["q"] = a.q;
  meta["tau"] = a.tau;
  meta["theta"] = a.theta;
  meta["precision"] = precision_label(precision_from(a.precision), a.n);
  meta["boundary_rows"] =
      "eliminated: spectrum of the interior (Dirichlet) block";
  write_meta(a.out, meta);
}

void run_levy(LevyArgs a) {
  std::pair<double, double> pq = levy_feller_pq(a.alpha, a.vartheta);
  if (a.snapshots.empty()) a.snapshots = {a.t_final};
  Problem1D p;
  p.case_key = "ex4";
  p.family = family_from(a.family);
  p.n = a.n;
  p.alpha = a.alpha;
  p.kappa = a.kappa;
  p.nu = a.nu;
  p.p = pq.first;
  p.q = pq.second;
  p.levy_mode = true;
  p.tau = a.tau;
  p.t_final = a.t_final;
  p.theta = a.theta;
  Solution1D sol = solve_1d(p, a.snapshots);
  ensure_dir(a.out_dir);
  for (size_t k = 0; k < sol.snapshot_times.size(); ++k) {
    std::string path = join_path(
        a.out_dir, a.prefix + "_t" + num_tag(sol.snapshot_times[k]) + ".csv");
    write_text_file(path, snapshot1d_csv(sol.grid, sol.snapshots[k]));
    json meta = base_meta("levy-feller");
    meta["alpha"] = a.alpha;
    meta["vartheta"] = a.vartheta;
    meta["p"] = pq.first;
    meta["q"] = pq.second;
    meta["family"] = a.family;
    meta["n"] = a.n;
    meta["kappa"] = a.kappa;
    meta["nu"] = a.nu;
    meta["tau"] = a.tau;
    meta["t_final"] = a.t_final;
    meta["theta"] = a.theta;
    meta["snapshot_t"] = sol.snapshot_times[k];
    meta["precision"] = precision_label(std::nullopt, a.n);
    write_meta(path, meta);
  }
}

void run_coeff_report(const CoeffArgs& a) {
  std::string s = "N,coeff_error\n";
  json degrees = json::array();
  for (int n : a.degrees) {
    s += std::to_string(n) + "," + format_sci(coeff_error_report(n)) + "\n";
    degrees.push_back(n);
  }
  write_text_file(a.out, s);
  json meta = base_meta("coeff-report");
  meta["degrees"] = degrees;
  meta["precision"] = "double vs extended reference";
  write_meta(a.out, meta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral collocation tools for fractional advection-diffusion"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (flags take precedence)");

  PointsArgs pts;
  CLI::App* sub_points =
      app.add_subcommand("points", "write collocation nodes (and weights)");
  sub_points->configurable();
  sub_points->add_option("--family", pts.family, "legendre|chebyshev");
  sub_points->add_option("--n", pts.n, "polynomial degree");
  sub_points->add_option("--a", pts.a, "left endpoint");
  sub_points->add_option("--b", pts.b, "right endpoint");
  sub_points->add_option("--out", pts.out, "output CSV path");

  DiffmatArgs dma;
  CLI::App* sub_diffmat =
      app.add_subcommand("diffmat", "write a differentiation matrix");
  sub_diffmat->configurable();
  sub_diffmat->add_option(
      "--kind", dma.kind, "first|rl-left|rl-right|caputo-left|caputo-right");
  sub_diffmat->add_option("--family", dma.family, "legendre|chebyshev");
  sub_diffmat->add_option("--n", dma.n, "polynomial degree");
  CLI::Option* dm_alpha =
      sub_diffmat->add_option("--alpha", dma.alpha, "fractional order");
  sub_diffmat->add_option("--a", dma.a, "left endpoint");
  sub_diffmat->add_option("--b", dma.b, "right endpoint");
  sub_diffmat->add_option("--precision", dma.precision,
                          "auto|double|extended");
  sub_diffmat->add_option("--out", dma.out, "output CSV path");

  SolveArgs s1;
  CLI::App* sub_solve1d =
      app.add_subcommand("solve1d", "run a 1D solve and write snapshots");
  sub_solve1d->configurable();
  sub_solve1d->add_option("--case", s1.case_key, "catalog case key");
  sub_solve1d->add_option("--family", s1.family, "legendre|chebyshev");
  sub_solve1d->add_option("--n", s1.n, "polynomial degree");
  sub_solve1d->add_option("--a", s1.a, "left endpoint");
  sub_solve1d->add_option("--b", s1.b, "right endpoint");
  sub_solve1d->add_option("--alpha", s1.alpha, "fractional order");
  sub_solve1d->add_option("--kappa", s1.kappa, "diffusion coefficient");
  sub_solve1d->add_option("--nu", s1.nu, "advection coefficient");
  sub_solve1d->add_option("--p", s1.p, "left-derivative weight");
  sub_solve1d->add_option("--q", s1.q, "right-derivative weight");
  sub_solve1d->add_option("--tau", s1.tau, "time step");
  sub_solve1d->add_option("--t-final", s1.t_final, "final time");
  sub_solve1d->add_option("--theta", s1.theta, "theta-scheme parameter");
  sub_solve1d->add_option("--precision", s1.precision, "auto|double|extended");
  sub_solve1d->add_option("--quad-points", s1.quad_points,
                          "source quadrature points (0 = auto)");
  sub_solve1d->add_option("--snapshots", s1.snapshots, "snapshot times")
      ->delimiter(',');
  sub_solve1d->add_option("--out-dir", s1.out_dir, "output directory");
  sub_solve1d->add_option("--prefix", s1.prefix, "output file prefix");

  SolveArgs s2;
  CLI::App* sub_solve2d =
      app.add_subcommand("solve2d", "run a 2D solve and write snapshots");
  sub_solve2d->configurable();
  sub_solve2d->add_option("--case", s2.case_key, "catalog case key");
  sub_solve2d->add_option("--family", s2.family, "legendre|chebyshev");
  sub_solve2d->add_option("--n", s2.n, "polynomial degree");
  sub_solve2d->add_option("--a", s2.a, "left endpoint");
  sub_solve2d->add_option("--b", s2.b, "right endpoint");
  sub_solve2d->add_option("--alpha", s2.alpha, "fractional order");
  sub_solve2d->add_option("--kappa", s2.kappa, "diffusion coefficient");
  sub_solve2d->add_option("--nu", s2.nu, "advection coefficient");
  sub_solve2d->add_option("--p", s2.p, "left-derivative weight");
  sub_solve2d->add_option("--q", s2.q, "right-derivative weight");
  sub_solve2d->add_option("--m", s2.m, "nonlinearity power");
  sub_solve2d->add_option("--tau", s2.tau, "time step");
  sub_solve2d->add_option("--t-final", s2.t_final, "final time");
  sub_solve2d->add_option("--theta", s2.theta, "theta-scheme parameter");
  sub_solve2d->add_option("--precision", s2.precision, "auto|double|extended");
  sub_solve2d->add_option("--quad-points", s2.quad_points,
                          "source quadrature points (0 = auto)");
  sub_solve2d->add_option("--snapshots", s2.snapshots, "snapshot times")
      ->delimiter(',');
  sub_solve2d->add_option("--out-dir", s2.out_dir, "output directory");
  sub_solve2d->add_option("--prefix", s2.prefix, "output file prefix");

  ConvergeArgs cva;
  CLI::App* sub_converge =
      app.add_subcommand("converge", "error norms over a degree sweep");
  sub_converge->configurable();
  sub_converge->add_option("--case", cva.case_key, "catalog case key");
  sub_converge->add_option("--family", cva.family, "legendre|chebyshev");
  sub_converge->add_option("--alphas", cva.alphas, "fractional orders")
      ->delimiter(',');
  sub_converge->add_option("--degrees", cva.degrees, "polynomial degrees")
      ->delimiter(',');
  sub_converge->add_option("--a", cva.a, "left endpoint");
  sub_converge->add_option("--b", cva.b, "right endpoint");
  sub_converge->add_option("--tau", cva.tau, "time step");
  sub_converge->add_option("--t-final", cva.t_final, "final time");
  sub_converge->add_option("--theta", cva.theta, "theta-scheme parameter");
  sub_converge->add_option("--kappa", cva.kappa, "diffusion coefficient");
  sub_converge->add_option("--nu", cva.nu, "advection coefficient");
  sub_converge->add_option("--p", cva.p, "left-derivative weight");
  sub_converge->add_option("--q", cva.q, "right-derivative weight");
  sub_converge->add_option("--jobs", cva.jobs, "worker threads");
  sub_converge->add_option("--quad-points", cva.quad_points,
                           "source quadrature points (0 = auto)");
  sub_converge->add_option("--precision", cva.precision,
                           "auto|double|extended");
  sub_converge->add_option("--out-dir", cva.out_dir, "output directory");
  sub_converge->add_option("--prefix", cva.prefix, "output file prefix");

  EigensArgs eia;
  CLI::App* sub_eigens =
      app.add_subcommand("eigens", "iteration-matrix eigenvalues");
  sub_eigens->configurable();
  sub_eigens->add_option("--case", eia.case_key, "catalog case key");
  sub_eigens->add_option("--family", eia.family, "legendre|chebyshev");
  sub_eigens->add_option("--n", eia.n, "polynomial degree");
  sub_eigens->add_option("--alpha", eia.alpha, "fractional order");
  sub_eigens->add_option("--kappa", eia.kappa, "diffusion coefficient");
  sub_eigens->add_option("--nu", eia.nu, "advection coefficient");
  sub_eigens->add_option("--p", eia.p, "left-derivative weight");
  sub_eigens->add_option("--q", eia.q, "right-derivative weight");
  sub_eigens->add_option("--tau", eia.tau, "time step");
  sub_eigens->add_option("--theta", eia.theta, "theta-scheme parameter");
  sub_eigens->add_option("--precision", eia.precision, "auto|double|extended");
  sub_eigens->add_option("--out", eia.out, "output CSV path");

  LevyArgs lva;
  CLI::App* sub_levy = app.add_subcommand(
      "levy-feller", "skewed superdiffusion run with weights from vartheta");
  sub_levy->configurable();
  sub_levy->add_option("--alpha", lva.alpha, "stability index (1,2)");
  sub_levy->add_option("--vartheta", lva.vartheta, "skewness parameter");
  sub_levy->add_option("--family", lva.family, "legendre|chebyshev");
  sub_levy->add_option("--n", lva.n, "polynomial degree");
  sub_levy->add_option("--kappa", lva.kappa, "diffusion coefficient");
  sub_levy->add_option("--nu", lva.nu, "advection coefficient");
  sub_levy->add_option("--tau", lva.tau, "time step");
  sub_levy->add_option("--t-final", lva.t_final, "final time");
  sub_levy->add_option("--theta", lva.theta, "theta-scheme parameter");
  sub_levy->add_option("--snapshots", lva.snapshots, "snapshot times")
      ->delimiter(',');
  sub_levy->add_option("--out-dir", lva.out_dir, "output directory");
  sub_levy->add_option("--prefix", lva.prefix, "output file prefix");

  CoeffArgs coa;
  CLI::App* sub_coeff = app.add_subcommand(
      "coeff-report", "double-vs-extended cardinal coefficient error");
  sub_coeff->configurable();
  sub_coeff->add_option("--degrees", coa.degrees, "polynomial degrees")
      ->delimiter(',');
  sub_coeff->add_option("--out", coa.out, "output CSV path");

  try {
    app.parse(argc, argv);
    dma.alpha_given = dm_alpha->count() > 0;
    if (sub_points->parsed()) run_points(pts);
    if (sub_diffmat->parsed()) run_diffmat(dma);
    if (sub_solve1d->parsed()) run_solve1d(s1);
    if (sub_solve2d->parsed()) run_solve2d(s2);
    if (sub_converge->parsed()) run_converge(cva);
    if (sub_eigens->parsed()) run_eigens(eia);
    if (sub_levy->parsed()) run_levy(lva);
    if (sub_coeff->parsed()) run_coeff_report(coa);
  } catch (const CLI::ParseError& e) {
    std::string kind = e.get_name();
    if (kind == "CallForHelp" || kind == "CallForAllHelp" ||
        kind == "CallForVersion")
      return app.exit(e);
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    int code = e.get_exit_code();
    return code == 0 ? 1 : code;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
