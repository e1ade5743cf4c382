#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bamsf/model.hpp"
#include "bamsf/oracle.hpp"
#include "bamsf/problem_io.hpp"
#include "bamsf/rates.hpp"
#include "bamsf/solver.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_vector(const char* label, const bamsf::Vector& x) {
  std::cout << label << " [";
  for (int i = 0; i < x.size(); ++i)
    std::cout << (i ? ", " : "") << fmt(x[i]);
  std::cout << "]\n";
}

double max_block_infeasibility(const bamsf::Instance& inst,
                               const bamsf::Vector& x) {
  double worst = 0.0;
  for (const auto& b : inst.blocks()) {
    const bamsf::Vector z = b.A * x;
    worst = std::max(worst, (z - b.set.project(z)).norm());
  }
  return worst;
}

std::string report_csv(const bamsf::RateReport& rep) {
  std::string mode = rep.mode == bamsf::RateMode::linear ? "linear" : "power_law";
  std::string out = "mode,parameter,r_squared,window_begin,window_end\n";
  out += mode + "," + fmt(rep.parameter) + "," + fmt(rep.r_squared) + "," +
         std::to_string(rep.window_begin) + "," +
         std::to_string(rep.window_end) + "\n";
  return out;
}

void print_report(const bamsf::RateReport& rep) {
  std::cout << "mode: "
            << (rep.mode == bamsf::RateMode::linear ? "linear" : "power_law")
            << "\n";
  std::cout << (rep.mode == bamsf::RateMode::linear ? "ratio: " : "exponent: ")
            << fmt(rep.parameter) << "\n";
  std::cout << "r_squared: " << fmt(rep.r_squared) << "\n";
  std::cout << "fit_residual: " << fmt(rep.fit_residual) << "\n";
  std::cout << "window: [" << rep.window_begin << ", " << rep.window_end
            << ")\n";
  if (rep.non_convergent) std::cout << "flag: non-convergent (ratio >= 1)\n";
}

int cmd_solve(const std::string& problem_path, long max_sweeps,
              double step_tol, double residual_tol, long record_every,
              const std::string& history_out, std::optional<double> dstar,
              bool emit_x) {
  bamsf::Instance inst = bamsf::load_problem(problem_path);
  bamsf::SolverConfig cfg;
  cfg.max_sweeps = max_sweeps;
  cfg.step_tol = step_tol;
  cfg.residual_tol = residual_tol;
  cfg.record_every = record_every;
  cfg.d_star = dstar;

  const bamsf::SolveResult res = bamsf::solve(inst, cfg);
  if (!history_out.empty())
    bamsf::write_file(history_out,
                      bamsf::history_to_csv(res.history, emit_x));

  print_vector("x:", res.x);
  std::cout << "feasibility_residual: "
            << fmt(max_block_infeasibility(inst, res.x)) << "\n";
  std::cout << "sweeps: " << res.sweeps << "\n";
  std::cout << "termination: " << bamsf::to_string(res.reason) << "\n";
  return 0;
}

int cmd_reproduce_tight(double p, long sweeps, const std::string& out) {
  if (!(p > 1.0 && p <= 2.0)) {
    std::cerr << "error: --p must lie in (1, 2]\n";
    return kExitUsage;
  }
  std::vector<double> eps_grid;
  for (int k = 0; k < 9; ++k) eps_grid.push_back(std::pow(10.0, -3.0 + 0.25 * k));

  const double expected = p / (p - 1.0);
  const double fitted = bamsf::fit_path_exponent(p, eps_grid);
  std::cout << "gap_path_exponent: " << fmt(fitted) << "\n";
  std::cout << "expected_exponent: " << fmt(expected) << "\n";

  // The distance to the dual solution along the same path is eps itself.
  std::vector<double> logeps, logdist;
  for (double e : eps_grid) {
    logeps.push_back(std::log(e));
    logdist.push_back(std::log(e));
  }
  auto [dist_slope, di, dr2] = bamsf::fit_log_linear(logeps, logdist);
  (void)di;
  (void)dr2;
  std::cout << "dist_path_exponent: " << fmt(dist_slope) << "\n";

  bamsf::Instance inst = bamsf::make_tight_instance(p);
  bamsf::SolverConfig cfg;
  cfg.max_sweeps = sweeps;
  cfg.d_star = -0.5;
  const bamsf::SolveResult res = bamsf::solve(inst, cfg);
  print_vector("x:", res.x);
  std::cout << "x_error: " << fmt((res.x - (bamsf::Vector(2) << 1.0, 0.0)
                                               .finished())
                                      .norm())
            << "\n";
  std::cout << "termination: " << bamsf::to_string(res.reason) << "\n";
  if (!out.empty())
    bamsf::write_file(out, bamsf::history_to_csv(res.history, false));
  return 0;
}

int cmd_reproduce_nonlinear(long sweeps, const std::string& out) {
  if (sweeps < 1100) {
    std::cerr << "error: --sweeps must be >= 1100 for the power-law window\n";
    return kExitUsage;
  }
  bamsf::Instance inst = bamsf::make_nonlinear_instance();
  const auto recurrence =
      bamsf::example_fails_recurrence(std::min<long>(sweeps, 10000));
  double max_dev = 0.0;

  bamsf::SolverConfig cfg;
  cfg.max_sweeps = sweeps;
  cfg.step_tol = 0.0;
  cfg.residual_tol = 0.0;
  cfg.d_star = -1.5;  // -0.5 * ||x* - v||^2 with x* = 0
  cfg.y_star = bamsf::nonlinear_dual_solution();
  cfg.record_primal = false;
  cfg.on_sweep = [&](long t, const bamsf::DualPoint& y) {
    if (t <= long(recurrence.size())) {
      const auto& step = recurrence[t - 1];
      max_dev = std::max(
          max_dev, std::max((y.y[0] - step.y1).cwiseAbs().maxCoeff(),
                            (y.y[1] - step.y2).cwiseAbs().maxCoeff()));
    }
  };
  const bamsf::SolveResult res = bamsf::solve(inst, cfg);

  std::vector<double> dist_sq, gaps;
  for (const auto& rec : res.history) {
    dist_sq.push_back(*rec.dist_argmin * *rec.dist_argmin);
    if (rec.gap) gaps.push_back(*rec.gap);
  }
  const bamsf::RateReport power = bamsf::fit_power_law(dist_sq, 1000);
  const bamsf::RateReport linear = bamsf::fit_linear_ratio(gaps, 1.0);

  std::cout << "max_iterate_deviation: " << fmt(max_dev) << "\n";
  std::cout << "dist_sq_exponent: " << fmt(power.parameter)
            << " (expected -1)\n";
  std::cout << "gap_linear_ratio: " << fmt(linear.parameter)
            << (linear.parameter >= 0.999 ? " (no linear rate)" : "") << "\n";
  if (!out.empty())
    bamsf::write_file(out, bamsf::history_to_csv(res.history, false));
  return 0;
}

int cmd_rates(const std::string& history_path, const std::string& mode,
              long skip, const std::string& column, double dstar_scale,
              const std::string& out) {
  const bamsf::ParsedHistory h = bamsf::load_history_csv(history_path);
  std::vector<double> values;
  if (column == "gap")
    values = h.gap;
  else if (column == "dist")
    values = h.dist_argmin;
  else if (column == "dist_sq") {
    for (double d : h.dist_argmin) values.push_back(d * d);
  } else if (column == "step")
    values = h.step_norm;
  else if (column == "residual")
    values = h.residual_norm;
  else {
    std::cerr << "error: unknown column \"" << column << "\"\n";
    return kExitUsage;
  }
  for (double v : values) {
    if (std::isnan(v)) {
      std::cerr << "error: column \"" << column
                << "\" is not populated in this history\n";
      return kExitUsage;
    }
  }
  bamsf::RateReport rep;
  if (mode == "linear")
    rep = bamsf::fit_linear_ratio(values, dstar_scale);
  else if (mode == "power")
    rep = bamsf::fit_power_law(values, skip);
  else {
    std::cerr << "error: --mode must be linear or power\n";
    return kExitUsage;
  }
  print_report(rep);
  if (!out.empty()) bamsf::write_file(out, report_csv(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-approximation solver for multi-set split feasibility "
               "problems"};
  app.require_subcommand(1);

  // solve
  std::string problem_path, history_out;
  long max_sweeps = 1000000, record_every = 1, skip = 0;
  double step_tol = 1e-10, residual_tol = 1e-9;
  std::optional<double> dstar;
  double dstar_flag = 0.0;
  bool emit_x = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  solve_cmd->add_option("problem", problem_path)->required();
  solve_cmd->add_option("--max-sweeps", max_sweeps);
  solve_cmd->add_option("--step-tol", step_tol);
  solve_cmd->add_option("--residual-tol", residual_tol);
  solve_cmd->add_option("--record-every", record_every);
  solve_cmd->add_option("--history-out", history_out);
  auto* dstar_opt = solve_cmd->add_option("--dstar", dstar_flag,
                                          "known optimal dual value");
  solve_cmd->add_flag("--emit-x", emit_x, "append x columns to the CSV");

  // reproduce
  std::string example;
  double p = 2.0;
  long sweeps = 0;
  std::string repro_out;
  auto* repro_cmd = app.add_subcommand("reproduce", "rerun a built-in study");
  repro_cmd->add_option("example", example, "tight or nonlinear")->required();
  repro_cmd->add_option("--p", p, "ball exponent for tight");
  repro_cmd->add_option("--sweeps", sweeps);
  repro_cmd->add_option("--out", repro_out, "history CSV path");

  // rates
  std::string history_path, mode = "linear", column = "gap", rates_out;
  double dstar_scale = 1.0;
  auto* rates_cmd = app.add_subcommand("rates", "fit rates from a history CSV");
  rates_cmd->add_option("history", history_path)->required();
  rates_cmd->add_option("--mode", mode, "linear or power");
  rates_cmd->add_option("--skip", skip, "sweeps to skip (power mode)");
  rates_cmd->add_option("--column", column,
                        "gap, dist, dist_sq, step or residual");
  rates_cmd->add_option("--dstar-scale", dstar_scale,
                        "scale for the noise floor (linear mode)");
  rates_cmd->add_option("--out", rates_out, "rate-report CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      if (dstar_opt->count() > 0) dstar = dstar_flag;
      return cmd_solve(problem_path, max_sweeps, step_tol, residual_tol,
                       record_every, history_out, dstar, emit_x);
    }
    if (repro_cmd->parsed()) {
      if (example == "tight")
        return cmd_reproduce_tight(p, sweeps > 0 ? sweeps : 20000, repro_out);
      if (example == "nonlinear")
        return cmd_reproduce_nonlinear(sweeps > 0 ? sweeps : 100000,
                                       repro_out);
      std::cerr << "error: example must be tight or nonlinear\n";
      return kExitUsage;
    }
    if (rates_cmd->parsed())
      return cmd_rates(history_path, mode, skip, column, dstar_scale,
                       rates_out);
  } catch (const bamsf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bamsf::DescentViolation& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const bamsf::NumericalError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
