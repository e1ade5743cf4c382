#include "bamsf/solver.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

namespace bamsf {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::step_tol: return "step_tol";
    case Termination::residual_tol: return "residual_tol";
    case Termination::max_sweeps: return "max_sweeps";
  }
  return "unknown";
}

void sweep_dykstra(const Instance& inst, DualPoint& y, Vector& x) {
#ifndef NDEBUG
  assert((x - inst.primal_from_dual(y)).norm() <=
         1e-8 * (1.0 + inst.anchor().norm()));
#endif
  for (int i = 0; i < inst.num_blocks(); ++i) {
    const Block& b = inst.blocks()[i];
    const double gamma = inst.gamma(i);
    const Vector w = b.A * x;
    const Vector proj = b.set.project(gamma * y.y[i] + w);
    const Vector r = (w - proj) / gamma;
    // Difference form of the dual block update; keeps x = v - A^T y exact
    // and makes a feasible anchor a bitwise fixed point.
    y.y[i] += r;
    x -= b.A.transpose() * r;
  }
}

DualPoint sweep_cgd_reference(const Instance& inst, const DualPoint& y_in) {
  DualPoint y = y_in;
  for (int i = 0; i < inst.num_blocks(); ++i) {
    const Block& b = inst.blocks()[i];
    const double gamma = inst.gamma(i);
    // Fresh gradient of the smooth part at the partially updated point.
    const Vector s = inst.apply_AT(y) - inst.anchor();
    const Vector grad = inst.grad_block(i, s);
    y.y[i] = b.set.prox_scaled_support(y.y[i] - grad / gamma, 1.0 / gamma);
  }
  return y;
}

namespace {

double checked_descent_slack(double d_old) {
  return 1e-9 * (1.0 + std::abs(d_old));
}

}  // namespace

SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
  if (cfg.max_sweeps < 1)
    throw std::invalid_argument("solve: max_sweeps must be >= 1");
  if (cfg.record_every < 1)
    throw std::invalid_argument("solve: record_every must be >= 1");
  if (cfg.step_tol < 0.0 || cfg.residual_tol < 0.0)
    throw std::invalid_argument("solve: tolerances must be >= 0");

  SolveResult res;
  res.y = DualPoint::zeros(inst.block_dims());
  res.x = inst.anchor();

  const double min_gamma_half = 0.5 * inst.min_gamma();
  ExtendedReal d_prev = inst.dual_objective(res.y);

  for (long t = 1; t <= cfg.max_sweeps; ++t) {
    const DualPoint y_old = res.y;
    sweep_dykstra(inst, res.y, res.x);
    const double step_norm = (res.y - y_old).norm();

    const bool recording = (t % cfg.record_every == 0);
    const bool need_d = recording || cfg.assert_descent;
    ExtendedReal d_val;
    if (need_d) d_val = inst.dual_objective(res.y);

    if (cfg.assert_descent && d_prev.is_finite() && d_val.is_finite()) {
      const double decrease = d_val.value() - d_prev.value();
      const double bound = -min_gamma_half * step_norm * step_norm +
                           checked_descent_slack(d_prev.value());
      if (decrease > bound)
        throw DescentViolation(
            "sweep " + std::to_string(t) + ": d increased by " +
            std::to_string(decrease) + " against bound " +
            std::to_string(bound));
    }
    if (cfg.assert_descent) d_prev = d_val;

    const bool stop_step = step_norm <= cfg.step_tol;
    const bool need_residual =
        recording || cfg.residual_tol > 0.0 || stop_step;
    double residual_norm = 0.0;
    bool stop_residual = false;
    if (need_residual) {
      residual_norm = inst.residual_norm(res.y);
      stop_residual = residual_norm <= cfg.residual_tol;
    }

    if (recording || stop_step || stop_residual || t == cfg.max_sweeps) {
      SweepRecord rec;
      rec.sweep = t;
      rec.d_value = need_d ? d_val : inst.dual_objective(res.y);
      rec.step_norm = step_norm;
      rec.residual_norm = residual_norm;
      if (cfg.record_primal) rec.primal = res.x;
      if (cfg.d_star && rec.d_value.is_finite())
        rec.gap = rec.d_value.value() - *cfg.d_star;
      if (cfg.y_star) rec.dist_argmin = (res.y - *cfg.y_star).norm();
      res.history.push_back(std::move(rec));
    }

    if (cfg.on_sweep) cfg.on_sweep(t, res.y);

    res.sweeps = t;
    if (stop_step) {
      res.reason = Termination::step_tol;
      return res;
    }
    if (stop_residual) {
      res.reason = Termination::residual_tol;
      return res;
    }
  }
  res.reason = Termination::max_sweeps;
  return res;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string history_to_csv(const std::vector<SweepRecord>& history,
                           bool emit_x) {
  std::string out = "sweep,d_value,step_norm,residual_norm,gap,dist_argmin";
  const int n = (emit_x && !history.empty()) ? int(history[0].primal.size()) : 0;
  for (int j = 0; j < n; ++j) out += ",x_" + std::to_string(j);
  out += "\n";
  for (const auto& rec : history) {
    out += std::to_string(rec.sweep);
    out += ",";
    out += rec.d_value.is_finite() ? fmt(rec.d_value.value()) : "inf";
    out += "," + fmt(rec.step_norm);
    out += "," + fmt(rec.residual_norm);
    out += ",";
    out += rec.gap ? fmt(*rec.gap) : "nan";
    out += ",";
    out += rec.dist_argmin ? fmt(*rec.dist_argmin) : "nan";
    for (int j = 0; j < n; ++j) out += "," + fmt(rec.primal[j]);
    out += "\n";
  }
  return out;
}

}  // namespace bamsf
