#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bamsf/model.hpp"

namespace bamsf {

struct SolverConfig {
  long max_sweeps = 1000000;
  double step_tol = 1e-10;      // stop when ||y^{t+1} - y^t|| <= step_tol
  double residual_tol = 1e-9;   // stop when ||G(y^t)|| <= residual_tol
  long record_every = 1;
  bool assert_descent = false;
  bool record_primal = true;

  // When the optimum is known (built-in studies, oracle runs), the history can
  // carry the gap and the distance to the dual solution set.
  std::optional<double> d_star;
  std::optional<DualPoint> y_star;  // singleton Argmin d only

  // Invoked after every sweep with (t, y^{t+1}); used by reproduction runs
  // that need the raw iterates.
  std::function<void(long, const DualPoint&)> on_sweep;
};

struct SweepRecord {
  long sweep = 0;
  ExtendedReal d_value;
  double step_norm = 0.0;
  double residual_norm = 0.0;
  Vector primal;
  std::optional<double> gap;
  std::optional<double> dist_argmin;
};

enum class Termination { step_tol, residual_tol, max_sweeps };

std::string to_string(Termination t);

struct SolveResult {
  DualPoint y;
  Vector x;
  Termination reason = Termination::max_sweeps;
  long sweeps = 0;
  std::vector<SweepRecord> history;
};

/// Thrown when assert_descent detects a sweep that fails the per-sweep
/// decrease inequality, which indicates an understated step-size constant or
/// a projection bug.
class DescentViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One Gauss-Seidel sweep of the Dykstra-type scheme. x_in must equal
/// primal_from_dual(inst, y); the pair is updated in place and the invariant
/// x = v - A^T y is maintained by construction. The single projection per
/// block is shared by the x and y updates.
void sweep_dykstra(const Instance& inst, DualPoint& y, Vector& x_in);

/// Reference sweep in proximal coordinate-descent form: each block applies
/// prox_{gamma_i^{-1} sigma_{C_i}} to a fresh gradient step, with no running
/// primal iterate. Agrees with sweep_dykstra to roundoff.
DualPoint sweep_cgd_reference(const Instance& inst, const DualPoint& y);

/// Full solve from y = 0, x = v.
SolveResult solve(const Instance& inst, const SolverConfig& cfg);

/// History CSV with deterministic formatting: 17 significant digits, '.'
/// decimal separator, '\n' line endings. Columns: sweep, d_value ("inf" when
/// infinite), step_norm, residual_norm, gap, dist_argmin ("nan" when
/// unknown), then x_0..x_{n-1} when emit_x is set.
std::string history_to_csv(const std::vector<SweepRecord>& history,
                           bool emit_x);

}  // namespace bamsf
