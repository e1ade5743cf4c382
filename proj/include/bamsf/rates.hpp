#pragma once

#include <utility>
#include <vector>

#include "bamsf/model.hpp"

namespace bamsf {

enum class RateMode { linear, power_law };

struct RateReport {
  RateMode mode = RateMode::linear;
  double parameter = 0.0;   // linear: ratio r in (0, 1]; power_law: exponent
  double r_squared = 0.0;   // quality of the log (or log-log) fit
  double fit_residual = 0.0;  // RMS residual of the fit, per sweep
  long window_begin = 0;    // [window_begin, window_end) indices used
  long window_end = 0;
  bool non_convergent = false;  // linear mode: set when r >= 1
};

/// Least-squares slope of log(y) against x; returns (slope, intercept, R^2).
/// Shared by the fitters and handy for ad-hoc fits in tests.
std::tuple<double, double, double> fit_log_linear(
    const std::vector<double>& x, const std::vector<double>& logy);

/// Per-sweep contraction ratio of a positive gap sequence: fits log(gap_t)
/// against t over the tail window (last 50% of sweeps, truncated where the
/// gap falls under 100 * machine-epsilon * dstar_scale) and reports
/// exp(slope). Input must have >= 20 entries with a usable window.
RateReport fit_linear_ratio(const std::vector<double>& gaps,
                            double dstar_scale = 1.0);

/// Power-law exponent: slope of log(values[t]) against log(t + 1) over
/// t in [skip, end). Requires values positive past skip and
/// length - skip >= 50.
RateReport fit_power_law(const std::vector<double>& values, long skip);

/// Fitted exponent of the dual gap along y = (1, eps) on the tight-exponent
/// instance, which the theory predicts to be p / (p - 1). The grid must be
/// geometric in (0, 0.1] with >= 6 points.
double fit_path_exponent(double p, const std::vector<double>& eps_grid);

}  // namespace bamsf
