#include "bamsf/rates.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "bamsf/oracle.hpp"

namespace bamsf {

std::tuple<double, double, double> fit_log_linear(
    const std::vector<double>& x, const std::vector<double>& logy) {
  const size_t n = x.size();
  if (n != logy.size() || n < 2)
    throw std::invalid_argument("fit_log_linear: need >= 2 matching points");
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += logy[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = logy[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_log_linear: degenerate abscissa");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = logy[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  const double r2 = (syy == 0.0) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  return {slope, intercept, r2};
}

RateReport fit_linear_ratio(const std::vector<double>& gaps,
                            double dstar_scale) {
  if (gaps.size() < 20)
    throw std::invalid_argument("fit_linear_ratio: need >= 20 gaps");
  const double floor =
      1e2 * std::numeric_limits<double>::epsilon() * std::abs(dstar_scale);

  // Tail window: last 50%, cut where the gap sinks into machine noise.
  size_t begin = gaps.size() / 2;
  size_t end = gaps.size();
  while (end > begin && !(gaps[end - 1] > floor)) --end;

  std::vector<double> xs, logs;
  for (size_t t = begin; t < end; ++t) {
    if (!(gaps[t] > 0.0))
      throw std::invalid_argument("fit_linear_ratio: non-positive gap");
    xs.push_back(double(t));
    logs.push_back(std::log(gaps[t]));
  }
  if (xs.size() < 10)
    throw std::invalid_argument("fit_linear_ratio: tail window too short");

  auto [slope, intercept, r2] = fit_log_linear(xs, logs);
  RateReport rep;
  rep.mode = RateMode::linear;
  rep.parameter = std::exp(slope);
  rep.r_squared = r2;
  double ss = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double e = logs[i] - (intercept + slope * xs[i]);
    ss += e * e;
  }
  rep.fit_residual = std::sqrt(ss / xs.size());
  rep.window_begin = long(begin);
  rep.window_end = long(end);
  rep.non_convergent = rep.parameter >= 1.0;
  return rep;
}

RateReport fit_power_law(const std::vector<double>& values, long skip) {
  if (skip < 0) throw std::invalid_argument("fit_power_law: skip must be >= 0");
  if (long(values.size()) - skip < 50)
    throw std::invalid_argument("fit_power_law: need length - skip >= 50");

  std::vector<double> logt, logv;
  for (size_t t = size_t(skip); t < values.size(); ++t) {
    if (!(values[t] > 0.0))
      throw std::invalid_argument("fit_power_law: non-positive value");
    logt.push_back(std::log(double(t) + 1.0));
    logv.push_back(std::log(values[t]));
  }
  auto [slope, intercept, r2] = fit_log_linear(logt, logv);
  RateReport rep;
  rep.mode = RateMode::power_law;
  rep.parameter = slope;
  rep.r_squared = r2;
  double ss = 0.0;
  for (size_t i = 0; i < logt.size(); ++i) {
    const double e = logv[i] - (intercept + slope * logt[i]);
    ss += e * e;
  }
  rep.fit_residual = std::sqrt(ss / logt.size());
  rep.window_begin = skip;
  rep.window_end = long(values.size());
  return rep;
}

double fit_path_exponent(double p, const std::vector<double>& eps_grid) {
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("fit_path_exponent: p must lie in (1, 2]");
  if (eps_grid.size() < 6)
    throw std::invalid_argument("fit_path_exponent: need >= 6 grid points");
  for (double e : eps_grid)
    if (!(e > 0.0 && e <= 0.1))
      throw std::invalid_argument(
          "fit_path_exponent: grid must lie in (0, 0.1]");

  const Instance inst = make_tight_instance(p);
  const double d_star = -0.5;
  std::vector<double> logeps, loggap;
  for (double eps : eps_grid) {
    DualPoint y;
    Vector y1(2);
    y1 << 1.0, eps;
    y.y = {y1};
    const ExtendedReal d = inst.dual_objective(y);
    if (!d.is_finite())
      throw std::invalid_argument("fit_path_exponent: infinite dual value");
    logeps.push_back(std::log(eps));
    loggap.push_back(std::log(d.value() - d_star));
  }
  auto [slope, intercept, r2] = fit_log_linear(logeps, loggap);
  (void)intercept;
  (void)r2;
  return slope;
}

}  // namespace bamsf
