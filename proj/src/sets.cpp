#include "bamsf/sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace bamsf {

namespace {

// Relative tolerance for support-function domain membership. Iterates of the
// dual method land in these domains only up to rounding, so the test must not
// spuriously return +inf.
double domain_tol(const Vector& y) { return 1e-9 * (1.0 + y.norm()); }

int variant_dim(const SetVariant& v) {
  struct Visitor {
    int operator()(const Box& s) const { return int(s.lower.size()); }
    int operator()(const Halfspace& s) const { return int(s.a.size()); }
    int operator()(const Hyperplane& s) const { return int(s.a.size()); }
    int operator()(const AffineSubspace& s) const {
      return int(s.anchor.size());
    }
    int operator()(const EuclideanBall& s) const {
      return int(s.center.size());
    }
    int operator()(const PNormBall& s) const { return int(s.center.size()); }
    int operator()(const SecondOrderCone& s) const { return s.dim; }
    int operator()(const PolarReflectedCone& s) const {
      return int(s.orientation.size());
    }
    int operator()(const NonnegativeOrthant& s) const { return s.dim; }
  };
  return std::visit(Visitor{}, v);
}

void validate(const SetVariant& v, int dim) {
  if (dim <= 0) throw std::invalid_argument("set dimension must be positive");
  if (const auto* b = std::get_if<Box>(&v)) {
    if (b->upper.size() != b->lower.size())
      throw std::invalid_argument("Box: bound dimensions differ");
    for (int i = 0; i < dim; ++i) {
      if (std::isnan(b->lower[i]) || std::isnan(b->upper[i]) ||
          b->lower[i] > b->upper[i])
        throw std::invalid_argument("Box: requires lower <= upper");
    }
  } else if (const auto* h = std::get_if<Halfspace>(&v)) {
    if (h->a.norm() == 0.0)
      throw std::invalid_argument("Halfspace: zero normal");
  } else if (const auto* h = std::get_if<Hyperplane>(&v)) {
    if (h->a.norm() == 0.0)
      throw std::invalid_argument("Hyperplane: zero normal");
  } else if (const auto* a = std::get_if<AffineSubspace>(&v)) {
    if (a->basis.rows() != a->anchor.size())
      throw std::invalid_argument("AffineSubspace: basis/anchor mismatch");
  } else if (const auto* e = std::get_if<EuclideanBall>(&v)) {
    if (!(e->radius > 0.0))
      throw std::invalid_argument("EuclideanBall: radius must be positive");
  } else if (const auto* p = std::get_if<PNormBall>(&v)) {
    if (!(p->radius > 0.0))
      throw std::invalid_argument("PNormBall: radius must be positive");
    if (!(p->p >= 1.1 && p->p <= 10.0))
      throw std::invalid_argument("PNormBall: p must lie in [1.1, 10]");
  } else if (const auto* s = std::get_if<SecondOrderCone>(&v)) {
    if (s->dim < 2)
      throw std::invalid_argument("SecondOrderCone: dim must be >= 2");
  } else if (const auto* r = std::get_if<PolarReflectedCone>(&v)) {
    if (dim < 2)
      throw std::invalid_argument("PolarReflectedCone: dim must be >= 2");
    std::vector<bool> seen(dim, false);
    for (int e : r->orientation) {
      int idx = std::abs(e);
      if (idx < 1 || idx > dim || seen[idx - 1])
        throw std::invalid_argument(
            "PolarReflectedCone: orientation must be a signed permutation");
      seen[idx - 1] = true;
    }
  }
}

// Apply the signed permutation T of a PolarReflectedCone.
Vector apply_orientation(const PolarReflectedCone& c, const Vector& x) {
  Vector out(x.size());
  for (int j = 0; j < int(c.orientation.size()); ++j) {
    int e = c.orientation[j];
    out[j] = (e > 0 ? x[e - 1] : -x[-e - 1]);
  }
  return out;
}

// Apply T^{-1} = T^T.
Vector apply_orientation_inverse(const PolarReflectedCone& c, const Vector& x) {
  Vector out(x.size());
  for (int j = 0; j < int(c.orientation.size()); ++j) {
    int e = c.orientation[j];
    if (e > 0)
      out[e - 1] = x[j];
    else
      out[-e - 1] = -x[j];
  }
  return out;
}

Vector project_soc(const Vector& u) {
  const int n = int(u.size()) - 1;
  const double r = u[n];
  const double s = u.head(n).norm();
  if (r >= s) return u;
  Vector out = Vector::Zero(u.size());
  if (r <= -s) return out;
  const double tau = 0.5 * (s + r);
  out.head(n) = (tau / s) * u.head(n);
  out[n] = tau;
  return out;
}

// Inner scalar equation of the p-ball projection: given s = |u_i| >= 0 and
// lambda >= 0, solve m + lambda * p * m^{p-1} = s for m in [0, s].
// The left side is strictly increasing in m, so bisection brackets are safe.
double solve_inner_magnitude(double s, double lambda, double p) {
  if (s == 0.0 || lambda == 0.0) return s;
  double lo = 0.0, hi = s;
  double m = s / (1.0 + lambda * p);  // exact for p = 2, a fine start otherwise
  for (int it = 0; it < 100; ++it) {
    const double mp1 = std::pow(m, p - 1.0);
    const double f = m + lambda * p * mp1 - s;
    if (std::abs(f) <= 1e-15 * (1.0 + s)) return m;
    if (f > 0.0)
      hi = m;
    else
      lo = m;
    const double df = 1.0 + lambda * p * (p - 1.0) * std::pow(m, p - 2.0);
    double step = m - f / df;
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
    m = step;
  }
  return m;
}

}  // namespace

Vector project_pnorm_ball(const Vector& u, double beta, double p,
                          double* lambda_out) {
  const int n = int(u.size());
  const double pnorm = std::pow(
      u.array().abs().pow(p).sum(), 1.0 / p);
  if (pnorm <= beta) {
    if (lambda_out) *lambda_out = 0.0;
    return u;
  }

  Vector mags(n);
  auto eval = [&](double lambda) {
    for (int i = 0; i < n; ++i)
      mags[i] = solve_inner_magnitude(std::abs(u[i]), lambda, p);
    return std::pow(mags.array().pow(p).sum(), 1.0 / p);
  };

  // Bracket the multiplier: norm(lambda) is strictly decreasing in lambda.
  double lo = 0.0, hi = 1.0;
  while (eval(hi) > beta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300)
      throw NumericalError("p-ball projection: multiplier bracket overflow",
                           eval(lo) - beta);
  }

  double lambda = 0.5 * (lo + hi);
  double resid = 0.0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const double norm = eval(lambda);
    resid = norm - beta;
    if (std::abs(resid) <= 1e-12) {
      converged = true;
      break;
    }
    if (resid > 0.0)
      lo = lambda;
    else
      hi = lambda;
    // Newton step on lambda -> ||x(lambda)||_p - beta, safeguarded by the
    // bisection bracket.
    double dnorm = 0.0;
    const double scale = std::pow(norm, 1.0 - p);
    for (int i = 0; i < n; ++i) {
      const double m = mags[i];
      if (m == 0.0) continue;
      const double dm = -p * std::pow(m, p - 1.0) /
                        (1.0 + lambda * p * (p - 1.0) * std::pow(m, p - 2.0));
      dnorm += scale * std::pow(m, p - 1.0) * dm;
    }
    double next = (dnorm != 0.0) ? lambda - resid / dnorm : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }
  if (!converged)
    throw NumericalError("p-ball projection: multiplier iteration exhausted",
                         resid);
  if (lambda_out) *lambda_out = lambda;

  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = (u[i] < 0.0 ? -mags[i] : mags[i]);
  return x;
}

ConvexSet::ConvexSet(SetVariant v) : variant_(std::move(v)) {
  dim_ = variant_dim(variant_);
  validate(variant_, dim_);
  if (const auto* a = std::get_if<AffineSubspace>(&variant_)) {
    // Orthonormalize once; projections then reduce to Q Q^T.
    Eigen::ColPivHouseholderQR<Matrix> qr(a->basis);
    const auto rank = qr.rank();
    Matrix q = qr.householderQ() * Matrix::Identity(dim_, rank);
    ortho_basis_ = q;
  }
}

void ConvexSet::check_dim(const Vector& u) const {
  if (int(u.size()) != dim_)
    throw std::invalid_argument("vector dimension does not match set");
}

Vector ConvexSet::project(const Vector& u) const {
  check_dim(u);
  struct Visitor {
    const Vector& u;
    const Matrix& q;
    Vector operator()(const Box& s) const {
      return u.cwiseMax(s.lower).cwiseMin(s.upper);
    }
    Vector operator()(const Halfspace& s) const {
      const double viol = s.a.dot(u) - s.b;
      if (viol <= 0.0) return u;
      return u - (viol / s.a.squaredNorm()) * s.a;
    }
    Vector operator()(const Hyperplane& s) const {
      return u - ((s.a.dot(u) - s.b) / s.a.squaredNorm()) * s.a;
    }
    Vector operator()(const AffineSubspace& s) const {
      return s.anchor + q * (q.transpose() * (u - s.anchor));
    }
    Vector operator()(const EuclideanBall& s) const {
      const Vector d = u - s.center;
      const double n = d.norm();
      if (n <= s.radius) return u;
      return s.center + (s.radius / n) * d;
    }
    Vector operator()(const PNormBall& s) const {
      return s.center + project_pnorm_ball(u - s.center, s.radius, s.p);
    }
    Vector operator()(const SecondOrderCone&) const { return project_soc(u); }
    Vector operator()(const PolarReflectedCone& s) const {
      return apply_orientation_inverse(s, project_soc(apply_orientation(s, u)));
    }
    Vector operator()(const NonnegativeOrthant&) const {
      return u.cwiseMax(0.0);
    }
  };
  return std::visit(Visitor{u, ortho_basis_}, variant_);
}

ExtendedReal ConvexSet::support(const Vector& y) const {
  check_dim(y);
  const double tol = domain_tol(y);
  struct Visitor {
    const Vector& y;
    const Matrix& q;
    const ConvexSet& set;
    double tol;
    ExtendedReal operator()(const Box& s) const {
      double total = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        if (y[i] > tol) {
          if (std::isinf(s.upper[i])) return ExtendedReal::infinity();
          total += y[i] * s.upper[i];
        } else if (y[i] < -tol) {
          if (std::isinf(s.lower[i])) return ExtendedReal::infinity();
          total += y[i] * s.lower[i];
        } else if (!std::isinf(s.upper[i]) && !std::isinf(s.lower[i])) {
          total += std::max(y[i] * s.upper[i], y[i] * s.lower[i]);
        }
      }
      return ExtendedReal(total);
    }
    ExtendedReal operator()(const Halfspace& s) const {
      const double t = s.a.dot(y) / s.a.squaredNorm();
      if (t < -tol / s.a.norm()) return ExtendedReal::infinity();
      if ((y - t * s.a).norm() > tol) return ExtendedReal::infinity();
      return ExtendedReal(std::max(t, 0.0) * s.b);
    }
    ExtendedReal operator()(const Hyperplane& s) const {
      const double t = s.a.dot(y) / s.a.squaredNorm();
      if ((y - t * s.a).norm() > tol) return ExtendedReal::infinity();
      return ExtendedReal(t * s.b);
    }
    ExtendedReal operator()(const AffineSubspace& s) const {
      if ((q.transpose() * y).norm() > tol) return ExtendedReal::infinity();
      return ExtendedReal(y.dot(s.anchor));
    }
    ExtendedReal operator()(const EuclideanBall& s) const {
      return ExtendedReal(y.dot(s.center) + s.radius * y.norm());
    }
    ExtendedReal operator()(const PNormBall& s) const {
      const double qexp = s.p / (s.p - 1.0);
      const double qnorm = std::pow(y.array().abs().pow(qexp).sum(), 1.0 / qexp);
      return ExtendedReal(y.dot(s.center) + s.radius * qnorm);
    }
    // For any closed convex cone K, dist(y, K^o) = ||Proj_K(y)|| by the
    // Moreau decomposition, so polar membership is one projection away.
    ExtendedReal cone_support() const {
      if (set.project(y).norm() > tol) return ExtendedReal::infinity();
      return ExtendedReal(0.0);
    }
    ExtendedReal operator()(const SecondOrderCone&) const {
      return cone_support();
    }
    ExtendedReal operator()(const PolarReflectedCone&) const {
      return cone_support();
    }
    ExtendedReal operator()(const NonnegativeOrthant&) const {
      return cone_support();
    }
  };
  return std::visit(Visitor{y, ortho_basis_, *this, tol}, variant_);
}

bool ConvexSet::contains(const Vector& u, double tol) const {
  check_dim(u);
  if (tol < 0.0) throw std::invalid_argument("contains: tol must be >= 0");
  return (u - project(u)).norm() <= tol * (1.0 + u.norm());
}

Vector ConvexSet::prox_scaled_support(const Vector& u, double r) const {
  check_dim(u);
  if (!(r > 0.0))
    throw std::invalid_argument("prox_scaled_support: r must be positive");
  return u - r * project(u / r);
}

}  // namespace bamsf
