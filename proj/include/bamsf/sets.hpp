#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bamsf/extended_real.hpp"

namespace bamsf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when an iterative routine fails to reach its tolerance within the
/// iteration budget. Carries the residual it did achieve.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double achieved_residual)
      : std::runtime_error(what), residual(achieved_residual) {}
  double residual;
};

// Variant parameter blocks. Dimension is implied by the parameter vectors
// except for the parameter-free cones, which carry it explicitly.

struct Box {
  Vector lower;  // entries may be -inf
  Vector upper;  // entries may be +inf
};

struct Halfspace {  // {x : <a,x> <= b}
  Vector a;
  double b;
};

struct Hyperplane {  // {x : <a,x> = b}
  Vector a;
  double b;
};

struct AffineSubspace {  // anchor + range(basis)
  Matrix basis;          // columns span the direction space
  Vector anchor;
};

struct EuclideanBall {
  Vector center;
  double radius;
};

struct PNormBall {  // {x : ||x - center||_p <= radius}, p in [1.1, 10]
  Vector center;
  double radius;
  double p;
};

struct SecondOrderCone {  // {(x, r) in R^{dim} : r >= ||x||}
  int dim;
};

/// A signed coordinate permutation composed with the second-order cone:
/// {x : Tx in SOC} with (Tx)_j = sgn(orientation[j]) * x_{|orientation[j]|-1}.
/// Covers reflected cones such as {x : x_3 <= -||(x_1, x_2)||} via
/// orientation (1, 2, -3).
struct PolarReflectedCone {
  std::vector<int> orientation;  // entries are +-(1..dim), a permutation
};

struct NonnegativeOrthant {
  int dim;
};

using SetVariant =
    std::variant<Box, Halfspace, Hyperplane, AffineSubspace, EuclideanBall,
                 PNormBall, SecondOrderCone, PolarReflectedCone,
                 NonnegativeOrthant>;

/// A closed convex set presented through its Euclidean projection, support
/// function and a tolerance-based membership test. Immutable after
/// construction; all operations are pure.
class ConvexSet {
public:
  explicit ConvexSet(SetVariant v);

  int dim() const { return dim_; }
  const SetVariant& variant() const { return variant_; }

  /// Euclidean projection of u onto the set.
  Vector project(const Vector& u) const;

  /// sup_{z in set} <y, z> as an extended real.
  ExtendedReal support(const Vector& y) const;

  /// true iff ||u - project(u)|| <= tol * (1 + ||u||).
  bool contains(const Vector& u, double tol) const;

  /// prox of r * sigma_set at u, via the Moreau identity
  /// prox_{r sigma}(u) = u - r * Proj(u / r). Requires r > 0.
  Vector prox_scaled_support(const Vector& u, double r) const;

private:
  SetVariant variant_;
  int dim_;
  Matrix ortho_basis_;  // AffineSubspace only: orthonormalized basis

  void check_dim(const Vector& u) const;
};

/// Projection onto the p-norm ball centered at the origin. Exposed for the
/// KKT-residual checks in tests. On return, if a multiplier lambda > 0 was
/// needed, |  ||x||_p - beta  | <= 1e-12 and each coordinate satisfies
/// x_i + lambda * p * sgn(x_i) |x_i|^{p-1} = u_i to high accuracy.
Vector project_pnorm_ball(const Vector& u, double beta, double p,
                          double* lambda_out = nullptr);

}  // namespace bamsf
