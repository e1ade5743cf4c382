#pragma once

#include <vector>

#include "bamsf/sets.hpp"

namespace bamsf {

/// One linear block of a BA-MSF instance: the map A_i and the set C_i
/// constraining A_i x.
struct Block {
  Matrix A;
  ConvexSet set;
};

/// Dual variable y = (y_1, ..., y_l) with y_i of the block's row dimension.
struct DualPoint {
  std::vector<Vector> y;

  static DualPoint zeros(const std::vector<int>& dims);
  double norm() const;
  double inf_norm() const;
  DualPoint operator-(const DualPoint& o) const;
};

/// Largest eigenvalue of A^T A, estimated by power iteration and inflated by
/// a factor 1 + 1e-6 so the step-size constant never undershoots. Throws for
/// a zero matrix.
double compute_gamma(const Matrix& A);

/// The problem: minimize 1/2 ||x - v||^2 subject to A_i x in C_i for all i.
/// Step-size constants gamma_i are fixed at construction; blocks whose map is
/// exactly the identity get gamma_i pinned to 1 so the method reduces
/// bit-for-bit to the classical alternating scheme.
class Instance {
public:
  Instance(Vector v_bar, std::vector<Block> blocks);

  const Vector& anchor() const { return v_bar_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int num_blocks() const { return int(blocks_.size()); }
  int dim() const { return int(v_bar_.size()); }
  double gamma(int i) const { return gamma_[i]; }
  double min_gamma() const;
  double sum_gamma() const;
  bool block_is_identity(int i) const { return identity_[i]; }
  std::vector<int> block_dims() const;

  /// A^T y = sum_i A_i^T y_i.
  Vector apply_AT(const DualPoint& y) const;

  /// Smooth part g(y) = 1/2 ||A^T y - v||^2 - 1/2 ||v||^2.
  double smooth_part(const DualPoint& y) const;

  /// Block i of grad g(y) = A_i (A^T y - v).
  Vector grad_block(int i, const Vector& ATy_minus_v) const;

  /// d(y) = g(y) + sum_i sigma_{C_i}(y_i).
  ExtendedReal dual_objective(const DualPoint& y) const;

  /// x = v - A^T y; recovers the primal solution at any dual minimizer.
  Vector primal_from_dual(const DualPoint& y) const;

  /// Prox-gradient residual G(y) = y - prox_{sigma_D}(y - grad g(y)),
  /// blockwise. Vanishes exactly at dual minimizers.
  DualPoint residual_map(const DualPoint& y) const;

  double residual_norm(const DualPoint& y) const;

  /// Lipschitz modulus of grad g, i.e. lambda_max(A^T A) for the stacked map.
  double grad_lipschitz() const;

private:
  Vector v_bar_;
  std::vector<Block> blocks_;
  std::vector<double> gamma_;
  std::vector<bool> identity_;
  double lipschitz_;
};

namespace detail {
/// Power-iteration estimate of lambda_max(A^T A) without the safety factor.
double power_lambda_max(const Matrix& A);
}  // namespace detail

}  // namespace bamsf
