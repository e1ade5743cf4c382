#include "bamsf/model.hpp"

#include <cmath>
#include <random>

namespace bamsf {

DualPoint DualPoint::zeros(const std::vector<int>& dims) {
  DualPoint p;
  p.y.reserve(dims.size());
  for (int d : dims) p.y.push_back(Vector::Zero(d));
  return p;
}

double DualPoint::norm() const {
  double sq = 0.0;
  for (const auto& yi : y) sq += yi.squaredNorm();
  return std::sqrt(sq);
}

double DualPoint::inf_norm() const {
  double m = 0.0;
  for (const auto& yi : y)
    if (yi.size() > 0) m = std::max(m, yi.cwiseAbs().maxCoeff());
  return m;
}

DualPoint DualPoint::operator-(const DualPoint& o) const {
  DualPoint out;
  out.y.reserve(y.size());
  for (size_t i = 0; i < y.size(); ++i) out.y.push_back(y[i] - o.y[i]);
  return out;
}

namespace detail {

double power_lambda_max(const Matrix& A) {
  const int n = int(A.cols());
  // Deterministic start vector so repeated runs agree exactly.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  v.normalize();

  double rayleigh = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector w = A.transpose() * (A * v);
    const double next = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;  // start vector hit the kernel exactly
    v = w / nw;
    if (it > 0 && std::abs(next - rayleigh) <= 1e-12 * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return rayleigh;
}

}  // namespace detail

double compute_gamma(const Matrix& A) {
  if (A.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("compute_gamma: zero matrix");
  return (1.0 + 1e-6) * detail::power_lambda_max(A);
}

namespace {

bool is_identity(const Matrix& A) {
  if (A.rows() != A.cols()) return false;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (A(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

}  // namespace

Instance::Instance(Vector v_bar, std::vector<Block> blocks)
    : v_bar_(std::move(v_bar)), blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("instance needs >= 1 block");
  const int n = int(v_bar_.size());
  Matrix gram = Matrix::Zero(n, n);
  for (const auto& b : blocks_) {
    if (b.A.cols() != n)
      throw std::invalid_argument("block matrix column count != dim(v)");
    if (b.A.rows() != b.set.dim())
      throw std::invalid_argument("block matrix row count != set dimension");
    if (b.A.cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("block matrix must be nonzero");
    identity_.push_back(is_identity(b.A));
    gamma_.push_back(identity_.back() ? 1.0 : compute_gamma(b.A));
    gram += b.A.transpose() * b.A;
  }
  // ||A^T A|| for the stacked operator; gram is symmetric PSD.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  lipschitz_ = es.eigenvalues().maxCoeff();
}

double Instance::min_gamma() const {
  double m = gamma_[0];
  for (double g : gamma_) m = std::min(m, g);
  return m;
}

double Instance::sum_gamma() const {
  double s = 0.0;
  for (double g : gamma_) s += g;
  return s;
}

std::vector<int> Instance::block_dims() const {
  std::vector<int> dims;
  dims.reserve(blocks_.size());
  for (const auto& b : blocks_) dims.push_back(int(b.A.rows()));
  return dims;
}

Vector Instance::apply_AT(const DualPoint& y) const {
  if (int(y.y.size()) != num_blocks())
    throw std::invalid_argument("dual point block count mismatch");
  Vector out = Vector::Zero(dim());
  for (int i = 0; i < num_blocks(); ++i) {
    if (y.y[i].size() != blocks_[i].A.rows())
      throw std::invalid_argument("dual point block dimension mismatch");
    out += blocks_[i].A.transpose() * y.y[i];
  }
  return out;
}

double Instance::smooth_part(const DualPoint& y) const {
  return 0.5 * (apply_AT(y) - v_bar_).squaredNorm() -
         0.5 * v_bar_.squaredNorm();
}

Vector Instance::grad_block(int i, const Vector& ATy_minus_v) const {
  return blocks_[i].A * ATy_minus_v;
}

ExtendedReal Instance::dual_objective(const DualPoint& y) const {
  ExtendedReal total(smooth_part(y));
  for (int i = 0; i < num_blocks(); ++i)
    total += blocks_[i].set.support(y.y[i]);
  return total;
}

Vector Instance::primal_from_dual(const DualPoint& y) const {
  return v_bar_ - apply_AT(y);
}

DualPoint Instance::residual_map(const DualPoint& y) const {
  const Vector s = apply_AT(y) - v_bar_;
  DualPoint out;
  out.y.reserve(blocks_.size());
  for (int i = 0; i < num_blocks(); ++i) {
    const Vector step = y.y[i] - grad_block(i, s);
    out.y.push_back(y.y[i] - blocks_[i].set.prox_scaled_support(step, 1.0));
  }
  return out;
}

double Instance::residual_norm(const DualPoint& y) const {
  return residual_map(y).norm();
}

double Instance::grad_lipschitz() const { return lipschitz_; }

}  // namespace bamsf
