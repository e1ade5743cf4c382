#include "bamsf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bamsf {

PolyhedralQP assemble_polyhedral_qp(const Instance& inst) {
  const int n = inst.dim();
  std::vector<Vector> rows;
  std::vector<double> offsets;
  auto add_row = [&](const Vector& g, double h) {
    rows.push_back(g);
    offsets.push_back(h);
  };

  for (const auto& b : inst.blocks()) {
    const Matrix& A = b.A;
    if (const auto* hs = std::get_if<Halfspace>(&b.set.variant())) {
      add_row(A.transpose() * hs->a, hs->b);
    } else if (const auto* hp = std::get_if<Hyperplane>(&b.set.variant())) {
      add_row(A.transpose() * hp->a, hp->b);
      add_row(-(A.transpose() * hp->a), -hp->b);
    } else if (const auto* box = std::get_if<Box>(&b.set.variant())) {
      for (int j = 0; j < A.rows(); ++j) {
        if (!std::isinf(box->upper[j]))
          add_row(A.row(j).transpose(), box->upper[j]);
        if (!std::isinf(box->lower[j]))
          add_row(-A.row(j).transpose(), -box->lower[j]);
      }
    } else {
      throw std::invalid_argument(
          "assemble_polyhedral_qp: non-polyhedral set variant");
    }
  }

  PolyhedralQP qp;
  qp.v_bar = inst.anchor();
  qp.G = Matrix(rows.size(), n);
  qp.h = Vector(rows.size());
  for (size_t j = 0; j < rows.size(); ++j) {
    qp.G.row(j) = rows[j].transpose();
    qp.h[j] = offsets[j];
  }
  return qp;
}

namespace {

constexpr double kFeasTol = 1e-9;

bool feasible(const PolyhedralQP& qp, const Vector& x) {
  for (int j = 0; j < qp.G.rows(); ++j) {
    const double scale = 1.0 + std::abs(qp.h[j]);
    if (qp.G.row(j).dot(x) - qp.h[j] > kFeasTol * scale) return false;
  }
  return true;
}

// Enumerate all cardinality-k subsets of {0..J-1}, invoking f on each; f
// returns true to stop.
bool for_each_subset(int J, int k,
                     const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (f(idx)) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == J - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

QPSolution solve_qp_activeset(const PolyhedralQP& qp) {
  const int J = int(qp.G.rows());
  const int n = int(qp.G.cols());
  if (J > 24)
    throw std::invalid_argument("solve_qp_activeset: more than 24 rows");

  // An optimal active set with linearly independent rows has at most n
  // elements, so cardinality-ascending enumeration up to n is exhaustive.
  QPSolution sol;
  bool found = false;
  for (int k = 0; k <= std::min(J, n) && !found; ++k) {
    found = for_each_subset(J, k, [&](const std::vector<int>& S) {
      Matrix Gs(k, n);
      Vector hs(k);
      for (int r = 0; r < k; ++r) {
        Gs.row(r) = qp.G.row(S[r]);
        hs[r] = qp.h[S[r]];
      }
      Vector x;
      if (k == 0) {
        x = qp.v_bar;
      } else {
        // Equality-constrained KKT: x = v - Gs^T mu with Gs Gs^T mu = Gs v - hs.
        const Matrix M = Gs * Gs.transpose();
        Eigen::FullPivLU<Matrix> lu(M);
        if (!lu.isInvertible()) return false;  // degenerate candidate
        const Vector mu = lu.solve(Gs * qp.v_bar - hs);
        if ((mu.array() < -kFeasTol).any()) return false;
        x = qp.v_bar - Gs.transpose() * mu;
      }
      if (!feasible(qp, x)) return false;
      sol.x = x;
      sol.active.assign(S.begin(), S.end());
      return true;
    });
  }
  if (!found)
    throw InfeasibleError("solve_qp_activeset: no KKT-consistent subset");
  return sol;
}

std::pair<double, double> example_tight(double p, double eps) {
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("example_tight: p must lie in (1, 2]");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("example_tight: eps must lie in [0, 1]");
  const double q = p / (p - 1.0);
  const double gap = std::pow(1.0 + std::pow(eps, q), 1.0 / q) - 1.0;
  return {gap, eps};
}

std::vector<RecurrenceStep> example_fails_recurrence(long T) {
  if (T < 1) throw std::invalid_argument("example_fails_recurrence: T >= 1");
  std::vector<RecurrenceStep> out;
  out.reserve(T);
  const Vector y1_star((Vector(3) << 0.0, -1.0, 1.0).finished());
  const Vector y2_star((Vector(3) << 1.0, 0.0, 0.0).finished());
  double a = 1.0;  // a_0
  for (long t = 0; t < T; ++t) {
    const double root = std::sqrt(a * a + 1.0);
    const double a_next = 0.5 * (1.0 + 1.0 / root) * a;
    RecurrenceStep step;
    step.a = a_next;
    step.y1 = Vector(3);
    step.y1 << a_next, -0.5 * (1.0 + 1.0 / root), 0.5 * (1.0 + root);
    step.y2 = Vector(3);
    step.y2 << 1.0 - a_next, 0.0, 0.0;
    step.dist_sq =
        (step.y1 - y1_star).squaredNorm() + (step.y2 - y2_star).squaredNorm();
    out.push_back(std::move(step));
    a = a_next;
  }
  return out;
}

double eig_max_sym(const Matrix& M) {
  if (M.rows() != M.cols())
    throw std::invalid_argument("eig_max_sym: matrix must be square");
  if (M.rows() > 50) throw std::invalid_argument("eig_max_sym: dim > 50");
  Matrix A = 0.5 * (M + M.transpose());
  const int n = int(A.rows());
  if (n == 1) return A(0, 0);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() < 1e-13) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double best = A(0, 0);
  for (int i = 1; i < n; ++i) best = std::max(best, A(i, i));
  return best;
}

Instance make_tight_instance(double p) {
  Vector v(2);
  v << 2.0, 0.0;
  Matrix A(2, 2);
  A << 1.0, 0.0, 0.0, 0.0;
  PNormBall ball{Vector::Zero(2), 1.0, p};
  std::vector<Block> blocks;
  blocks.push_back(Block{A, ConvexSet(ball)});
  return Instance(v, std::move(blocks));
}

Instance make_nonlinear_instance() {
  Vector v(3);
  v << 1.0, -1.0, 1.0;
  const Matrix I3 = Matrix::Identity(3, 3);
  // {x : x_3 <= -||(x_1, x_2)||}
  PolarReflectedCone c1{{1, 2, -3}};
  // {(0, x_2, x_3)}
  Matrix basis(3, 2);
  basis << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  AffineSubspace c2{basis, Vector::Zero(3)};
  std::vector<Block> blocks;
  blocks.push_back(Block{I3, ConvexSet(c1)});
  blocks.push_back(Block{I3, ConvexSet(c2)});
  return Instance(v, std::move(blocks));
}

DualPoint nonlinear_dual_solution() {
  DualPoint y;
  Vector y1(3), y2(3);
  y1 << 0.0, -1.0, 1.0;
  y2 << 1.0, 0.0, 0.0;
  y.y = {y1, y2};
  return y;
}

}  // namespace bamsf
