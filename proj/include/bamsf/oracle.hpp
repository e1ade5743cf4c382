#pragma once

#include <utility>
#include <vector>

#include "bamsf/model.hpp"

namespace bamsf {

/// min 1/2 ||x - v||^2 s.t. <g_j, x> <= h_j, j = 1..J. Assembled from
/// instances whose sets are boxes, halfspaces or hyperplanes composed with
/// the block maps; hyperplanes contribute two opposing rows.
struct PolyhedralQP {
  Vector v_bar;
  Matrix G;  // J x n constraint normals, one per row
  Vector h;
};

class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Builds the row representation of an instance with polyhedral sets only.
/// Throws invalid_argument for any other set variant.
PolyhedralQP assemble_polyhedral_qp(const Instance& inst);

struct QPSolution {
  Vector x;
  std::vector<int> active;  // row indices active at the optimum
};

/// Exact projection by active-set enumeration: subsets of constraint rows are
/// tried in order of increasing cardinality; the first candidate that is
/// primal feasible with nonnegative multipliers is the projection, by KKT
/// sufficiency. Requires at most 24 rows.
QPSolution solve_qp_activeset(const PolyhedralQP& qp);

/// Closed-form quantities along the path y = (1, eps) of the tight-exponent
/// instance: the objective gap (1 + eps^{p/(p-1)})^{(p-1)/p} - 1 and the
/// distance eps to the singleton solution set.
std::pair<double, double> example_tight(double p, double eps);

struct RecurrenceStep {
  double a;        // a_{t+1}
  Vector y1;       // in R^3
  Vector y2;       // in R^3
  double dist_sq;  // squared distance of (y1, y2) to the dual solution
};

/// Analytic iterates of the no-linear-rate example: a_{t+1} =
/// (1/2)(1 + 1/sqrt(a_t^2 + 1)) a_t with a_0 = 1, and the corresponding
/// (y_1, y_2) trajectory. Returns steps for t = 0..T-1 (i.e. iterates
/// y^1..y^T).
std::vector<RecurrenceStep> example_fails_recurrence(long T);

/// Largest eigenvalue of a symmetric matrix (dimension <= 50) by cyclic
/// Jacobi rotations; the input is symmetrized as (M + M^T)/2 first.
double eig_max_sym(const Matrix& M);

// Constructors for the two built-in study instances with known solutions.

/// 2-D instance with anchor (2, 0), one block A = [[1,0],[0,0]] and the unit
/// p-norm ball; the solution is x* = (1, 0) and the dual optimum is
/// y* = (1, 0) with d* = -1/2.
Instance make_tight_instance(double p);

/// 3-D two-block instance with anchor (1, -1, 1), identity maps, the
/// reflected cone {x : x_3 <= -||(x_1, x_2)||} and the plane {x_1 = 0}. The
/// dual optimum is y* = ((0,-1,1), (1,0,0)) with d* = -3/2, approached at a
/// Theta(1/sqrt(t)) rate.
Instance make_nonlinear_instance();

/// Dual solution of make_nonlinear_instance().
DualPoint nonlinear_dual_solution();

}  // namespace bamsf
