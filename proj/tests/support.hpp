#pragma once

// Deterministic generators shared by the test binaries. Everything is driven
// by an explicit mt19937_64 so failures reproduce exactly.

#include <cmath>
#include <random>
#include <vector>

#include "bamsf/model.hpp"
#include "bamsf/oracle.hpp"
#include "bamsf/sets.hpp"

namespace support {

using bamsf::Matrix;
using bamsf::Vector;
using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(Rng& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline Vector randn(Rng& g, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d(g);
  return v;
}

inline Matrix randn_mat(Rng& g, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d(g);
  return m;
}

inline std::vector<int> random_signed_permutation(Rng& g, int m) {
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i + 1;
  std::shuffle(perm.begin(), perm.end(), g);
  for (int& e : perm)
    if (uniform(g, 0.0, 1.0) < 0.5) e = -e;
  return perm;
}

/// A random set of dimension m, mixing every variant (cones need m >= 2).
inline bamsf::SetVariant random_set(Rng& g, int m) {
  const int kind = uniform_int(g, 0, m >= 2 ? 8 : 5);
  switch (kind) {
    case 0: {
      Vector c = randn(g, m);
      Vector half(m);
      for (int i = 0; i < m; ++i) half[i] = uniform(g, 0.3, 1.5);
      Vector lo = c - half, hi = c + half;
      if (uniform(g, 0.0, 1.0) < 0.3)
        lo[uniform_int(g, 0, m - 1)] =
            -std::numeric_limits<double>::infinity();
      return bamsf::Box{lo, hi};
    }
    case 1:
      return bamsf::Halfspace{randn(g, m), uniform(g, -1.0, 1.0)};
    case 2:
      return bamsf::Hyperplane{randn(g, m), uniform(g, -1.0, 1.0)};
    case 3: {
      const int k = uniform_int(g, 1, m);
      return bamsf::AffineSubspace{randn_mat(g, m, k), randn(g, m, 0.5)};
    }
    case 4:
      return bamsf::EuclideanBall{randn(g, m, 0.5), uniform(g, 0.5, 2.0)};
    case 5:
      return bamsf::PNormBall{randn(g, m, 0.5), uniform(g, 0.5, 2.0),
                              uniform(g, 1.2, 4.0)};
    case 6:
      return bamsf::SecondOrderCone{m};
    case 7:
      return bamsf::PolarReflectedCone{random_signed_permutation(g, m)};
    default:
      return bamsf::NonnegativeOrthant{m};
  }
}

/// A random instance with mixed set variants; used by the equivalence and
/// descent checks.
inline bamsf::Instance random_instance(Rng& g, int max_n = 8,
                                       int max_blocks = 4) {
  const int n = uniform_int(g, 2, max_n);
  const int nblocks = uniform_int(g, 1, max_blocks);
  std::vector<bamsf::Block> blocks;
  for (int i = 0; i < nblocks; ++i) {
    const int m = uniform_int(g, 1, 4);
    blocks.push_back(bamsf::Block{randn_mat(g, m, n),
                                  bamsf::ConvexSet(random_set(g, m))});
  }
  return bamsf::Instance(randn(g, n, 1.5), std::move(blocks));
}

/// A random instance whose anchor is strictly feasible for every block, so
/// the solver must stop after one sweep without touching the iterate. Cone
/// blocks get their map nudged by a rank-one update so the anchor's image
/// sits well inside the cone.
inline bamsf::Instance feasible_anchor_instance(Rng& g) {
  const int n = uniform_int(g, 2, 6);
  Vector v = randn(g, n);
  if (v.norm() < 0.1) v[0] += 1.0;
  const int nblocks = uniform_int(g, 1, 3);
  std::vector<bamsf::Block> blocks;
  for (int i = 0; i < nblocks; ++i) {
    const int m = uniform_int(g, 2, 4);
    Matrix A = randn_mat(g, m, n);
    const Vector w = A * v;
    const int kind = uniform_int(g, 0, 8);
    bamsf::SetVariant set;
    switch (kind) {
      case 0: {
        Vector half(m);
        for (int j = 0; j < m; ++j) half[j] = uniform(g, 0.5, 1.5);
        set = bamsf::Box{w - half, w + half};
        break;
      }
      case 1: {
        Vector a = randn(g, m);
        set = bamsf::Halfspace{a, a.dot(w) + uniform(g, 0.5, 1.5)};
        break;
      }
      case 2: {
        Vector a = randn(g, m);
        set = bamsf::Hyperplane{a, a.dot(w)};
        break;
      }
      case 3: {
        const int k = uniform_int(g, 1, m);
        set = bamsf::AffineSubspace{randn_mat(g, m, k), w};
        break;
      }
      case 4: {
        const Vector c = w + randn(g, m, 0.3);
        set = bamsf::EuclideanBall{c, (w - c).norm() * 1.5 + 0.5};
        break;
      }
      case 5: {
        const double p = uniform(g, 1.2, 4.0);
        const Vector c = w + randn(g, m, 0.3);
        const double pd =
            std::pow((w - c).array().abs().pow(p).sum(), 1.0 / p);
        set = bamsf::PNormBall{c, pd * 1.5 + 0.5, p};
        break;
      }
      default: {
        // Pick an interior cone point z and shift A so A v lands near it.
        Vector z;
        if (kind == 6) {
          z = randn(g, m, 0.3).cwiseAbs();
          z.array() += 0.5;
          set = bamsf::NonnegativeOrthant{m};
        } else if (kind == 7) {
          z = randn(g, m, 0.3);
          z[m - 1] = z.head(m - 1).norm() + 1.0;
          set = bamsf::SecondOrderCone{m};
        } else {
          bamsf::PolarReflectedCone cone{random_signed_permutation(g, m)};
          Vector zs = randn(g, m, 0.3);
          zs[m - 1] = zs.head(m - 1).norm() + 1.0;
          // Pull the interior point back through the signed permutation.
          z = Vector(m);
          for (int j = 0; j < m; ++j) {
            const int e = cone.orientation[j];
            if (e > 0)
              z[e - 1] = zs[j];
            else
              z[-e - 1] = -zs[j];
          }
          set = cone;
        }
        A += (z - w) * v.transpose() / v.dot(v);
        break;
      }
    }
    blocks.push_back(bamsf::Block{std::move(A), bamsf::ConvexSet(set)});
  }
  return bamsf::Instance(std::move(v), std::move(blocks));
}

/// A random feasible polyhedral instance built from two halfspaces (or a
/// halfspace and a hyperplane) through the origin whose normals meet at a
/// controlled angle, plus an occasional wide inactive box. The anchor sits in
/// the infeasible wedge, so the sweep converges linearly with a clean
/// geometric tail.
inline bamsf::Instance random_polyhedral_instance(Rng& g) {
  const int n = uniform_int(g, 2, 6);
  Vector u1 = randn(g, n);
  u1.normalize();
  Vector w = randn(g, n);
  w -= u1 * u1.dot(w);
  w.normalize();
  const double theta = uniform(g, 15.0, 40.0) * M_PI / 180.0;
  const Vector u2 = std::cos(theta) * u1 + std::sin(theta) * w;

  std::vector<bamsf::Block> blocks;
  const Matrix I = Matrix::Identity(n, n);
  blocks.push_back(bamsf::Block{I, bamsf::ConvexSet(bamsf::Halfspace{u1, 0.0})});
  if (uniform(g, 0.0, 1.0) < 0.3)
    blocks.push_back(
        bamsf::Block{I, bamsf::ConvexSet(bamsf::Hyperplane{u2, 0.0})});
  else
    blocks.push_back(
        bamsf::Block{I, bamsf::ConvexSet(bamsf::Halfspace{u2, 0.0})});

  const double t1 = uniform(g, 0.5, 2.0), t2 = uniform(g, 0.5, 2.0);
  Vector tang = randn(g, n, 0.2);
  tang -= u1 * u1.dot(tang);
  tang -= u2 * (u2.dot(tang) / u2.squaredNorm());
  const Vector v = t1 * u1 + t2 * u2 + tang;

  if (uniform(g, 0.0, 1.0) < 0.5) {
    const int m = uniform_int(g, 1, 2);
    const Matrix A = randn_mat(g, m, n);
    // Wide enough that the box can never bind at the projection.
    const double c = 10.0 * (1.0 + A.cwiseAbs().sum() * (1.0 + 2.0 * v.norm()));
    blocks.push_back(bamsf::Block{
        A, bamsf::ConvexSet(bamsf::Box{Vector::Constant(m, -c),
                                       Vector::Constant(m, c)})});
  }
  return bamsf::Instance(v, std::move(blocks));
}

/// A point of the set, produced by projecting a random draw.
inline Vector sample_member(Rng& g, const bamsf::ConvexSet& set,
                            double scale = 3.0) {
  return set.project(randn(g, set.dim(), scale));
}

}  // namespace support
