#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "surfdiff/field.hpp"
#include "surfdiff/geometry.hpp"
#include "surfdiff/rng.hpp"
#include "surfdiff/sde.hpp"

using namespace surfdiff;

TEST_CASE("plan validation rejects inconsistent timing") {
  SimulationPlan plan;
  CHECK_NOTHROW(validate_plan(plan));
  SimulationPlan bad = plan;
  bad.dt = 0.0;
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
  bad = plan;
  bad.delta = 0.3 * bad.dt;
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
  bad = plan;
  bad.dt = 0.3;
  bad.delta = 0.5;  // not an integer multiple
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
  bad = plan;
  bad.T = 0.6;  // fewer than two windows
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
  bad = plan;
  bad.msd_max_lag = -1;
  CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
}

TEST_CASE("flat euler step is pure diffusion") {
  const FlatField field;
  const Vec2 x{0.2, 0.4};
  const Vec2 noise{0.7, -1.1};
  const double dt = 0.01;
  const Vec2 next = em_step(field, x, dt, noise);
  const double amp = std::sqrt(2.0 * dt);
  CHECK(next.x == doctest::Approx(x.x + amp * noise.x).epsilon(1e-14));
  CHECK(next.y == doctest::Approx(x.y + amp * noise.y).epsilon(1e-14));
}

TEST_CASE("simulate reproduces a hand-rolled integration") {
  const RidgeField field(0.8, 1);
  SimulationPlan plan;
  plan.dt = 0.01;
  plan.delta = 0.02;
  plan.T = 0.08;
  plan.seed = 123;
  plan.msd_max_lag = 4;
  const TrajectoryStats stats = simulate(field, plan);
  CHECK(stats.increments == 4);

  Vec2 x = plan.x0;
  std::vector<Vec2> samples{x};
  for (std::size_t step = 0; step < 8; ++step) {
    const NormalPair z = noise_pair(plan.seed, step);
    x = em_step(field, x, plan.dt, {z.z0, z.z1});
    if ((step + 1) % 2 == 0) samples.push_back(x);
  }
  Mat2 D;
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 y = samples[k + 1] - samples[k];
    D += (1.0 / (2.0 * plan.delta * 4.0)) * outer(y, y);
  }
  CHECK(stats.D.m00 == doctest::Approx(D.m00).epsilon(1e-12));
  CHECK(stats.D.m01 == doctest::Approx(D.m01).epsilon(1e-12).scale(1.0));
  CHECK(stats.D.m11 == doctest::Approx(D.m11).epsilon(1e-12));
  CHECK(stats.msd.size() == 4);
  CHECK(stats.msd[0].first == doctest::Approx(plan.delta));
  CHECK(stats.msd[0].second ==
        doctest::Approx((norm2(samples[1] - samples[0]) + norm2(samples[2] - samples[1]) +
                         norm2(samples[3] - samples[2]) + norm2(samples[4] - samples[3])) /
                        4.0)
            .epsilon(1e-12));
}

TEST_CASE("flat trajectory recovers the identity tensor") {
  const FlatField field;
  SimulationPlan plan;
  plan.dt = 1e-3;
  plan.T = 400.0;
  plan.delta = 0.5;
  plan.seed = 5;
  plan.msd_max_lag = 10;
  const TrajectoryStats stats = simulate(field, plan);
  CHECK(stats.increments == 800);
  // Exact sampling: each window increment is N(0, 2 delta I) up to the
  // integrator, which is exact for constant coefficients.
  CHECK(std::abs(stats.D.m00 - 1.0) < 4.0 * stats.standard_error.m00);
  CHECK(std::abs(stats.D.m11 - 1.0) < 4.0 * stats.standard_error.m11);
  CHECK(std::abs(stats.D.m01) < 4.0 * stats.standard_error.m01);
  // MSD of planar Brownian motion grows as 4 t.
  const auto [lag, msd] = stats.msd.front();
  CHECK(msd == doctest::Approx(4.0 * lag).epsilon(0.2));
  const auto [lag5, msd5] = stats.msd[4];
  CHECK(msd5 == doctest::Approx(4.0 * lag5).epsilon(0.3));
}

TEST_CASE("simulation is deterministic and seed sensitive") {
  const RidgeField field(1.0, 1);
  SimulationPlan plan;
  plan.dt = 1e-3;
  plan.T = 5.0;
  plan.delta = 0.5;
  plan.seed = 9;
  const TrajectoryStats a = simulate(field, plan);
  const TrajectoryStats b = simulate(field, plan);
  CHECK(a.D.m00 == b.D.m00);
  CHECK(a.D.m11 == b.D.m11);
  CHECK(a.msd == b.msd);
  plan.seed = 10;
  const TrajectoryStats c = simulate(field, plan);
  CHECK(a.D.m00 != c.D.m00);
}

TEST_CASE("extending the horizon keeps the earlier noise addresses") {
  const RidgeField field(1.0, 1);
  SimulationPlan plan;
  plan.dt = 0.01;
  plan.delta = 0.1;
  plan.T = 1.0;
  plan.seed = 31;
  plan.msd_max_lag = 1;
  const TrajectoryStats short_run = simulate(field, plan);
  plan.T = 2.0;
  const TrajectoryStats long_run = simulate(field, plan);
  // The first-lag MSD over the shared prefix differs only by the averaging
  // set, so recompute both by hand from re-integrated trajectories.
  Vec2 x = plan.x0;
  std::vector<Vec2> samples{x};
  for (std::size_t step = 0; step < 200; ++step) {
    const NormalPair z = noise_pair(plan.seed, step);
    x = em_step(field, x, plan.dt, {z.z0, z.z1});
    if ((step + 1) % 10 == 0) samples.push_back(x);
  }
  double acc10 = 0.0;
  for (int t = 0; t < 10; ++t) acc10 += norm2(samples[t + 1] - samples[t]);
  CHECK(short_run.msd[0].second == doctest::Approx(acc10 / 10.0).epsilon(1e-12));
  double acc20 = 0.0;
  for (int t = 0; t < 20; ++t) acc20 += norm2(samples[t + 1] - samples[t]);
  CHECK(long_run.msd[0].second == doctest::Approx(acc20 / 20.0).epsilon(1e-12));
}

TEST_CASE("divergence is reported with the failing step") {
  // Amplitude large enough that the metric overflows and the coefficients
  // degenerate to NaN on the first evaluation.
  const RidgeField field(1e300, 1);
  SimulationPlan plan;
  plan.dt = 0.01;
  plan.delta = 0.02;
  plan.T = 0.04;
  plan.x0 = {0.125, 0.0};
  CHECK_THROWS_WITH_AS(simulate(field, plan),
                       "simulate: state became non-finite at step 0", std::runtime_error);
}
