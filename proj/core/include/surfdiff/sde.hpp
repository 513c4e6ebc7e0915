#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "surfdiff/field.hpp"

namespace surfdiff {

// Euler-Maruyama plan. delta must be an integer multiple of dt and the run
// covers floor(T / delta) sampling windows.
struct SimulationPlan {
  double dt = 1e-4;
  double T = 100.0;
  double delta = 0.5;
  std::uint64_t seed = 1;
  Vec2 x0;
  int msd_max_lag = 50;  // lags recorded in units of delta
};

void validate_plan(const SimulationPlan& plan);

// One explicit step x + F dt + sqrt(dt) S noise with S = sqrt(2 g^{-1}).
Vec2 em_step(const Field& field, Vec2 x, double dt, Vec2 noise);

struct TrajectoryStats {
  Mat2 D;                 // increment estimator, (1/2 delta) mean(Y_i Y_j)
  Mat2 standard_error;    // batch-means standard error per component
  std::size_t increments = 0;
  std::vector<std::pair<double, double>> msd;  // (lag time, mean squared displacement)
};

// Integrates the plan with noise addressed by (seed, step) and estimates the
// diffusion tensor from non-overlapping window increments. Throws
// std::runtime_error naming the step if the state leaves the finite range.
TrajectoryStats simulate(const Field& field, const SimulationPlan& plan);

}  // namespace surfdiff
