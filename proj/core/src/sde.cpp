#include "surfdiff/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "surfdiff/geometry.hpp"
#include "surfdiff/rng.hpp"

namespace surfdiff {

void validate_plan(const SimulationPlan& plan) {
  if (!(plan.dt > 0.0) || !std::isfinite(plan.dt))
    throw std::invalid_argument("simulation plan: dt must be positive");
  if (!(plan.delta >= plan.dt))
    throw std::invalid_argument("simulation plan: delta must be at least dt");
  const long long m = std::llround(plan.delta / plan.dt);
  if (m < 1 || std::abs(static_cast<double>(m) * plan.dt - plan.delta) > 1e-9 * plan.delta)
    throw std::invalid_argument("simulation plan: delta must be an integer multiple of dt");
  if (!(plan.T >= 2.0 * plan.delta))
    throw std::invalid_argument("simulation plan: T must cover at least two sampling windows");
  if (plan.msd_max_lag < 0)
    throw std::invalid_argument("simulation plan: msd_max_lag must be nonnegative");
}

Vec2 em_step(const Field& field, Vec2 x, double dt, Vec2 noise) {
  const Vec2 drift = drift_at(field, x);
  const Mat2 amp = diffusion_sqrt_at(field, x);
  return x + dt * drift + std::sqrt(dt) * (amp * noise);
}

TrajectoryStats simulate(const Field& field, const SimulationPlan& plan) {
  validate_plan(plan);
  const std::size_t m = static_cast<std::size_t>(std::llround(plan.delta / plan.dt));
  const std::size_t windows = static_cast<std::size_t>(std::floor(plan.T / plan.delta));
  const std::size_t nsteps = m * windows;

  std::vector<Vec2> samples(windows + 1);
  samples[0] = plan.x0;
  Vec2 x = plan.x0;
  for (std::size_t step = 0; step < nsteps; ++step) {
    const NormalPair z = noise_pair(plan.seed, step);
    x = em_step(field, x, plan.dt, {z.z0, z.z1});
    if (!std::isfinite(x.x) || !std::isfinite(x.y))
      throw std::runtime_error("simulate: state became non-finite at step " + std::to_string(step));
    if ((step + 1) % m == 0) samples[(step + 1) / m] = x;
  }

  TrajectoryStats stats;
  stats.increments = windows;
  const double inv_2delta = 1.0 / (2.0 * plan.delta);

  // Window increment products, the per-sample diffusion estimates.
  std::vector<double> s00(windows), s01(windows), s11(windows);
  for (std::size_t k = 0; k < windows; ++k) {
    const Vec2 y = samples[k + 1] - samples[k];
    s00[k] = y.x * y.x * inv_2delta;
    s01[k] = y.x * y.y * inv_2delta;
    s11[k] = y.y * y.y * inv_2delta;
  }
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double q : v) s += q;
    return s / static_cast<double>(v.size());
  };
  const double d00 = mean_of(s00);
  const double d01 = mean_of(s01);
  const double d11 = mean_of(s11);
  stats.D = {d00, d01, d01, d11};

  // Batch means absorb the serial correlation of consecutive windows.
  const std::size_t nb = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::sqrt(static_cast<double>(windows))), 2, 64);
  const std::size_t batch = windows / nb;
  auto batch_se = [&](const std::vector<double>& v) {
    double grand = 0.0;
    std::vector<double> means(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (std::size_t k = b * batch; k < (b + 1) * batch; ++k) s += v[k];
      means[b] = s / static_cast<double>(batch);
      grand += means[b];
    }
    grand /= static_cast<double>(nb);
    double var = 0.0;
    for (double q : means) var += (q - grand) * (q - grand);
    var /= static_cast<double>(nb - 1);
    return std::sqrt(var / static_cast<double>(nb));
  };
  const double se00 = batch_se(s00);
  const double se01 = batch_se(s01);
  const double se11 = batch_se(s11);
  stats.standard_error = {se00, se01, se01, se11};

  const std::size_t max_lag = std::min<std::size_t>(static_cast<std::size_t>(plan.msd_max_lag), windows);
  stats.msd.reserve(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag <= windows; ++t) acc += norm2(samples[t + lag] - samples[t]);
    acc /= static_cast<double>(windows - lag + 1);
    stats.msd.emplace_back(static_cast<double>(lag) * plan.delta, acc);
  }
  return stats;
}

}  // namespace surfdiff
