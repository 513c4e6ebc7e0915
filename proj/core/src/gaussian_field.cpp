#include "surfdiff/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "surfdiff/rng.hpp"

namespace surfdiff {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Candidate {
  int k1 = 0, k2 = 0;
  long ksq = 0;
};

}  // namespace

double target_autocovariance(const GaussianFieldParams& params, double r) {
  return std::exp(-std::numbers::pi * params.alpha * r * r);
}

void validate_gaussian_params(const GaussianFieldParams& params) {
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha))
    throw std::invalid_argument("gaussian field: alpha must be positive");
  if (!(params.half_width > 0.0) || !std::isfinite(params.half_width))
    throw std::invalid_argument("gaussian field: R must be positive");
  const int m = params.modes;
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  if (m < 4 || root * root != m || root % 2 != 0)
    throw std::invalid_argument("gaussian field: modes must be the square of an even integer, at least 4");
  if (!(params.decorrelation_threshold > 0.0))
    throw std::invalid_argument("gaussian field: decorrelation threshold must be positive");
  if (target_autocovariance(params, params.half_width) > params.decorrelation_threshold)
    throw std::invalid_argument(
        "gaussian field: R too small, autocovariance at distance R exceeds the decorrelation threshold");
}

GaussianField::GaussianField(const GaussianFieldParams& params, std::uint64_t seed)
    : params_(params) {
  validate_gaussian_params(params);
  cell_ = 2.0 * params.half_width;
  const double L = cell_;
  const int pairs = params.modes / 2;

  // Candidate wave numbers from the half plane k1 > 0 or (k1 == 0, k2 > 0);
  // each represents the conjugate pair {k, -k}. The box is comfortably wider
  // than the disc that the strongest `pairs` modes occupy.
  const int K = 2 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(pairs)))) + 2;
  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(2 * K + 1) * K);
  for (int k1 = 0; k1 <= K; ++k1) {
    const int lo = (k1 == 0) ? 1 : -K;
    for (int k2 = lo; k2 <= K; ++k2) {
      cand.push_back({k1, k2, static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2});
    }
  }
  // Spectral weight decreases in |k|, so sorting by |k|^2 ranks by weight
  // with exact integer keys; the (k1, k2) tail makes the order canonical.
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ksq != b.ksq) return a.ksq < b.ksq;
    if (a.k1 != b.k1) return a.k1 < b.k1;
    return a.k2 < b.k2;
  });
  cand.resize(static_cast<std::size_t>(pairs));

  // Truncated spectral weights, renormalized so the field variance is
  // exactly 1. The zero mode is excluded: the field is mean zero.
  const double scale = std::numbers::pi / (params.alpha * L * L);
  std::vector<double> weight(cand.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    weight[i] = std::exp(-scale * static_cast<double>(cand[i].ksq));
    total += weight[i];
  }

  SplitMix g{seed};
  modes_.reserve(cand.size());
  const double wstep = 2.0 * std::numbers::pi / L;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const double sigma = std::sqrt(weight[i] / total);
    const NormalPair z = normal_pair(g);
    Mode mode;
    mode.w = {wstep * cand[i].k1, wstep * cand[i].k2};
    mode.a = sigma * z.z0;
    mode.b = sigma * z.z1;
    modes_.push_back(mode);
  }

  prov_ = {"gaussian", seed,
           "alpha=" + num(params.alpha) + " modes=" + std::to_string(params.modes) +
               " R=" + num(params.half_width)};
}

FieldJet GaussianField::jet(Vec2 x) const {
  const Vec2 p = fold_point(x, cell_);
  FieldJet j;
  for (const Mode& m : modes_) {
    const double phase = dot(m.w, p);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double v = m.a * c + m.b * s;   // height contribution
    const double dv = m.b * c - m.a * s;  // its phase derivative
    j.h += v;
    j.grad += dv * m.w;
    j.hess += -v * outer(m.w, m.w);
  }
  return j;
}

double GaussianField::min_length_scale() const {
  // Correlation length of the target covariance; the spectrum concentrates
  // at wavelengths near it.
  return 1.0 / std::sqrt(params_.alpha);
}

GaussianField sample_gaussian_field(const GaussianFieldParams& params, std::uint64_t seed) {
  return GaussianField(params, seed);
}

}  // namespace surfdiff
