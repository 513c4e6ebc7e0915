#include "surfdiff/poisson_field.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "surfdiff/rng.hpp"

namespace surfdiff {

namespace {

// log of the smallest normal double; exp() below this is subnormal noise, so
// the bump is cut to an exact zero there to keep evaluation bit-stable.
constexpr double kMinExponent = -708.3964185322641;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldJet bump_eval(const BumpSpec& spec, Vec2 x) {
  FieldJet j;
  const double u = norm2(x);
  const double t = 1.0 - u;
  if (t <= 0.0) return j;
  const double arg = -1.0 / t;
  if (arg < kMinExponent) return j;
  const double e = spec.alpha * std::exp(arg);
  const double inv_t2 = 1.0 / (t * t);
  // grad f = -2 e x / t^2,  hess f = (-2 e / t^2) I + 4 e (1 - 2 t) / t^4 x x^T
  const double c1 = -2.0 * e * inv_t2;
  const double c2 = 4.0 * e * (1.0 - 2.0 * t) * inv_t2 * inv_t2;
  j.h = e;
  j.grad = c1 * x;
  j.hess = {c1 + c2 * x.x * x.x, c2 * x.x * x.y,
            c2 * x.y * x.x, c1 + c2 * x.y * x.y};
  return j;
}

PoissonField::PoissonField(const PoissonFieldParams& params, std::uint64_t seed)
    : params_(params) {
  if (!(params.R > 2.0))
    throw std::invalid_argument("poisson field: R must exceed bump diameter 2");
  if (!(params.intensity >= 0.0) || !std::isfinite(params.intensity))
    throw std::invalid_argument("poisson field: intensity must be nonnegative");
  if (!std::isfinite(params.alpha))
    throw std::invalid_argument("poisson field: alpha must be finite");

  SplitMix g{seed};
  const std::uint64_t count = poisson_count(g, params.intensity * params.R * params.R);
  centers_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double cx = params.R * g.next_u01();
    const double cy = params.R * g.next_u01();
    centers_.push_back({cx, cy});
  }

  nbins_ = std::max(1, static_cast<int>(std::floor(params.R)));
  bin_width_ = params.R / nbins_;
  bins_.assign(static_cast<std::size_t>(nbins_) * nbins_, {});
  for (std::size_t c = 0; c < centers_.size(); ++c) {
    const int bx = std::min(nbins_ - 1, static_cast<int>(centers_[c].x / bin_width_));
    const int by = std::min(nbins_ - 1, static_cast<int>(centers_[c].y / bin_width_));
    bins_[static_cast<std::size_t>(by) * nbins_ + bx].push_back(static_cast<int>(c));
  }

  prov_ = {"poisson", seed,
           "lambda=" + num(params.intensity) + " alpha=" + num(params.alpha) +
               " R=" + num(params.R) + " N=" + std::to_string(count)};
}

FieldJet PoissonField::jet(Vec2 x) const {
  const double R = params_.R;
  const Vec2 p = fold_point(x, R);
  const int bx = std::min(nbins_ - 1, static_cast<int>(p.x / bin_width_));
  const int by = std::min(nbins_ - 1, static_cast<int>(p.y / bin_width_));

  // Bin width >= 1 makes the 3x3 neighborhood cover the unit bump radius.
  // With fewer than 3 bins per axis the offsets {0, 1} already reach every
  // bin once; {-1, 0, 1} would visit some twice.
  static constexpr int kWide[3] = {-1, 0, 1};
  static constexpr int kNarrow[2] = {0, 1};
  static constexpr int kSingle[1] = {0};
  const int* offsets = kWide;
  int noff = 3;
  if (nbins_ < 3) {
    offsets = (nbins_ == 2) ? kNarrow : kSingle;
    noff = nbins_;
  }

  const BumpSpec spec{params_.alpha};
  FieldJet total;
  for (int oy = 0; oy < noff; ++oy) {
    int jy = by + offsets[oy];
    if (jy < 0) jy += nbins_;
    if (jy >= nbins_) jy -= nbins_;
    for (int ox = 0; ox < noff; ++ox) {
      int jx = bx + offsets[ox];
      if (jx < 0) jx += nbins_;
      if (jx >= nbins_) jx -= nbins_;
      for (int c : bins_[static_cast<std::size_t>(jy) * nbins_ + jx]) {
        Vec2 d = p - centers_[static_cast<std::size_t>(c)];
        // Nearest periodic image; unique because the bump diameter is < R.
        if (d.x > 0.5 * R) d.x -= R;
        if (d.x < -0.5 * R) d.x += R;
        if (d.y > 0.5 * R) d.y -= R;
        if (d.y < -0.5 * R) d.y += R;
        if (norm2(d) >= 1.0) continue;
        const FieldJet b = bump_eval(spec, d);
        total.h += b.h;
        total.grad += b.grad;
        total.hess += b.hess;
      }
    }
  }
  return total;
}

PoissonField sample_poisson_field(const PoissonFieldParams& params, std::uint64_t seed) {
  return PoissonField(params, seed);
}

}  // namespace surfdiff
