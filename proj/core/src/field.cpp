#include "surfdiff/field.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "surfdiff/gaussian_field.hpp"
#include "surfdiff/poisson_field.hpp"

namespace surfdiff {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RidgeField::RidgeField(double amplitude, int cells) : amplitude_(amplitude), cells_(cells) {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("ridge field: amplitude must be finite");
  if (cells < 1) throw std::invalid_argument("ridge field: cell must hold at least one ridge period");
  prov_ = {"ridge", 0, "alpha=" + num(amplitude_) + " R=" + std::to_string(cells_)};
}

FieldJet RidgeField::jet(Vec2 x) const {
  // Unit ridge period; the cell period is an integer multiple of it.
  const double u = fold_coordinate(x.x, 1.0);
  const double w = 2.0 * std::numbers::pi;
  const double s = std::sin(w * u);
  const double c = std::cos(w * u);
  FieldJet j;
  j.h = amplitude_ * s;
  j.grad = {amplitude_ * w * c, 0.0};
  j.hess.m00 = -amplitude_ * w * w * s;
  return j;
}

const char* family_name(FieldFamily family) {
  switch (family) {
    case FieldFamily::flat: return "flat";
    case FieldFamily::ridge: return "ridge";
    case FieldFamily::poisson: return "poisson";
    case FieldFamily::gaussian: return "gaussian";
  }
  return "unknown";
}

void validate_field_config(const FieldConfig& config) {
  switch (config.family) {
    case FieldFamily::flat:
      if (!(config.R > 0.0)) throw std::invalid_argument("flat field: R must be positive");
      break;
    case FieldFamily::ridge: {
      if (!(config.R >= 1.0) || config.R != std::floor(config.R))
        throw std::invalid_argument("ridge field: R must be a positive integer number of ridge periods");
      if (!std::isfinite(config.alpha))
        throw std::invalid_argument("ridge field: alpha must be finite");
      break;
    }
    case FieldFamily::poisson: {
      if (!(config.R > 2.0)) throw std::invalid_argument("poisson field: R must exceed bump diameter 2");
      if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
        throw std::invalid_argument("poisson field: lambda must be nonnegative");
      if (!std::isfinite(config.alpha))
        throw std::invalid_argument("poisson field: alpha must be finite");
      break;
    }
    case FieldFamily::gaussian: {
      GaussianFieldParams p;
      p.alpha = config.alpha;
      p.modes = config.modes;
      p.half_width = config.R;
      p.decorrelation_threshold = config.decorrelation_threshold;
      validate_gaussian_params(p);
      break;
    }
  }
}

std::unique_ptr<const Field> make_field(const FieldConfig& config, std::uint64_t seed) {
  validate_field_config(config);
  switch (config.family) {
    case FieldFamily::flat:
      return std::make_unique<FlatField>(config.R);
    case FieldFamily::ridge:
      return std::make_unique<RidgeField>(config.alpha, static_cast<int>(config.R));
    case FieldFamily::poisson: {
      PoissonFieldParams p;
      p.intensity = config.lambda;
      p.alpha = config.alpha;
      p.R = config.R;
      return std::make_unique<PoissonField>(p, seed);
    }
    case FieldFamily::gaussian: {
      GaussianFieldParams p;
      p.alpha = config.alpha;
      p.modes = config.modes;
      p.half_width = config.R;
      p.decorrelation_threshold = config.decorrelation_threshold;
      return std::make_unique<GaussianField>(p, seed);
    }
  }
  throw std::invalid_argument("make_field: unknown family");
}

}  // namespace surfdiff
