#pragma once

#include <cstdint>
#include <vector>

#include "surfdiff/field.hpp"

namespace surfdiff {

struct GaussianFieldParams {
  double alpha = 0.1;      // target autocovariance exp(-pi * alpha * r^2)
  int modes = 1024;        // real degrees of freedom; square of an even integer
  double half_width = 10;  // decorrelation radius R; the periodic cell is [0, 2R)^2
  double decorrelation_threshold = 1e-3;
};

// c_alpha(r), the target autocovariance at distance r.
double target_autocovariance(const GaussianFieldParams& params, double r);

// Throws std::invalid_argument naming the offending parameter. Admissibility
// requires the target autocovariance at distance R to sit at or below the
// decorrelation threshold.
void validate_gaussian_params(const GaussianFieldParams& params);

// Stationary mean-zero Gaussian surface synthesized as a finite real
// trigonometric sum on the period-2R lattice. Exactly periodic, C^inf.
class GaussianField final : public Field {
 public:
  GaussianField(const GaussianFieldParams& params, std::uint64_t seed);

  FieldJet jet(Vec2 x) const override;
  double period() const override { return cell_; }
  double min_length_scale() const override;
  const Provenance& provenance() const override { return prov_; }

  const GaussianFieldParams& params() const { return params_; }
  std::size_t mode_pairs() const { return modes_.size(); }

 private:
  struct Mode {
    Vec2 w;  // angular wave vector 2 pi k / (2R)
    double a = 0.0, b = 0.0;
  };

  GaussianFieldParams params_;
  double cell_ = 0.0;
  std::vector<Mode> modes_;
  Provenance prov_;
};

GaussianField sample_gaussian_field(const GaussianFieldParams& params, std::uint64_t seed);

}  // namespace surfdiff
