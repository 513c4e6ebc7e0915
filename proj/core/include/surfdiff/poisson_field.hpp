#pragma once

#include <cstdint>
#include <vector>

#include "surfdiff/field.hpp"

namespace surfdiff {

// Compactly supported C^inf bump of radius 1:
//   f(x) = alpha * exp(-1 / (1 - |x|^2))   for |x| < 1, else 0.
struct BumpSpec {
  double alpha = 1.0;
};

// Value, gradient and Hessian of the bump at displacement x from its center.
FieldJet bump_eval(const BumpSpec& spec, Vec2 x);

struct PoissonFieldParams {
  double intensity = 0.5;  // expected centers per unit area
  double alpha = 1.0;      // bump amplitude
  double R = 20.0;         // cell size; must exceed the bump diameter 2
};

// Superposition of unit-radius bumps at Poisson centers, wrapped through the
// periodic images of the cell so the height stays C^inf across cell seams.
class PoissonField final : public Field {
 public:
  PoissonField(const PoissonFieldParams& params, std::uint64_t seed);

  FieldJet jet(Vec2 x) const override;
  double period() const override { return params_.R; }
  double min_length_scale() const override { return 1.0; }
  const Provenance& provenance() const override { return prov_; }

  const PoissonFieldParams& params() const { return params_; }
  const std::vector<Vec2>& centers() const { return centers_; }

 private:
  PoissonFieldParams params_;
  std::vector<Vec2> centers_;
  // Uniform bins of width >= 1 over the cell; a 3x3 neighborhood is enough to
  // reach every center whose wrapped distance is below the bump radius.
  int nbins_ = 0;
  double bin_width_ = 0.0;
  std::vector<std::vector<int>> bins_;
  Provenance prov_;
};

PoissonField sample_poisson_field(const PoissonFieldParams& params, std::uint64_t seed);

}  // namespace surfdiff
