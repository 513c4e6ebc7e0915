#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "surfdiff/linalg.hpp"

namespace surfdiff {

// Height and its first two derivatives at a point.
struct FieldJet {
  double h = 0.0;
  Vec2 grad;
  Mat2 hess;
};

// Canonical fold of a coordinate into [0, period). fmod is exact, so inputs
// that differ by an exactly representable multiple of the period fold to
// identical bits; that is what makes evaluators built on this exactly
// periodic. Identity for inputs already inside the cell.
inline double fold_coordinate(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

inline Vec2 fold_point(Vec2 x, double period) {
  return {fold_coordinate(x.x, period), fold_coordinate(x.y, period)};
}

struct Provenance {
  std::string family;
  std::uint64_t seed = 0;
  std::string params;
};

// A frozen surface realization. Immutable after construction; jet() is safe
// to call concurrently from any number of threads.
class Field {
 public:
  virtual ~Field() = default;

  virtual FieldJet jet(Vec2 x) const = 0;

  // Cell size; h, grad h and hess h repeat with this period in both axes.
  virtual double period() const = 0;

  // Shortest feature a cell mesh has to resolve.
  virtual double min_length_scale() const { return period(); }

  virtual const Provenance& provenance() const = 0;
};

class FlatField final : public Field {
 public:
  explicit FlatField(double cell = 1.0)
      : cell_(cell), prov_{"flat", 0, "R=" + std::to_string(cell)} {}

  FieldJet jet(Vec2) const override { return {}; }
  double period() const override { return cell_; }
  const Provenance& provenance() const override { return prov_; }

 private:
  double cell_;
  Provenance prov_;
};

// h(x) = a sin(2 pi x1). The cell holds an integer number of ridges so the
// realization is exactly cell-periodic.
class RidgeField final : public Field {
 public:
  explicit RidgeField(double amplitude = 1.0, int cells = 1);

  FieldJet jet(Vec2 x) const override;
  double period() const override { return static_cast<double>(cells_); }
  double min_length_scale() const override { return 1.0; }
  const Provenance& provenance() const override { return prov_; }
  double amplitude() const { return amplitude_; }

 private:
  double amplitude_;
  int cells_;
  Provenance prov_;
};

enum class FieldFamily { flat, ridge, poisson, gaussian };

const char* family_name(FieldFamily family);

// Everything needed to draw realizations of one surface family. For the
// gaussian family R is the decorrelation half-width (cell size 2R); for the
// others it is the cell size itself.
struct FieldConfig {
  FieldFamily family = FieldFamily::flat;
  double R = 1.0;
  double alpha = 1.0;    // bump or ridge amplitude; gaussian decay rate
  double lambda = 0.5;   // poisson: expected bumps per unit area
  int modes = 1024;      // gaussian: real spectral degrees of freedom
  double decorrelation_threshold = 1e-3;
};

// Throws std::invalid_argument naming the offending parameter.
void validate_field_config(const FieldConfig& config);

// Validates parameters and draws the realization for `seed`.
std::unique_ptr<const Field> make_field(const FieldConfig& config, std::uint64_t seed);

}  // namespace surfdiff
