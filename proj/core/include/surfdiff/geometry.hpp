#pragma once

#include <cstdint>

#include "surfdiff/field.hpp"
#include "surfdiff/linalg.hpp"

namespace surfdiff {

// Pointwise data of the graph metric g = I + grad h (x) grad h.
struct MetricPoint {
  Vec2 grad_h;
  double det_g = 1.0;        // 1 + |grad h|^2
  Mat2 inv_g;                // I - (grad h (x) grad h) / det_g
  double area_element = 1.0; // sqrt(det_g)
};

MetricPoint metric_at(const Field& field, Vec2 x);

// Drift of the in-plane diffusion, (1/sqrt|g|) div(sqrt|g| g^{-1}) in closed
// form; see the derivation note in geometry.cpp.
Vec2 drift_at(const Field& field, Vec2 x);

// Principal square root of 2 g^{-1}, the noise amplitude of the SDE.
Mat2 diffusion_sqrt_at(const Field& field, Vec2 x);

struct AverageArea {
  double Z = 1.0;              // cell average of sqrt(det g); always >= 1
  int resolution = 0;          // tensor-grid points per axis (0 for Monte Carlo)
  double error_estimate = 0.0; // Richardson estimate from two grid levels
  double standard_error = 0.0; // Monte Carlo mode only
};

// Midpoint tensor-grid quadrature of the area element over one cell, the same
// evaluation rule the cell solver applies per element.
AverageArea average_area(const Field& field, int resolution);

// Monte Carlo variant with a standard error, for cross-checking quadrature.
AverageArea average_area_mc(const Field& field, std::size_t samples, std::uint64_t seed);

}  // namespace surfdiff
