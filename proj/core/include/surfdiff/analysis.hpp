#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surfdiff/cell_solver.hpp"
#include "surfdiff/field.hpp"

namespace surfdiff {

// |det(D) Z^2 - 1|, the residual of the determinant identity.
double det_relation(const EffectiveTensor& tensor);
double det_relation(const Mat2& D, double Z);

// Checks 1/Z^2 <= l1 <= 1/Z <= l2 <= 1 for the eigenvalues of D.
struct SandwichReport {
  bool pass = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double worst_violation = 0.0;  // most negative slack across the four inequalities
};

SandwichReport eigen_sandwich(const EffectiveTensor& tensor, double tol_abs = 1e-6,
                              double discretization_allowance = 1e-2);

// max(|D11 - D22|, 2 |D12|) / trace(D); zero for exactly isotropic tensors.
double isotropy_deviation(const Mat2& D);

// One solved realization, the unit the tensor CSV stores.
struct TensorRow {
  std::uint64_t seed = 0;
  double R = 0.0;
  int subdivisions = 0;
  double Z = 1.0;
  Mat2 D;
  double lower11 = 0.0, lower22 = 0.0;
  double upper11 = 0.0, upper22 = 0.0;
  double det_residual = 0.0;
  bool converged = false;
};

TensorRow make_row(std::uint64_t seed, const RefineResult& result);

// Re-derives the checkable structure of loaded rows: bounds order along the
// axes, eigenvalue depletion and the stored determinant residual.
struct RowIssue {
  std::size_t row = 0;
  std::string what;
};
std::vector<RowIssue> recheck_rows(const std::vector<TensorRow>& rows,
                                   double tol_abs = 1e-6,
                                   double discretization_allowance = 1e-2);

struct EnsembleParams {
  FieldConfig family;
  std::vector<double> R_values;
  int seeds_per_R = 50;
  RefineOptions refine;
  std::uint64_t master_seed = 1;
  int threads = 1;
  int oracle_resolution = 1024;  // tensor-grid points for the 1/Z reference
};

struct EnsembleGroup {
  double R = 0.0;
  int count = 0;              // converged realizations only
  int failed = 0;
  double mean_D11 = 0.0, std_D11 = 0.0;
  double mean_D22 = 0.0, std_D22 = 0.0;
  double mean_D12 = 0.0;
  double mean_Z = 0.0;
  double area_scaling_ref = 0.0;  // 1 / (mean quadrature Z at oracle resolution)
  Mat2 mean_D;
};

struct EnsembleSummary {
  std::vector<EnsembleGroup> groups;
  std::vector<TensorRow> rows;  // all realizations, failures flagged
};

// Per-seed refine_until sweeps over the R grid. Seeds derive from the master
// seed by counter splitting, so results do not depend on scheduling order or
// thread count. Per-realization failures become flagged rows.
EnsembleSummary ensemble_run(const EnsembleParams& params);

}  // namespace surfdiff
