#include "surfdiff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "surfdiff/geometry.hpp"
#include "surfdiff/parallel.hpp"
#include "surfdiff/rng.hpp"

namespace surfdiff {

double det_relation(const Mat2& D, double Z) { return std::abs(det(D) * Z * Z - 1.0); }

double det_relation(const EffectiveTensor& tensor) { return det_relation(tensor.D, tensor.Z); }

SandwichReport eigen_sandwich(const EffectiveTensor& tensor, double tol_abs,
                              double discretization_allowance) {
  SandwichReport report;
  const auto [l1, l2] = sym_eigenvalues(tensor.D);
  report.lambda_min = l1;
  report.lambda_max = l2;
  const double z = tensor.Z;
  const double slack_soft = tol_abs + discretization_allowance;
  // Chain 1/Z^2 <= l1 <= 1/Z <= l2 <= 1. The upper cap holds for the
  // discrete tensor exactly, so it only gets the absolute tolerance.
  const double s1 = l1 - 1.0 / (z * z) + slack_soft;
  const double s2 = 1.0 / z - l1 + slack_soft;
  const double s3 = l2 - 1.0 / z + slack_soft;
  const double s4 = 1.0 - l2 + tol_abs;
  report.worst_violation = std::min(std::min(s1, s2), std::min(s3, s4));
  report.pass = report.worst_violation >= 0.0;
  return report;
}

double isotropy_deviation(const Mat2& D) {
  const double tr = trace(D);
  return std::max(std::abs(D.m00 - D.m11), 2.0 * std::abs(D.m01)) / tr;
}

TensorRow make_row(std::uint64_t seed, const RefineResult& result) {
  TensorRow row;
  row.seed = seed;
  row.R = result.tensor.R;
  row.subdivisions = result.tensor.subdivisions;
  row.Z = result.tensor.Z;
  row.D = result.tensor.D;
  row.lower11 = result.bounds.lower.m00;
  row.lower22 = result.bounds.lower.m11;
  row.upper11 = result.bounds.upper.m00;
  row.upper22 = result.bounds.upper.m11;
  row.det_residual = det_relation(result.tensor);
  row.converged = result.converged;
  return row;
}

std::vector<RowIssue> recheck_rows(const std::vector<TensorRow>& rows, double tol_abs,
                                   double discretization_allowance) {
  std::vector<RowIssue> issues;
  const double slack = tol_abs + discretization_allowance;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TensorRow& row = rows[i];
    if (!(std::isfinite(row.Z) && std::isfinite(row.D.m00) && std::isfinite(row.D.m01) &&
          std::isfinite(row.D.m11))) {
      issues.push_back({i, "non-finite tensor entries"});
      continue;
    }
    if (row.D.m00 < row.lower11 - slack || row.D.m00 > row.upper11 + slack)
      issues.push_back({i, "D11 outside its coordinate bounds"});
    if (row.D.m11 < row.lower22 - slack || row.D.m11 > row.upper22 + slack)
      issues.push_back({i, "D22 outside its coordinate bounds"});
    EffectiveTensor t;
    t.D = row.D;
    t.Z = row.Z;
    const SandwichReport sandwich = eigen_sandwich(t, tol_abs, discretization_allowance);
    if (!sandwich.pass) issues.push_back({i, "eigenvalues escape the depletion interval"});
    if (std::abs(det_relation(row.D, row.Z) - row.det_residual) > 1e-9)
      issues.push_back({i, "stored determinant residual does not match the tensor"});
  }
  return issues;
}

EnsembleSummary ensemble_run(const EnsembleParams& params) {
  if (params.R_values.empty()) throw std::invalid_argument("ensemble_run: R grid is empty");
  if (params.seeds_per_R < 1) throw std::invalid_argument("ensemble_run: need at least one seed per R");
  if (params.oracle_resolution < 2)
    throw std::invalid_argument("ensemble_run: oracle resolution must be at least 2");

  const std::size_t per_r = static_cast<std::size_t>(params.seeds_per_R);
  const std::size_t total = params.R_values.size() * per_r;
  EnsembleSummary summary;
  summary.rows.resize(total);
  std::vector<double> oracle_Z(total, std::numeric_limits<double>::quiet_NaN());

  RefineOptions refine = params.refine;
  refine.threads = 1;  // parallelism lives at the realization level

  run_tasks(total, params.threads, [&](std::size_t idx) {
    const std::size_t r_idx = idx / per_r;
    const std::size_t s_idx = idx % per_r;
    const std::uint64_t seed = derive_seed(params.master_seed, r_idx, s_idx);
    FieldConfig fc = params.family;
    fc.R = params.R_values[r_idx];
    TensorRow& row = summary.rows[idx];
    row.seed = seed;
    row.R = fc.R;
    try {
      const auto field = make_field(fc, seed);
      oracle_Z[idx] = average_area(*field, params.oracle_resolution).Z;
      const RefineResult result = refine_until(*field, refine);
      row = make_row(seed, result);
    } catch (const std::exception&) {
      // Flagged row: non-finite tensor, converged stays false.
      row.Z = std::numeric_limits<double>::quiet_NaN();
      row.D = {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
               std::numeric_limits<double>::quiet_NaN()};
      row.converged = false;
    }
  });

  for (std::size_t r_idx = 0; r_idx < params.R_values.size(); ++r_idx) {
    EnsembleGroup group;
    group.R = params.R_values[r_idx];
    double z_sum = 0.0;
    double oracle_sum = 0.0;
    Mat2 d_sum;
    std::vector<double> d11, d22, d12;
    for (std::size_t s_idx = 0; s_idx < per_r; ++s_idx) {
      const std::size_t idx = r_idx * per_r + s_idx;
      const TensorRow& row = summary.rows[idx];
      if (!row.converged) {
        ++group.failed;
        continue;
      }
      ++group.count;
      d11.push_back(row.D.m00);
      d22.push_back(row.D.m11);
      d12.push_back(row.D.m01);
      d_sum += row.D;
      z_sum += row.Z;
      oracle_sum += oracle_Z[idx];
    }
    if (group.count > 0) {
      const double n = static_cast<double>(group.count);
      auto mean_of = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double q : v) s += q;
        return s / n;
      };
      auto std_of = [&](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double s = 0.0;
        for (double q : v) s += (q - mean) * (q - mean);
        return std::sqrt(s / (n - 1.0));
      };
      group.mean_D11 = mean_of(d11);
      group.std_D11 = std_of(d11, group.mean_D11);
      group.mean_D22 = mean_of(d22);
      group.std_D22 = std_of(d22, group.mean_D22);
      group.mean_D12 = mean_of(d12);
      group.mean_Z = z_sum / n;
      group.area_scaling_ref = n / oracle_sum;
      group.mean_D = (1.0 / n) * d_sum;
    }
    summary.groups.push_back(group);
  }
  return summary;
}

}  // namespace surfdiff
