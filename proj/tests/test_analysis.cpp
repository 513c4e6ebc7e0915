#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "surfdiff/analysis.hpp"
#include "surfdiff/rng.hpp"

using namespace surfdiff;

TEST_CASE("determinant relation measures the duality residual") {
  CHECK(det_relation(Mat2::identity(), 1.0) == 0.0);
  const Mat2 D{0.25, 0.0, 0.0, 1.0};
  CHECK(det_relation(D, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(det_relation(D, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("eigen sandwich accepts depleted spectra and rejects inflation") {
  EffectiveTensor tensor;
  tensor.D = Mat2::identity();
  tensor.Z = 1.0;
  CHECK(eigen_sandwich(tensor).pass);

  tensor.Z = 2.0;
  tensor.D = {0.25, 0.0, 0.0, 1.0};  // eigenvalues exactly 1/Z^2 and 1
  const SandwichReport edge = eigen_sandwich(tensor);
  CHECK(edge.pass);
  CHECK(edge.lambda_min == doctest::Approx(0.25));
  CHECK(edge.lambda_max == doctest::Approx(1.0));

  tensor.D = {1.2, 0.0, 0.0, 1.0};  // above the lamination cap
  CHECK_FALSE(eigen_sandwich(tensor).pass);
  tensor.D = {0.2, 0.0, 0.0, 1.0};  // below the depletion floor for Z = 2
  CHECK(eigen_sandwich(tensor).worst_violation < 0.0);
}

TEST_CASE("isotropy deviation is zero only for scalar tensors") {
  CHECK(isotropy_deviation(Mat2::identity()) == 0.0);
  CHECK(isotropy_deviation({2.0, 0.0, 0.0, 1.0}) == doctest::Approx(1.0 / 3.0));
  CHECK(isotropy_deviation({1.0, 0.25, 0.25, 1.0}) == doctest::Approx(0.25));
}

namespace {

TensorRow healthy_row() {
  TensorRow row;
  row.seed = 42;
  row.R = 10.0;
  row.subdivisions = 64;
  row.Z = 1.2;
  row.D = {0.84, 0.001, 0.001, 0.83};
  row.lower11 = 0.82;
  row.lower22 = 0.81;
  row.upper11 = 0.86;
  row.upper22 = 0.85;
  row.det_residual = det_relation(row.D, row.Z);
  row.converged = true;
  return row;
}

}  // namespace

TEST_CASE("row recheck reproduces invariants and flags corruption") {
  CHECK(recheck_rows({healthy_row()}).empty());

  TensorRow above = healthy_row();
  above.D.m00 = above.upper11 + 0.05;
  above.det_residual = det_relation(above.D, above.Z);
  const auto bound_issues = recheck_rows({above});
  REQUIRE(!bound_issues.empty());
  CHECK(bound_issues.front().what == "D11 outside its coordinate bounds");

  TensorRow lied = healthy_row();
  lied.det_residual += 1e-3;
  const auto residual_issues = recheck_rows({lied});
  REQUIRE(!residual_issues.empty());
  CHECK(residual_issues.front().row == 0);

  TensorRow broken = healthy_row();
  broken.Z = std::numeric_limits<double>::quiet_NaN();
  CHECK(recheck_rows({broken}).front().what == "non-finite tensor entries");

  TensorRow inflated = healthy_row();
  inflated.D = {1.5, 0.0, 0.0, 1.4};
  inflated.upper11 = 1.6;
  inflated.upper22 = 1.6;
  inflated.det_residual = det_relation(inflated.D, inflated.Z);
  bool saw_depletion = false;
  for (const RowIssue& issue : recheck_rows({inflated}))
    saw_depletion = saw_depletion || issue.what == "eigenvalues escape the depletion interval";
  CHECK(saw_depletion);
}

TEST_CASE("ensemble runs are schedule independent and seeded by counters") {
  EnsembleParams params;
  params.family.family = FieldFamily::poisson;
  params.family.lambda = 0.5;
  params.family.alpha = 1.0;
  params.R_values = {4.0, 5.0};
  params.seeds_per_R = 3;
  params.master_seed = 17;
  params.oracle_resolution = 48;
  params.refine.tol_rel = 5e-2;
  params.threads = 1;

  const EnsembleSummary serial = ensemble_run(params);
  params.threads = 4;
  const EnsembleSummary parallel = ensemble_run(params);

  REQUIRE(serial.rows.size() == 6);
  REQUIRE(parallel.rows.size() == 6);
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].seed == parallel.rows[i].seed);
    CHECK(serial.rows[i].D.m00 == parallel.rows[i].D.m00);
    CHECK(serial.rows[i].D.m11 == parallel.rows[i].D.m11);
    CHECK(serial.rows[i].Z == parallel.rows[i].Z);
  }
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t s = 0; s < 3; ++s) {
      CHECK(serial.rows[r * 3 + s].seed == derive_seed(17, r, s));
      CHECK(serial.rows[r * 3 + s].R == params.R_values[r]);
    }
  }

  REQUIRE(serial.groups.size() == 2);
  for (std::size_t gi = 0; gi < 2; ++gi) {
    const EnsembleGroup& g = serial.groups[gi];
    CHECK(g.count + g.failed == 3);
    CHECK(g.area_scaling_ref > 0.0);
    CHECK(g.area_scaling_ref <= 1.0);
    double sum = 0.0;
    int n = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      const TensorRow& row = serial.rows[gi * 3 + s];
      if (!row.converged) continue;
      sum += row.D.m00;
      ++n;
    }
    if (n > 0) CHECK(g.mean_D11 == doctest::Approx(sum / n).epsilon(1e-15));
    CHECK(g.mean_D.m00 == doctest::Approx(g.mean_D11).epsilon(1e-15));
  }

  CHECK(parallel.groups[0].mean_D11 == serial.groups[0].mean_D11);
  CHECK(parallel.groups[1].std_D22 == serial.groups[1].std_D22);

  SUBCASE("parameter validation") {
    EnsembleParams bad = params;
    bad.R_values.clear();
    CHECK_THROWS_AS(ensemble_run(bad), std::invalid_argument);
    bad = params;
    bad.seeds_per_R = 0;
    CHECK_THROWS_AS(ensemble_run(bad), std::invalid_argument);
  }
}

TEST_CASE("make_row carries the refine result faithfully") {
  RefineResult result;
  result.tensor.D = {0.5, 0.01, 0.01, 0.52};
  result.tensor.Z = 1.3;
  result.tensor.R = 8.0;
  result.tensor.subdivisions = 128;
  result.bounds.lower = {0.45, 0.0, 0.0, 0.47};
  result.bounds.upper = {0.55, 0.0, 0.0, 0.57};
  result.converged = true;
  const TensorRow row = make_row(99, result);
  CHECK(row.seed == 99);
  CHECK(row.R == 8.0);
  CHECK(row.subdivisions == 128);
  CHECK(row.Z == 1.3);
  CHECK(row.lower11 == 0.45);
  CHECK(row.upper22 == 0.57);
  CHECK(row.det_residual == det_relation(result.tensor));
  CHECK(row.converged);
}
