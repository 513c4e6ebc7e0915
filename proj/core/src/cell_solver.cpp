#include "surfdiff/cell_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "surfdiff/geometry.hpp"
#include "surfdiff/parallel.hpp"

namespace surfdiff {

namespace {

// Midpoint metric data per element. Only the field evaluations run in
// parallel; every reduction stays in element order so results do not depend
// on the thread count.
void element_coefficients(const Field& field, const PeriodicMesh& mesh, int threads,
                          std::vector<Mat2>& coeff, std::vector<double>& sqrt_g, double& Z) {
  const int ne = mesh.elements();
  coeff.resize(static_cast<std::size_t>(ne));
  sqrt_g.resize(static_cast<std::size_t>(ne));
  const std::size_t chunk = 1024;
  const std::size_t nchunks = (static_cast<std::size_t>(ne) + chunk - 1) / chunk;
  run_tasks(nchunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(begin + chunk, static_cast<std::size_t>(ne));
    for (std::size_t e = begin; e < end; ++e) {
      const PeriodicMesh::Element el = mesh.element(static_cast<int>(e));
      const MetricPoint m = metric_at(field, el.midpoint);
      coeff[e] = m.area_element * m.inv_g;
      sqrt_g[e] = m.area_element;
    }
  });
  double total = 0.0;
  for (int e = 0; e < ne; ++e) total += sqrt_g[static_cast<std::size_t>(e)];
  const double area = 0.5 * mesh.spacing() * mesh.spacing();
  Z = total * area / (mesh.cell() * mesh.cell());
}

CsrMatrix stencil_pattern(const PeriodicMesh& mesh) {
  const int n = mesh.subdivisions();
  const int nv = mesh.unknowns();
  CsrMatrix K;
  K.rows = nv;
  K.ptr.assign(static_cast<std::size_t>(nv) + 1, 0);
  std::vector<int> cols;
  cols.reserve(7);
  std::vector<int> all_cols;
  all_cols.reserve(static_cast<std::size_t>(nv) * 7);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cols.clear();
      cols.push_back(mesh.vertex_id(i, j));
      cols.push_back(mesh.vertex_id(i - 1, j));
      cols.push_back(mesh.vertex_id(i + 1, j));
      cols.push_back(mesh.vertex_id(i, j - 1));
      cols.push_back(mesh.vertex_id(i, j + 1));
      cols.push_back(mesh.vertex_id(i - 1, j - 1));
      cols.push_back(mesh.vertex_id(i + 1, j + 1));
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      const int row = mesh.vertex_id(i, j);
      K.ptr[static_cast<std::size_t>(row) + 1] = static_cast<int>(cols.size());
      all_cols.insert(all_cols.end(), cols.begin(), cols.end());
    }
  }
  for (int r = 0; r < nv; ++r) K.ptr[static_cast<std::size_t>(r) + 1] += K.ptr[static_cast<std::size_t>(r)];
  K.col = std::move(all_cols);
  K.val.assign(K.col.size(), 0.0);
  return K;
}

}  // namespace

AssembledSystem assemble(const Field& field, const PeriodicMesh& mesh, int threads) {
  AssembledSystem sys;
  element_coefficients(field, mesh, threads, sys.coeff, sys.sqrt_g, sys.Z);
  sys.stiffness = stencil_pattern(mesh);
  const int nv = mesh.unknowns();
  sys.loads[0].assign(static_cast<std::size_t>(nv), 0.0);
  sys.loads[1].assign(static_cast<std::size_t>(nv), 0.0);

  const int ne = mesh.elements();
  for (int e = 0; e < ne; ++e) {
    const PeriodicMesh::Element el = mesh.element(e);
    const Mat2& A = sys.coeff[static_cast<std::size_t>(e)];
    Vec2 flux[3];
    for (int a = 0; a < 3; ++a) flux[a] = A * el.grad[a];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        sys.stiffness.at(el.v[static_cast<std::size_t>(a)], el.v[static_cast<std::size_t>(b)]) +=
            el.area * dot(el.grad[a], flux[b]);
      }
      // Unit-direction loads: columns of A against the test gradients.
      sys.loads[0][static_cast<std::size_t>(el.v[static_cast<std::size_t>(a)])] -=
          el.area * (el.grad[a].x * A.m00 + el.grad[a].y * A.m10);
      sys.loads[1][static_cast<std::size_t>(el.v[static_cast<std::size_t>(a)])] -=
          el.area * (el.grad[a].x * A.m01 + el.grad[a].y * A.m11);
    }
  }
  return sys;
}

CorrectorSolution solve_correctors(const AssembledSystem& system, const PeriodicMesh& mesh,
                                   const CgOptions& options) {
  CorrectorSolution sol;
  const std::size_t nv = static_cast<std::size_t>(mesh.unknowns());
  for (int d = 0; d < 2; ++d) {
    sol.chi[static_cast<std::size_t>(d)].assign(nv, 0.0);
    sol.cg[static_cast<std::size_t>(d)] = cg_solve_projected(
        system.stiffness, system.loads[static_cast<std::size_t>(d)], sol.chi[static_cast<std::size_t>(d)], options);
    if (!sol.cg[static_cast<std::size_t>(d)].converged) {
      throw std::runtime_error(
          "corrector solve stalled in direction " + std::to_string(d + 1) +
          ", relative residual " + std::to_string(sol.cg[static_cast<std::size_t>(d)].relative_residual));
    }
    double mean = 0.0;
    for (double v : sol.chi[static_cast<std::size_t>(d)]) mean += v;
    mean /= static_cast<double>(nv);
    for (double& v : sol.chi[static_cast<std::size_t>(d)]) v -= mean;
  }
  return sol;
}

EffectiveTensor effective_tensor(const AssembledSystem& system, const PeriodicMesh& mesh,
                                 const CorrectorSolution& correctors) {
  const int ne = mesh.elements();
  double d00 = 0.0, d01 = 0.0, d11 = 0.0;
  for (int e = 0; e < ne; ++e) {
    const PeriodicMesh::Element el = mesh.element(e);
    const Mat2& A = system.coeff[static_cast<std::size_t>(e)];
    Vec2 u0{1.0, 0.0};
    Vec2 u1{0.0, 1.0};
    for (int a = 0; a < 3; ++a) {
      const std::size_t v = static_cast<std::size_t>(el.v[static_cast<std::size_t>(a)]);
      u0 += correctors.chi[0][v] * el.grad[a];
      u1 += correctors.chi[1][v] * el.grad[a];
    }
    const Vec2 f0 = A * u0;
    const Vec2 f1 = A * u1;
    d00 += el.area * dot(u0, f0);
    d01 += el.area * dot(u0, f1);
    d11 += el.area * dot(u1, f1);
  }
  EffectiveTensor t;
  const double scale = 1.0 / (mesh.cell() * mesh.cell() * system.Z);
  t.D = {scale * d00, scale * d01, scale * d01, scale * d11};
  t.Z = system.Z;
  t.R = mesh.cell();
  t.subdivisions = mesh.subdivisions();
  return t;
}

CellBounds voigt_reuss_bounds(const AssembledSystem& system) {
  CellBounds bounds;
  Mat2 mean_A;
  Mat2 mean_inv;
  const std::size_t ne = system.coeff.size();
  for (std::size_t e = 0; e < ne; ++e) {
    mean_A += system.coeff[e];
    // det A = 1 pointwise, so the adjugate is the exact inverse g / sqrt(det g).
    mean_inv += adjugate(system.coeff[e]);
  }
  const double inv_ne = 1.0 / static_cast<double>(ne);
  mean_A = inv_ne * mean_A;
  mean_inv = inv_ne * mean_inv;
  bounds.upper = (1.0 / system.Z) * mean_A;
  bounds.lower = (1.0 / system.Z) * inverse(mean_inv);
  bounds.Z = system.Z;
  return bounds;
}

CellBounds voigt_reuss_bounds(const Field& field, const PeriodicMesh& mesh, int threads) {
  AssembledSystem sys;
  element_coefficients(field, mesh, threads, sys.coeff, sys.sqrt_g, sys.Z);
  return voigt_reuss_bounds(sys);
}

int default_initial_subdivisions(const Field& field) {
  const double ratio = field.period() / field.min_length_scale();
  const int n = static_cast<int>(std::ceil(8.0 * ratio));
  return std::max(2, n);
}

RefineResult refine_until(const Field& field, const RefineOptions& options) {
  if (!(options.tol_rel > 0.0)) throw std::invalid_argument("refine_until: tol_rel must be positive");
  int n = options.n0 > 0 ? options.n0 : default_initial_subdivisions(field);
  n = std::min(n, options.max_n);

  RefineResult result;
  Mat2 prev;
  bool have_prev = false;
  AssembledSystem last_system;

  for (;;) {
    const PeriodicMesh mesh(field.period(), n);
    AssembledSystem sys = assemble(field, mesh, options.threads);
    const CorrectorSolution correctors = solve_correctors(sys, mesh, options.cg);
    const EffectiveTensor tensor = effective_tensor(sys, mesh, correctors);

    RefineLevel level;
    level.subdivisions = n;
    level.D = tensor.D;
    level.Z = tensor.Z;
    level.rel_change = have_prev ? max_abs(tensor.D - prev) / max_abs(prev)
                                 : std::numeric_limits<double>::infinity();
    result.history.push_back(level);
    result.tensor = tensor;
    last_system = std::move(sys);

    if (have_prev && level.rel_change <= options.tol_rel) {
      result.converged = true;
      break;
    }
    if (2 * n > options.max_n) break;
    prev = tensor.D;
    have_prev = true;
    n *= 2;
  }

  result.bounds = voigt_reuss_bounds(last_system);
  return result;
}

}  // namespace surfdiff
