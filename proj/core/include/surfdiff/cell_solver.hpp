#pragma once

#include <array>
#include <vector>

#include "surfdiff/field.hpp"
#include "surfdiff/mesh.hpp"
#include "surfdiff/sparse.hpp"

namespace surfdiff {

// Stiffness, unit-direction loads and cached per-element coefficient data for
// one cell problem. The coefficient is A = sqrt(det g) g^{-1} evaluated at
// element midpoints; Z is the matching midpoint average of sqrt(det g).
struct AssembledSystem {
  CsrMatrix stiffness;
  std::array<std::vector<double>, 2> loads;
  std::vector<Mat2> coeff;
  std::vector<double> sqrt_g;
  double Z = 1.0;
};

AssembledSystem assemble(const Field& field, const PeriodicMesh& mesh, int threads = 1);

// Nodal correctors for the two unit directions, gauge-fixed to zero mean.
struct CorrectorSolution {
  std::array<std::vector<double>, 2> chi;
  std::array<CgResult, 2> cg;
};

// Throws std::runtime_error with the final residual if CG stalls.
CorrectorSolution solve_correctors(const AssembledSystem& system, const PeriodicMesh& mesh,
                                   const CgOptions& options = {});

struct EffectiveTensor {
  Mat2 D;
  double Z = 1.0;
  double R = 0.0;
  int subdivisions = 0;
};

EffectiveTensor effective_tensor(const AssembledSystem& system, const PeriodicMesh& mesh,
                                 const CorrectorSolution& correctors);

// Harmonic/arithmetic mean bounds evaluated with the same midpoint rule.
struct CellBounds {
  Mat2 lower;  // (1/Z) * (cell mean of g / sqrt(det g))^{-1}
  Mat2 upper;  // (1/Z) * cell mean of sqrt(det g) g^{-1}
  double Z = 1.0;
};

CellBounds voigt_reuss_bounds(const AssembledSystem& system);
CellBounds voigt_reuss_bounds(const Field& field, const PeriodicMesh& mesh, int threads = 1);

struct RefineOptions {
  double tol_rel = 1e-2;  // max-norm relative change of D between levels
  int n0 = 0;             // starting subdivisions; 0 derives from the field
  int max_n = 4096;
  CgOptions cg;
  int threads = 1;
};

struct RefineLevel {
  int subdivisions = 0;
  Mat2 D;
  double Z = 1.0;
  double rel_change = 0.0;  // infinity on the first level
};

struct RefineResult {
  EffectiveTensor tensor;   // finest level
  CellBounds bounds;        // bounds at the finest level
  std::vector<RefineLevel> history;
  bool converged = false;
};

// Doubles the subdivision count until successive tensors agree to tol_rel,
// or max_n would be exceeded (non-converged result, finest level kept).
RefineResult refine_until(const Field& field, const RefineOptions& options = {});

// Subdivisions that give the field's shortest length scale eight elements.
int default_initial_subdivisions(const Field& field);

}  // namespace surfdiff
