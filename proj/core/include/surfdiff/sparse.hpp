#pragma once

#include <functional>
#include <vector>

namespace surfdiff {

// Compressed sparse row matrix with a fixed symmetric pattern.
struct CsrMatrix {
  int rows = 0;
  std::vector<int> ptr;
  std::vector<int> col;
  std::vector<double> val;

  void matvec(const std::vector<double>& x, std::vector<double>& y) const;

  // Accumulation slot for assembly; (r, c) must be in the pattern.
  double& at(int r, int c);
  double get(int r, int c) const;
};

struct CgOptions {
  double tol = 1e-10;        // relative residual target
  long max_iterations = 0;   // 0 selects 10 * rows
};

struct CgResult {
  bool converged = false;
  long iterations = 0;
  double relative_residual = 0.0;
};

// Observer invoked once per iteration with the current iterate and residual
// norm; used by tests to watch convergence behavior.
using CgObserver = std::function<void(long iteration, const std::vector<double>& x, double residual_norm)>;

// Jacobi-preconditioned conjugate gradients for a symmetric positive
// semidefinite system whose kernel is the constant vector. The constant
// component is projected out of the residual every iteration, which pins the
// iterates to the mean-zero complement where the operator is definite.
CgResult cg_solve_projected(const CsrMatrix& K, const std::vector<double>& b,
                            std::vector<double>& x, const CgOptions& options = {},
                            const CgObserver& observer = {});

}  // namespace surfdiff
