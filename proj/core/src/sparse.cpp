#include "surfdiff/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surfdiff {

void CsrMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(static_cast<std::size_t>(rows), 0.0);
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (int k = ptr[static_cast<std::size_t>(r)]; k < ptr[static_cast<std::size_t>(r) + 1]; ++k) {
      acc += val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
}

namespace {

int find_slot(const CsrMatrix& m, int r, int c) {
  const int lo = m.ptr[static_cast<std::size_t>(r)];
  const int hi = m.ptr[static_cast<std::size_t>(r) + 1];
  const auto begin = m.col.begin() + lo;
  const auto end = m.col.begin() + hi;
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return -1;
  return static_cast<int>(it - m.col.begin());
}

}  // namespace

double& CsrMatrix::at(int r, int c) {
  const int k = find_slot(*this, r, c);
  if (k < 0) throw std::out_of_range("CsrMatrix::at: entry outside the pattern");
  return val[static_cast<std::size_t>(k)];
}

double CsrMatrix::get(int r, int c) const {
  const int k = find_slot(*this, r, c);
  return k < 0 ? 0.0 : val[static_cast<std::size_t>(k)];
}

namespace {

void remove_mean(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgResult cg_solve_projected(const CsrMatrix& K, const std::vector<double>& b,
                            std::vector<double>& x, const CgOptions& options,
                            const CgObserver& observer) {
  const std::size_t n = static_cast<std::size_t>(K.rows);
  if (b.size() != n) throw std::invalid_argument("cg_solve_projected: size mismatch");
  if (x.size() != n) x.assign(n, 0.0);
  const long max_it = options.max_iterations > 0 ? options.max_iterations : 10L * K.rows;

  std::vector<double> inv_diag(n, 1.0);
  for (int r = 0; r < K.rows; ++r) {
    const double d = K.get(r, r);
    if (d > 0.0) inv_diag[static_cast<std::size_t>(r)] = 1.0 / d;
  }

  std::vector<double> rhs = b;
  remove_mean(rhs);
  const double bnorm = std::sqrt(dot(rhs, rhs));
  CgResult result;
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    result.converged = true;
    return result;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  K.matvec(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  remove_mean(r);

  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
    remove_mean(out);
  };

  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  double rel = std::sqrt(dot(r, r)) / bnorm;

  for (long it = 1; it <= max_it; ++it) {
    K.matvec(p, q);
    remove_mean(q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      result.iterations = it;
      result.relative_residual = rel;
      return result;  // breakdown; operator not definite along p
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
    remove_mean(r);
    double rnorm = std::sqrt(dot(r, r));
    rel = rnorm / bnorm;
    if (observer) observer(it, x, rnorm);
    if (rel <= options.tol) {
      // Recurrence residuals drift; accept only an explicitly recomputed one.
      K.matvec(x, q);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
      remove_mean(r);
      rnorm = std::sqrt(dot(r, r));
      rel = rnorm / bnorm;
      result.iterations = it;
      if (rel <= options.tol) {
        result.converged = true;
        result.relative_residual = rel;
        return result;
      }
      // Restart the direction from the true residual and continue.
      precondition(r, z);
      p = z;
      rz = dot(r, z);
      continue;
    }
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
    result.iterations = it;
  }

  result.relative_residual = rel;
  return result;
}

}  // namespace surfdiff
