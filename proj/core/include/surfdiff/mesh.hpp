#pragma once

#include <array>
#include <stdexcept>

#include "surfdiff/linalg.hpp"

namespace surfdiff {

// Uniform criss-cross P1 triangulation of the periodic cell [0,R)^2: n x n
// squares, each split along its (0,0)-(h,h) diagonal. Opposite cell faces are
// identified, leaving n^2 vertex unknowns and 2 n^2 elements. Geometry is
// derived on demand; the mesh itself stores nothing per element.
class PeriodicMesh {
 public:
  PeriodicMesh(double cell, int subdivisions)
      : cell_(cell), n_(subdivisions), h_(cell / subdivisions) {
    if (!(cell > 0.0)) throw std::invalid_argument("PeriodicMesh: cell size must be positive");
    if (subdivisions < 2) throw std::invalid_argument("PeriodicMesh: need at least 2 subdivisions per axis");
  }

  double cell() const { return cell_; }
  int subdivisions() const { return n_; }
  double spacing() const { return h_; }
  int unknowns() const { return n_ * n_; }
  int elements() const { return 2 * n_ * n_; }

  // Periodic vertex index; accepts any i, j including n and -1.
  int vertex_id(int i, int j) const {
    const int ii = wrap(i);
    const int jj = wrap(j);
    return jj * n_ + ii;
  }

  struct Element {
    std::array<int, 3> v;      // global vertex ids
    std::array<Vec2, 3> grad;  // constant P1 basis gradients
    Vec2 midpoint;             // barycenter, the one-point quadrature node
    double area;
  };

  Element element(int e) const {
    const int square = e >> 1;
    const int i = square % n_;
    const int j = square / n_;
    const double x0 = i * h_;
    const double y0 = j * h_;
    const double inv = 1.0 / h_;
    Element el;
    el.area = 0.5 * h_ * h_;
    if ((e & 1) == 0) {  // lower triangle (i,j)-(i+1,j)-(i+1,j+1)
      el.v = {vertex_id(i, j), vertex_id(i + 1, j), vertex_id(i + 1, j + 1)};
      el.grad = {Vec2{-inv, 0.0}, Vec2{inv, -inv}, Vec2{0.0, inv}};
      el.midpoint = {x0 + 2.0 * h_ / 3.0, y0 + h_ / 3.0};
    } else {  // upper triangle (i,j)-(i+1,j+1)-(i,j+1)
      el.v = {vertex_id(i, j), vertex_id(i + 1, j + 1), vertex_id(i, j + 1)};
      el.grad = {Vec2{0.0, -inv}, Vec2{inv, 0.0}, Vec2{-inv, inv}};
      el.midpoint = {x0 + h_ / 3.0, y0 + 2.0 * h_ / 3.0};
    }
    return el;
  }

 private:
  int wrap(int k) const {
    int r = k % n_;
    if (r < 0) r += n_;
    return r;
  }

  double cell_;
  int n_;
  double h_;
};

}  // namespace surfdiff
