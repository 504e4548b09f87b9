#pragma once

#include "bsfem/mesh.hpp"

namespace bsfem {

/// x = B xi + b, mapping the reference tetrahedron onto a mesh tet.
class AffineMap {
 public:
  AffineMap(const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3) : b_(x0) {
    B_.col(0) = x1 - x0;
    B_.col(1) = x2 - x0;
    B_.col(2) = x3 - x0;
    det_ = B_.determinant();
    if (!(det_ > 0)) throw Error("non-positive element volume");
    inv_ = B_.inverse();
  }

  AffineMap(const Mesh& m, int t)
      : AffineMap(m.vertex(t, 0), m.vertex(t, 1), m.vertex(t, 2), m.vertex(t, 3)) {}

  Vec3 map(const Vec3& xi) const { return B_ * xi + b_; }
  Vec3 inverse(const Vec3& x) const { return inv_ * (x - b_); }

  /// Physical gradient from a reference gradient: B^{-T} g.
  Vec3 gradient(const Vec3& ref_grad) const { return inv_.transpose() * ref_grad; }

  const Mat3& linear() const { return B_; }
  const Mat3& inverse_linear() const { return inv_; }
  const Vec3& translation() const { return b_; }
  double det() const { return det_; }
  double volume() const { return det_ / 6.0; }

 private:
  Mat3 B_, inv_;
  Vec3 b_;
  double det_ = 0.0;
};

}  // namespace bsfem
