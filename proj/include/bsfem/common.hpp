/**
 * @brief Shared numeric types and the library error type.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace bsfem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// All recoverable failures (bad input, geometric breakdown, solver failure)
/// are reported through this exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local edges of a tetrahedron as pairs of local vertex indices.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local faces of a tetrahedron; face i is opposite local vertex i.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Local edge index of the (unordered) pair of local vertices (a, b).
inline int local_edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 6; ++e)
    if (kTetEdges[e][0] == a && kTetEdges[e][1] == b) return e;
  throw Error("invalid local edge");
}

inline double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

}  // namespace bsfem
