/**
 * @brief Lagrange elements of degree 2 and 3 on the reference tetrahedron
 * (0,0,0), (1,0,0), (0,1,0), (0,0,1).
 *
 * Node ordering (frozen; golden files depend on it):
 *   - the 4 vertices, in local vertex order;
 *   - k-1 nodes per edge, edges in kTetEdges order, each edge's nodes running
 *     from its first local vertex to its second;
 *   - for k = 3, one node per face at the face centroid, face i opposite
 *     local vertex i.
 */
#pragma once

#include "bsfem/common.hpp"

#include <vector>

namespace bsfem {

enum class EntityKind { vertex, edge, face };

/// Which sub-entity of the tetrahedron a local node sits on.
struct NodeEntity {
  EntityKind kind;
  int local;     // local vertex, edge or face index
  int position;  // index along the edge (from its first vertex), else 0
};

inline Eigen::Vector4d barycentric(const Vec3& xi) {
  return {1.0 - xi[0] - xi[1] - xi[2], xi[0], xi[1], xi[2]};
}

class LagrangeElement {
 public:
  explicit LagrangeElement(int k) : k_(k) {
    if (k != 2 && k != 3) throw Error("unsupported polynomial degree (k must be 2 or 3)");
    for (int v = 0; v < 4; ++v) {
      std::array<int, 4> a{};
      a[v] = k;
      add(a, {EntityKind::vertex, v, 0});
    }
    for (int e = 0; e < 6; ++e)
      for (int s = 1; s < k; ++s) {
        std::array<int, 4> a{};
        a[kTetEdges[e][0]] = k - s;
        a[kTetEdges[e][1]] = s;
        add(a, {EntityKind::edge, e, s - 1});
      }
    if (k == 3)
      for (int f = 0; f < 4; ++f) {
        std::array<int, 4> a{};
        for (int v : kTetFaces[f]) a[v] = 1;
        add(a, {EntityKind::face, f, 0});
      }
  }

  int degree() const { return k_; }
  int size() const { return static_cast<int>(index_.size()); }

  static int node_count(int k) { return (k + 3) * (k + 2) * (k + 1) / 6; }
  /// Nodes of a tet off one of its faces.
  static int nodes_off_face(int k) { return k * (k + 2) * (k + 1) / 6; }
  /// Nodes of a tet off one of its edges.
  static int nodes_off_edge(int k) { return node_count(k) - (k + 1); }

  const std::array<int, 4>& multi_index(int i) const { return index_[i]; }
  const NodeEntity& entity(int i) const { return entity_[i]; }

  Vec3 node(int i) const {
    const auto& a = index_[i];
    return Vec3(a[1], a[2], a[3]) / double(k_);
  }

  double value(int i, const Vec3& xi) const {
    const Eigen::Vector4d lam = barycentric(xi);
    double v = 1.0;
    for (int c = 0; c < 4; ++c) v *= factor(index_[i][c], lam[c], nullptr);
    return v;
  }

  Vec3 gradient(int i, const Vec3& xi) const {
    const Eigen::Vector4d lam = barycentric(xi);
    std::array<double, 4> f, df;
    for (int c = 0; c < 4; ++c) f[c] = factor(index_[i][c], lam[c], &df[c]);
    Eigen::Vector4d dlam;
    for (int c = 0; c < 4; ++c) {
      double p = df[c];
      for (int o = 0; o < 4; ++o)
        if (o != c) p *= f[o];
      dlam[c] = p;
    }
    // grad lambda_0 = (-1,-1,-1), grad lambda_c = e_c
    return Vec3(dlam[1] - dlam[0], dlam[2] - dlam[0], dlam[3] - dlam[0]);
  }

  Vector values(const Vec3& xi) const {
    Vector v(size());
    for (int i = 0; i < size(); ++i) v[i] = value(i, xi);
    return v;
  }

  /// Reference gradients as rows (size x 3).
  Eigen::Matrix<double, Eigen::Dynamic, 3> gradients(const Vec3& xi) const {
    Eigen::Matrix<double, Eigen::Dynamic, 3> g(size(), 3);
    for (int i = 0; i < size(); ++i) g.row(i) = gradient(i, xi).transpose();
    return g;
  }

 private:
  void add(const std::array<int, 4>& a, NodeEntity e) {
    index_.push_back(a);
    entity_.push_back(e);
  }

  // prod_{j<n} (k lambda - j) / (j + 1) and its derivative in lambda
  double factor(int n, double lam, double* dvalue) const {
    double v = 1.0, dv = 0.0;
    for (int j = 0; j < n; ++j) {
      const double term = (k_ * lam - j) / (j + 1);
      dv = dv * term + v * k_ / (j + 1);
      v *= term;
    }
    if (dvalue) *dvalue = dv;
    return v;
  }

  int k_;
  std::vector<std::array<int, 4>> index_;
  std::vector<NodeEntity> entity_;
};

/// Reference coordinates of the Lagrangian nodes of degree k.
inline std::vector<Vec3> lagrange_nodes(int k) {
  const LagrangeElement el(k);
  std::vector<Vec3> nodes;
  for (int i = 0; i < el.size(); ++i) nodes.push_back(el.node(i));
  return nodes;
}

inline double shape_eval(int k, int i, const Vec3& xi) { return LagrangeElement(k).value(i, xi); }
inline Vec3 shape_grad(int k, int i, const Vec3& xi) { return LagrangeElement(k).gradient(i, xi); }

}  // namespace bsfem
