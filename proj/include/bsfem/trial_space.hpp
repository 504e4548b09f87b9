/**
 * @brief Shifted boundary nodes and the modified trial basis on elements
 * touching the curved boundary.
 *
 * Lagrangian nodes on Gamma_h are moved onto Gamma: vertices stay put, edge
 * nodes move along the skin direction of their edge, and (k = 3) face nodes
 * move along the line from the opposite vertex of their element. On every
 * element of O_h the node matrix Kt(i, j) = phi_j(shifted node i) defines the
 * trial functions psi_j = sum_m C(m, j) phi_m with C = Kt^{-1}.
 */
#pragma once

#include "bsfem/affine_map.hpp"
#include "bsfem/boundary.hpp"
#include "bsfem/geometry.hpp"
#include "bsfem/lagrange_space.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace bsfem {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

struct ShiftedNodeTable {
  std::vector<char> on_gamma;   // per global node: lies on Gamma_h
  std::vector<Vec3> original;   // M
  std::vector<Vec3> shifted;    // shifted point on Gamma (= M off Gamma_h)
  std::vector<int> gamma_nodes;

  int size() const { return static_cast<int>(original.size()); }
};

/// Edge node M of a Gamma_h edge moved along its skin direction w.
inline Vec3 shift_edge_node(const Surface& surface, const Vec3& M, const Vec3& w, double h_ref) {
  return nearest_line_intersection(surface, Line3::through(M, w), h_ref);
}

/// Face node M of a Gamma_h face moved along the line from the opposite
/// vertex O_T; ties resolve away from O_T.
inline Vec3 shift_face_node(const Surface& surface, const Vec3& O_T, const Vec3& M, double h_ref) {
  return nearest_line_intersection(surface, Line3::through(M, M - O_T), h_ref);
}

inline ShiftedNodeTable build_shifted_node_table(const Mesh& m, const LagrangeSpace& sp,
                                                 const BoundaryClassification& c, const Surface& surface) {
  ShiftedNodeTable tab;
  tab.on_gamma.assign(sp.num_nodes, 0);
  tab.original = sp.positions;
  tab.shifted = sp.positions;

  for (int id = 0; id < sp.num_nodes; ++id) {
    const NodeEntity& ent = sp.entity[id];
    switch (ent.kind) {
      case EntityKind::vertex:
        tab.on_gamma[id] = c.vertex_on_gamma[ent.local];
        break;
      case EntityKind::edge:
        if (c.edge_on_gamma[ent.local]) {
          tab.on_gamma[id] = 1;
          double h_ref = 0.0;
          for (int t : m.edge_tets[ent.local]) h_ref = std::max(h_ref, m.h_tet[t]);
          tab.shifted[id] = shift_edge_node(surface, sp.positions[id], c.skin[ent.local], h_ref);
        }
        break;
      case EntityKind::face:
        if (c.face_on_gamma[ent.local]) {
          tab.on_gamma[id] = 1;
          const int owner = m.face_tets[ent.local][0];
          const Vec3& O = m.vertices[m.opposite_vertex(owner, ent.local)];
          tab.shifted[id] = shift_face_node(surface, O, sp.positions[id], m.h_tet[owner]);
        }
        break;
    }
    if (tab.on_gamma[id]) tab.gamma_nodes.push_back(id);
  }
  return tab;
}

struct ModifiedElementBasis {
  int tet = -1;
  Matrix K;  // Kt, rows = shifted nodes
  Matrix C;  // Kt^{-1}
  double condition = 1.0;
  std::vector<int> dirichlet_local, free_local;
};

/// Modified bases for the elements of O_h, indexed through `index`.
struct ModifiedBasisSet {
  int k = 2;
  std::vector<ModifiedElementBasis> bases;
  std::vector<int> index;  // per tet, -1 if the element is unmodified

  const ModifiedElementBasis* find(int t) const { return index[t] < 0 ? nullptr : &bases[index[t]]; }
};

inline constexpr double kMaxBasisCondition = 1e8;

inline ModifiedElementBasis build_modified_basis(const Mesh& m, int t, const LagrangeSpace& sp,
                                                 const ShiftedNodeTable& tab, const LagrangeElement& el) {
  const int n = el.size();
  const AffineMap map(m, t);
  ModifiedElementBasis b;
  b.tet = t;
  b.K = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const int g = sp.tet_nodes[t][i];
    if (!tab.on_gamma[g]) {
      b.free_local.push_back(i);
      continue;
    }
    b.dirichlet_local.push_back(i);
    if (el.entity(i).kind == EntityKind::vertex) continue;
    b.K.row(i) = el.values(map.inverse(tab.shifted[g])).transpose();
  }
  Eigen::PartialPivLU<Matrix> lu(b.K);
  b.C = lu.inverse();
  // 1-norm condition number
  b.condition = b.K.cwiseAbs().colwise().sum().maxCoeff() * b.C.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(b.condition) || b.condition > kMaxBasisCondition)
    throw Error("mesh too coarse for shifted basis");
  return b;
}

inline ModifiedBasisSet build_modified_bases(const Mesh& m, const LagrangeSpace& sp,
                                             const ShiftedNodeTable& tab, const BoundaryClassification& c) {
  const LagrangeElement el(sp.k);
  ModifiedBasisSet set;
  set.k = sp.k;
  set.index.assign(m.num_tets(), -1);
  for (int t = 0; t < m.num_tets(); ++t) {
    if (!c.in_o_h(t)) continue;
    set.index[t] = static_cast<int>(set.bases.size());
    set.bases.push_back(build_modified_basis(m, t, sp, tab, el));
  }
  return set;
}

/// g at the shifted nodes, one value per global node (0 off Gamma_h or when
/// g is empty).
inline std::vector<double> dirichlet_values(const ScalarField& g, const ShiftedNodeTable& tab) {
  std::vector<double> v(tab.size(), 0.0);
  if (!g) return v;
  for (int id : tab.gamma_nodes) v[id] = g(tab.shifted[id]);
  return v;
}

/// g at the closest points of Gamma to the unshifted Gamma_h nodes.
inline std::vector<double> polyhedral_dirichlet_values(const ScalarField& g, const ShiftedNodeTable& tab,
                                                       const Surface& surface) {
  std::vector<double> v(tab.size(), 0.0);
  if (!g) return v;
  for (int id : tab.gamma_nodes) v[id] = g(closest_point_projection(surface, tab.original[id]));
  return v;
}

/// max over O_h of the infinity norm of Kt - I.
inline double max_shift_deviation(const ModifiedBasisSet& set) {
  double d = 0.0;
  for (const auto& b : set.bases) {
    const Matrix E = b.K - Matrix::Identity(b.K.rows(), b.K.cols());
    d = std::max(d, E.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return d;
}

}  // namespace bsfem
