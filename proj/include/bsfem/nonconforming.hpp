/**
 * @brief Quadratic nonconforming element with face-centroid values mu_F and
 * edge functionals nu_e(v) = 0.4 v(M_e) + 0.3 (v(A_e) + v(B_e)), and its
 * boundary-shifted Petrov-Galerkin variant (homogeneous Dirichlet data).
 *
 * Local DOF order: the 4 faces (face i opposite vertex i), then the 6 edges
 * in kTetEdges order. Global DOFs: faces first, then edges, each entity off
 * Gamma_h carrying one equation.
 */
#pragma once

#include "bsfem/assembly.hpp"

#include <vector>

namespace bsfem {

inline double nc_edge_functional(double at_a, double at_mid, double at_b) {
  return 0.4 * at_mid + 0.3 * (at_a + at_b);
}

struct NCReferenceElement {
  LagrangeElement p2{2};
  Matrix D;  // D(j, m) = DOF_j(phi_m)
  Matrix G;  // D^{-1}: basis b_i = sum_m G(m, i) phi_m

  /// DOF functional j applied to the P2 Lagrange basis.
  Vector dof_row(int j) const {
    if (j < 4) return p2.values(face_centroid(j));
    const auto& e = kTetEdges[j - 4];
    Vector r = 0.4 * p2.values(0.5 * (p2.node(e[0]) + p2.node(e[1])));
    r[e[0]] += 0.3;
    r[e[1]] += 0.3;
    return r;
  }

  Vec3 face_centroid(int f) const {
    Vec3 c = Vec3::Zero();
    for (int v : kTetFaces[f]) c += p2.node(v);
    return c / 3.0;
  }

  /// Basis function i at a reference point.
  double basis_value(int i, const Vec3& xi) const { return p2.values(xi).dot(G.col(i)); }
};

inline NCReferenceElement nc_build_reference_basis() {
  NCReferenceElement r;
  r.D.resize(10, 10);
  for (int j = 0; j < 10; ++j) r.D.row(j) = r.dof_row(j).transpose();
  Eigen::FullPivLU<Matrix> lu(r.D);
  if (!lu.isInvertible()) throw Error("singular nonconforming DOF matrix");
  r.G = lu.inverse();
  return r;
}

/// Global DOF entities: id f for face f, num_faces + e for edge e.
struct NCSpace {
  int num_faces = 0, num_edges = 0;
  std::vector<std::array<int, 10>> tet_dofs;
  std::vector<char> constrained;  // entity on Gamma_h
  std::vector<Vec3> shifted;      // P_F or Q_e for constrained entities

  int size() const { return num_faces + num_edges; }
};

inline NCSpace build_nc_space(const Mesh& m, const BoundaryClassification& c, const Surface& surface) {
  NCSpace s;
  s.num_faces = m.num_faces();
  s.num_edges = m.num_edges();
  s.constrained.assign(s.size(), 0);
  s.shifted.assign(s.size(), Vec3::Zero());
  for (int f : c.gamma_faces) {
    const int owner = m.face_tets[f][0];
    s.constrained[f] = 1;
    s.shifted[f] = nearest_line_intersection(surface, Line3::through(m.face_centroid(f), m.face_normal(f)),
                                             m.h_tet[owner]);
  }
  for (int e : c.gamma_edges) {
    const int id = s.num_faces + e;
    double h_ref = 0.0;
    for (int t : m.edge_tets[e]) h_ref = std::max(h_ref, m.h_tet[t]);
    const Vec3 mid = 0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
    s.constrained[id] = 1;
    s.shifted[id] = shift_edge_node(surface, mid, c.skin[e], h_ref);
  }
  s.tet_dofs.resize(m.num_tets());
  for (int t = 0; t < m.num_tets(); ++t) {
    for (int i = 0; i < 4; ++i) s.tet_dofs[t][i] = m.tet_faces[t][i];
    for (int e = 0; e < 6; ++e) s.tet_dofs[t][4 + e] = s.num_faces + m.tet_edges[t][e];
  }
  return s;
}

struct NCModifiedBasis {
  int tet = -1;
  Matrix D;  // shifted DOF matrix
  Matrix C;  // D^{-1}
};

struct NCModifiedBasisSet {
  std::vector<NCModifiedBasis> bases;
  std::vector<int> index;

  const NCModifiedBasis* find(int t) const { return index[t] < 0 ? nullptr : &bases[index[t]]; }
};

inline NCModifiedBasisSet build_nc_modified_bases(const Mesh& m, const BoundaryClassification& c,
                                                  const NCSpace& s, const NCReferenceElement& ref) {
  NCModifiedBasisSet set;
  set.index.assign(m.num_tets(), -1);
  for (int t = 0; t < m.num_tets(); ++t) {
    if (!c.in_o_h(t)) continue;
    const AffineMap map(m, t);
    NCModifiedBasis b;
    b.tet = t;
    b.D = ref.D;
    for (int j = 0; j < 10; ++j) {
      const int id = s.tet_dofs[t][j];
      if (!s.constrained[id]) continue;
      const Vector at_shift = ref.p2.values(map.inverse(s.shifted[id]));
      if (j < 4) {
        b.D.row(j) = at_shift.transpose();
      } else {
        const auto& e = kTetEdges[j - 4];
        Vector r = 0.4 * at_shift;
        r[e[0]] += 0.3;
        r[e[1]] += 0.3;
        b.D.row(j) = r.transpose();
      }
    }
    Eigen::PartialPivLU<Matrix> lu(b.D);
    b.C = lu.inverse();
    const double cond =
        b.D.cwiseAbs().colwise().sum().maxCoeff() * b.C.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > kMaxBasisCondition) throw Error("mesh too coarse for shifted basis");
    set.index[t] = static_cast<int>(set.bases.size());
    set.bases.push_back(std::move(b));
  }
  return set;
}

/// max over O_h of the infinity norm of D_shifted G - I.
inline double nc_max_shift_deviation(const NCModifiedBasisSet& set, const NCReferenceElement& ref) {
  double d = 0.0;
  for (const auto& b : set.bases) {
    const Matrix E = b.D * ref.G - Matrix::Identity(10, 10);
    d = std::max(d, E.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return d;
}

/// Broken Petrov-Galerkin system: element matrices G^T S C_shifted on O_h,
/// G^T S G elsewhere; DOFs on Gamma_h vanish.
inline LinearSystem nc_assemble(const Mesh& m, const NCSpace& s, const NCModifiedBasisSet& bases,
                                const NCReferenceElement& ref, const ScalarField& f, const QuadratureRule& quad,
                                const AssemblyOptions& opt = {}) {
  require_stiffness_degree(2, quad);
  const ElementTables tab(2, quad);
  DofMap dofs = build_dof_map(s.constrained);
  const Matrix Gt = ref.G.transpose();

  std::vector<detail::AssemblyChunk> chunks;
  detail::for_elements(
      m.num_tets(), opt,
      [&](int t, detail::AssemblyChunk& out) {
        const AffineMap map(m, t);
        const Matrix S = element_stiffness(map, tab);
        const NCModifiedBasis* b = bases.find(t);
        const Matrix A = Gt * S * (b ? b->C : ref.G);
        const Vector load = Gt * element_load(map, f, tab);
        for (int i = 0; i < 10; ++i) {
          const int row = dofs.equation[s.tet_dofs[t][i]];
          if (row < 0) continue;
          for (int j = 0; j < 10; ++j) {
            const int col = dofs.equation[s.tet_dofs[t][j]];
            if (col >= 0) out.triplets.emplace_back(row, col, A(i, j));
          }
          out.rhs.emplace_back(row, load[i]);
        }
      },
      chunks);
  return detail::finish(std::move(dofs), chunks, bases.bases.empty());
}

/// Per-element P2 Lagrange coefficients of the discrete solution.
inline Matrix nc_element_coefficients(const Mesh& m, const NCSpace& s, const NCModifiedBasisSet& bases,
                                      const NCReferenceElement& ref, const DofMap& dofs, const Vector& solution) {
  Matrix coef(10, m.num_tets());
  Vector local(10);
  for (int t = 0; t < m.num_tets(); ++t) {
    for (int i = 0; i < 10; ++i) {
      const int eq = dofs.equation[s.tet_dofs[t][i]];
      local[i] = eq >= 0 ? solution[eq] : 0.0;
    }
    const NCModifiedBasis* b = bases.find(t);
    coef.col(t) = (b ? b->C : ref.G) * local;
  }
  return coef;
}

/// Values of the 10 unshifted DOFs of a function on tet t.
inline Vector nc_element_dofs(const Mesh& m, int t, const ScalarField& u) {
  Vector d(10);
  for (int f = 0; f < 4; ++f) {
    Vec3 c = Vec3::Zero();
    for (int v : kTetFaces[f]) c += m.vertex(t, v);
    d[f] = u(c / 3.0);
  }
  for (int e = 0; e < 6; ++e) {
    const Vec3 a = m.vertex(t, kTetEdges[e][0]), b = m.vertex(t, kTetEdges[e][1]);
    d[4 + e] = nc_edge_functional(u(a), u(0.5 * (a + b)), u(b));
  }
  return d;
}

}  // namespace bsfem
