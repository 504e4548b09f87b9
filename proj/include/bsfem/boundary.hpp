/**
 * @brief Classification of the polyhedral boundary Gamma_h: curved-boundary
 * faces, edges and vertices, the element sets S_h (one face on Gamma_h) and
 * R_h (exactly one edge on Gamma_h), and the skin direction of every
 * boundary edge.
 */
#pragma once

#include "bsfem/geometry.hpp"
#include "bsfem/mesh.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace bsfem {

struct BoundaryClassification {
  std::vector<char> face_on_gamma, edge_on_gamma, vertex_on_gamma;
  std::vector<char> face_on_symmetry, vertex_on_symmetry;
  std::vector<int> gamma_faces, gamma_edges, gamma_vertices;

  std::vector<int> s_h, r_h;
  std::vector<int> tet_gamma_face;  // local face index for tets in S_h, else -1
  std::vector<int> tet_gamma_edge;  // local edge index for tets in R_h, else -1

  /// Tets with more than one face, or more than one edge outside a single
  /// face, on Gamma_h. The shifted construction needs this list empty.
  std::vector<int> violations;

  std::vector<Vec3> skin;  // per mesh edge, zero off Gamma_h

  bool in_s_h(int t) const { return tet_gamma_face[t] >= 0; }
  bool in_r_h(int t) const { return tet_gamma_edge[t] >= 0; }
  bool in_o_h(int t) const { return in_s_h(t) || in_r_h(t); }
  std::size_t o_h_size() const { return s_h.size() + r_h.size(); }
};

/// Unit vector in the plane orthogonal to edge (a, b) along the bisector of
/// two adjacent boundary faces with outward normals n1, n2.
inline Vec3 skin_direction(const Vec3& a, const Vec3& b, const Vec3& n1, const Vec3& n2) {
  const Vec3 e = (b - a).normalized();
  const Vec3 s = n1 + n2;
  const Vec3 w = s - s.dot(e) * e;
  const double sn = s.norm(), wn = w.norm();
  if (!(sn > 1e-12) || !(wn > 1e-6 * sn)) throw Error("degenerate skin");
  return w / wn;
}

inline BoundaryClassification classify_boundary(const Mesh& m, const Surface& surface,
                                                const std::vector<Plane>& symmetry_planes) {
  const double tol = surface.tolerance();
  BoundaryClassification c;
  c.face_on_gamma.assign(m.num_faces(), 0);
  c.face_on_symmetry.assign(m.num_faces(), 0);
  c.edge_on_gamma.assign(m.num_edges(), 0);
  c.vertex_on_gamma.assign(m.num_vertices(), 0);
  c.vertex_on_symmetry.assign(m.num_vertices(), 0);
  c.tet_gamma_face.assign(m.num_tets(), -1);
  c.tet_gamma_edge.assign(m.num_tets(), -1);
  c.skin.assign(m.num_edges(), Vec3::Zero());

  auto on_plane = [&](const Plane& p, int f) {
    for (int v : m.faces[f])
      if (std::abs(p.signed_distance(m.vertices[v])) > tol) return false;
    return true;
  };

  for (int f = 0; f < m.num_faces(); ++f) {
    if (!m.is_boundary_face(f)) continue;
    bool sym = false;
    for (const auto& p : symmetry_planes) sym = sym || on_plane(p, f);
    if (sym) {
      c.face_on_symmetry[f] = 1;
      for (int v : m.faces[f]) c.vertex_on_symmetry[v] = 1;
      continue;
    }
    for (int v : m.faces[f])
      if (!surface.contains_point(m.vertices[v])) throw Error("boundary vertex off surface");
    c.face_on_gamma[f] = 1;
    c.gamma_faces.push_back(f);
    for (int v : m.faces[f]) c.vertex_on_gamma[v] = 1;
  }
  for (int v = 0; v < m.num_vertices(); ++v)
    if (c.vertex_on_gamma[v]) c.gamma_vertices.push_back(v);

  // Gamma_h edges are the edges of Gamma_h faces.
  for (int t = 0; t < m.num_tets(); ++t)
    for (int i = 0; i < 4; ++i) {
      if (!c.face_on_gamma[m.tet_faces[t][i]]) continue;
      for (int e = 0; e < 6; ++e)
        if (kTetEdges[e][0] != i && kTetEdges[e][1] != i) c.edge_on_gamma[m.tet_edges[t][e]] = 1;
    }
  for (int e = 0; e < m.num_edges(); ++e)
    if (c.edge_on_gamma[e]) c.gamma_edges.push_back(e);

  for (int t = 0; t < m.num_tets(); ++t) {
    int nfaces = 0, first_face = -1;
    for (int i = 0; i < 4; ++i)
      if (c.face_on_gamma[m.tet_faces[t][i]]) {
        if (first_face < 0) first_face = i;
        ++nfaces;
      }
    int nedges = 0, first_edge = -1;
    for (int e = 0; e < 6; ++e)
      if (c.edge_on_gamma[m.tet_edges[t][e]]) {
        if (first_edge < 0) first_edge = e;
        ++nedges;
      }
    const bool bad = nfaces > 1 || (nfaces == 1 && nedges > 3) || (nfaces == 0 && nedges > 1);
    if (bad) c.violations.push_back(t);
    if (nfaces >= 1) {
      c.tet_gamma_face[t] = first_face;
      c.s_h.push_back(t);
    } else if (nedges >= 1) {
      c.tet_gamma_edge[t] = first_edge;
      c.r_h.push_back(t);
    }
  }

  for (int e : c.gamma_edges) {
    std::vector<int> adjacent;
    for (int t : m.edge_tets[e])
      for (int i = 0; i < 4; ++i) {
        const int f = m.tet_faces[t][i];
        if (!c.face_on_gamma[f]) continue;
        const auto& fv = m.faces[f];
        const bool has_a = fv[0] == m.edges[e][0] || fv[1] == m.edges[e][0] || fv[2] == m.edges[e][0];
        const bool has_b = fv[0] == m.edges[e][1] || fv[1] == m.edges[e][1] || fv[2] == m.edges[e][1];
        if (has_a && has_b && std::find(adjacent.begin(), adjacent.end(), f) == adjacent.end())
          adjacent.push_back(f);
      }
    const Vec3& a = m.vertices[m.edges[e][0]];
    const Vec3& b = m.vertices[m.edges[e][1]];
    if (adjacent.size() == 2) {
      c.skin[e] = skin_direction(a, b, m.face_normal(adjacent[0]), m.face_normal(adjacent[1]));
    } else if (adjacent.size() == 1) {
      // Rim edge on a symmetry plane: the missing face is the mirror image.
      const Plane* mirror = nullptr;
      for (const auto& p : symmetry_planes)
        if (std::abs(p.signed_distance(a)) <= tol && std::abs(p.signed_distance(b)) <= tol) mirror = &p;
      if (!mirror) throw Error("boundary edge with a single curved face off the symmetry planes");
      const Vec3 n1 = m.face_normal(adjacent[0]);
      c.skin[e] = skin_direction(a, b, n1, mirror->reflect(n1));
    } else {
      throw Error("non-manifold curved boundary edge");
    }
  }
  return c;
}

inline BoundaryClassification classify_boundary(const Mesh& m, const Surface& surface) {
  return classify_boundary(m, surface, m.symmetry_planes);
}

/// Throws unless every tet meets the one-face-or-one-edge assumption.
inline void require_shiftable(const BoundaryClassification& c) {
  if (!c.violations.empty())
    throw Error("mesh violates the one-face-or-one-edge boundary assumption (" +
                std::to_string(c.violations.size()) + " tets)");
}

/// Skin direction of a Gamma_h edge.
inline Vec3 skin_direction(const BoundaryClassification& c, int edge) {
  if (!c.edge_on_gamma[edge]) throw Error("edge is not on the curved boundary");
  return c.skin[edge];
}

}  // namespace bsfem
