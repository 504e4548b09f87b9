/**
 * @brief Straight-edged tetrahedral meshes with face and edge topology.
 */
#pragma once

#include "bsfem/common.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

namespace bsfem {

/// Plane {x : normal.x = offset}, normal of unit length.
struct Plane {
  Vec3 normal;
  double offset = 0.0;

  double signed_distance(const Vec3& x) const { return normal.dot(x) - offset; }
  Vec3 reflect(const Vec3& v) const { return v - 2.0 * v.dot(normal) * normal; }
};

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;  // positively oriented

  // Topology; face i of a tet is opposite its local vertex i, edges follow kTetEdges.
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 2>> face_tets;  // {owner, neighbor or -1}
  std::vector<std::array<int, 2>> edges;      // {smaller vertex id, larger vertex id}
  std::vector<std::vector<int>> edge_tets;
  std::vector<std::array<int, 4>> tet_faces;
  std::vector<std::array<int, 6>> tet_edges;

  std::vector<double> h_tet;  // element diameters h_T
  double h = 0.0;             // max h_T
  double reference_h = 0.0;   // family-specific reference mesh size
  std::string domain;
  std::vector<Plane> symmetry_planes;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  Vec3 vertex(int t, int local) const { return vertices[tets[t][local]]; }

  double volume(int t) const {
    const auto& v = tets[t];
    return signed_volume(vertices[v[0]], vertices[v[1]], vertices[v[2]], vertices[v[3]]);
  }

  bool is_boundary_face(int f) const { return face_tets[f][1] < 0; }

  Vec3 face_centroid(int f) const {
    const auto& v = faces[f];
    return (vertices[v[0]] + vertices[v[1]] + vertices[v[2]]) / 3.0;
  }

  /// Unit normal of a face pointing out of its owner tet.
  Vec3 face_normal(int f) const {
    const auto& v = faces[f];
    const Vec3& a = vertices[v[0]];
    Vec3 n = (vertices[v[1]] - a).cross(vertices[v[2]] - a);
    const int owner = face_tets[f][0];
    int opposite = -1;
    for (int i = 0; i < 4; ++i)
      if (tet_faces[owner][i] == f) opposite = tets[owner][i];
    if (n.dot(vertices[opposite] - a) > 0) n = -n;
    return n.normalized();
  }

  /// Global id of the vertex of tet t opposite to the given mesh face.
  int opposite_vertex(int t, int f) const {
    for (int i = 0; i < 4; ++i)
      if (tet_faces[t][i] == f) return tets[t][i];
    throw Error("face does not belong to tet");
  }
};

namespace detail {

struct KeyHash {
  std::size_t operator()(const std::array<int, 3>& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k[0]);
    h = h * 1000003u ^ static_cast<std::size_t>(k[1]);
    h = h * 1000003u ^ static_cast<std::size_t>(k[2]);
    return h;
  }
};

inline double tet_diameter(const Mesh& m, int t) {
  double d = 0.0;
  for (const auto& e : kTetEdges)
    d = std::max(d, (m.vertex(t, e[0]) - m.vertex(t, e[1])).norm());
  return d;
}

}  // namespace detail

/// Fills faces, edges, incidences and element sizes from vertices and tets.
/// Tets are reoriented to positive volume; degenerate tets are rejected.
inline void build_topology(Mesh& m) {
  const int nt = m.num_tets();
  double max_vol = 0.0;
  for (int t = 0; t < nt; ++t) max_vol = std::max(max_vol, std::abs(m.volume(t)));
  for (int t = 0; t < nt; ++t) {
    const double vol = m.volume(t);
    if (!(std::abs(vol) > 1e-12 * max_vol)) throw Error("degenerate element");
    if (vol < 0) std::swap(m.tets[t][2], m.tets[t][3]);
  }

  m.faces.clear();
  m.face_tets.clear();
  m.edges.clear();
  m.edge_tets.clear();
  m.tet_faces.assign(nt, {});
  m.tet_edges.assign(nt, {});
  std::unordered_map<std::array<int, 3>, int, detail::KeyHash> face_ids, edge_ids;
  for (int t = 0; t < nt; ++t) {
    const auto& v = m.tets[t];
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> key = {v[kTetFaces[i][0]], v[kTetFaces[i][1]], v[kTetFaces[i][2]]};
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_ids.try_emplace(key, m.num_faces());
      if (inserted) {
        m.faces.push_back({v[kTetFaces[i][0]], v[kTetFaces[i][1]], v[kTetFaces[i][2]]});
        m.face_tets.push_back({t, -1});
      } else {
        auto& ft = m.face_tets[it->second];
        if (ft[1] >= 0) throw Error("non-manifold face shared by more than two tets");
        ft[1] = t;
      }
      m.tet_faces[t][i] = it->second;
    }
    for (int e = 0; e < 6; ++e) {
      int a = v[kTetEdges[e][0]], b = v[kTetEdges[e][1]];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_ids.try_emplace({a, b, -1}, m.num_edges());
      if (inserted) {
        m.edges.push_back({a, b});
        m.edge_tets.emplace_back();
      }
      m.edge_tets[it->second].push_back(t);
      m.tet_edges[t][e] = it->second;
    }
  }

  m.h_tet.resize(nt);
  m.h = 0.0;
  for (int t = 0; t < nt; ++t) {
    m.h_tet[t] = detail::tet_diameter(m, t);
    m.h = std::max(m.h, m.h_tet[t]);
  }
}

inline Mesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                      std::string domain, std::vector<Plane> symmetry_planes = {}) {
  Mesh m;
  m.vertices = std::move(vertices);
  m.tets = std::move(tets);
  m.domain = std::move(domain);
  m.symmetry_planes = std::move(symmetry_planes);
  for (const auto& t : m.tets)
    for (int v : t)
      if (v < 0 || v >= m.num_vertices()) throw Error("tet references a missing vertex");
  build_topology(m);
  return m;
}

inline double total_volume(const Mesh& m) {
  double v = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) v += m.volume(t);
  return v;
}

}  // namespace bsfem
