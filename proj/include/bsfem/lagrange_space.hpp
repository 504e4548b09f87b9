/**
 * @brief Global numbering of the degree-k Lagrangian nodes of a mesh.
 *
 * Vertices come first (ids [0, nv)), then k-1 nodes per mesh edge running
 * from the smaller to the larger vertex id, then (k = 3) one node per mesh
 * face.
 */
#pragma once

#include "bsfem/mesh.hpp"
#include "bsfem/reference_element.hpp"

#include <vector>

namespace bsfem {

struct LagrangeSpace {
  int k = 2;
  int num_nodes = 0;
  std::vector<Vec3> positions;
  std::vector<NodeEntity> entity;       // global entity (vertex, edge or face id)
  std::vector<std::vector<int>> tet_nodes;  // local node -> global node

  int edge_node(const Mesh& m, int edge, int s) const { return m.num_vertices() + edge * (k - 1) + s; }
  int face_node(const Mesh& m, int face) const {
    return m.num_vertices() + m.num_edges() * (k - 1) + face;
  }
};

inline LagrangeSpace build_lagrange_space(const Mesh& m, int k) {
  const LagrangeElement el(k);
  LagrangeSpace sp;
  sp.k = k;
  const int nv = m.num_vertices(), ne = m.num_edges(), nf = m.num_faces();
  sp.num_nodes = nv + ne * (k - 1) + (k == 3 ? nf : 0);
  sp.positions.resize(sp.num_nodes);
  sp.entity.resize(sp.num_nodes);

  for (int v = 0; v < nv; ++v) {
    sp.positions[v] = m.vertices[v];
    sp.entity[v] = {EntityKind::vertex, v, 0};
  }
  for (int e = 0; e < ne; ++e) {
    const Vec3& a = m.vertices[m.edges[e][0]];
    const Vec3& b = m.vertices[m.edges[e][1]];
    for (int s = 0; s < k - 1; ++s) {
      const int id = sp.edge_node(m, e, s);
      sp.positions[id] = a + (double(s + 1) / k) * (b - a);
      sp.entity[id] = {EntityKind::edge, e, s};
    }
  }
  if (k == 3)
    for (int f = 0; f < nf; ++f) {
      const int id = sp.face_node(m, f);
      sp.positions[id] = m.face_centroid(f);
      sp.entity[id] = {EntityKind::face, f, 0};
    }

  sp.tet_nodes.assign(m.num_tets(), std::vector<int>(el.size()));
  for (int t = 0; t < m.num_tets(); ++t) {
    for (int i = 0; i < el.size(); ++i) {
      const NodeEntity& loc = el.entity(i);
      int id = -1;
      switch (loc.kind) {
        case EntityKind::vertex: id = m.tets[t][loc.local]; break;
        case EntityKind::edge: {
          const int ge = m.tet_edges[t][loc.local];
          const bool same = m.tets[t][kTetEdges[loc.local][0]] == m.edges[ge][0];
          id = sp.edge_node(m, ge, same ? loc.position : k - 2 - loc.position);
          break;
        }
        case EntityKind::face: id = sp.face_node(m, m.tet_faces[t][loc.local]); break;
      }
      sp.tet_nodes[t][i] = id;
    }
  }
  return sp;
}

}  // namespace bsfem
