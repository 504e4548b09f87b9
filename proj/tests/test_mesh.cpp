#include "bsfem/boundary.hpp"
#include "bsfem/mesh_generators.hpp"
#include "bsfem/mesh_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <set>
#include <sstream>

using namespace bsfem;
namespace ts = testing_support;

namespace {

const Surface kUnitSphere = Surface::sphere(Vec3::Zero(), 1.0);
const Surface kEllipsoid = Surface::ellipsoid(0.6, 0.8, 1.0);
const Surface kTorus = Surface::torus(5.0 / 6.0, 1.0 / 6.0);

double min_volume(const Mesh& m) {
  double v = 1e300;
  for (int t = 0; t < m.num_tets(); ++t) v = std::min(v, m.volume(t));
  return v;
}

// Independent incidence scan: a tet face is a curved-boundary face when its
// three vertices are on the surface, no other tet has the same three
// vertices, and it does not lie in a symmetry plane.
struct BruteForce {
  std::set<int> s_h, r_h, touching;
};

BruteForce brute_force_sets(const Mesh& m, const Surface& s) {
  const double tol = s.tolerance();
  auto on_surface = [&](int v) { return s.distance_estimate(m.vertices[v]) <= tol; };
  auto on_some_plane = [&](const std::array<int, 3>& f) {
    for (const auto& p : m.symmetry_planes) {
      bool all = true;
      for (int v : f) all = all && std::abs(p.signed_distance(m.vertices[v])) <= tol;
      if (all) return true;
    }
    return false;
  };
  std::vector<std::array<int, 3>> gamma_faces;
  for (int t = 0; t < m.num_tets(); ++t)
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> f;
      for (int j = 0; j < 3; ++j) f[j] = m.tets[t][kTetFaces[i][j]];
      std::sort(f.begin(), f.end());
      bool shared = false;
      for (int u = 0; u < m.num_tets() && !shared; ++u) {
        if (u == t) continue;
        int hits = 0;
        for (int v : m.tets[u]) hits += (v == f[0] || v == f[1] || v == f[2]);
        shared = hits == 3;
      }
      if (!shared && on_surface(f[0]) && on_surface(f[1]) && on_surface(f[2]) && !on_some_plane(f))
        gamma_faces.push_back(f);
    }
  std::set<std::pair<int, int>> gamma_edges;
  for (const auto& f : gamma_faces)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) gamma_edges.insert({f[a], f[b]});
  BruteForce r;
  for (int t = 0; t < m.num_tets(); ++t) {
    std::array<int, 4> v = m.tets[t];
    std::sort(v.begin(), v.end());
    int nf = 0, ne = 0;
    for (const auto& f : gamma_faces) {
      int hits = 0;
      for (int x : f) hits += std::binary_search(v.begin(), v.end(), x);
      nf += hits == 3;
    }
    for (const auto& [a, b] : gamma_edges)
      ne += std::binary_search(v.begin(), v.end(), a) && std::binary_search(v.begin(), v.end(), b);
    if (nf > 0) r.s_h.insert(t);
    else if (ne > 0) r.r_h.insert(t);
    if (nf > 0 || ne > 0) r.touching.insert(t);
  }
  return r;
}

}  // namespace

TEST(BoxMesh, Counts) {
  EXPECT_EQ(generate_box_tet_mesh(1, 1, 1).num_tets(), 6);
  EXPECT_EQ(generate_box_tet_mesh(8, 8, 8).num_tets(), 3072);
  // cube stage of the torus pipeline with I = 4: (2I, I/2, I/2) boxes, 3 I^3 tets
  EXPECT_EQ(generate_box_tet_mesh(8, 2, 2).num_tets(), 192);
}

TEST(BoxMesh, PositiveVolumesAndExactTotal) {
  const Mesh m = generate_box_tet_mesh(3, 2, 4, Vec3(-1, 0, 0), Vec3(1, 1, 2));
  EXPECT_GT(min_volume(m), 0.0);
  EXPECT_NEAR(total_volume(m), 4.0, 1e-13);
}

TEST(BoxMesh, EveryTetContainsItsCellDiagonal) {
  const Mesh m = generate_box_tet_mesh(2, 2, 2);
  for (int t = 0; t < m.num_tets(); ++t) {
    bool found = false;
    for (const auto& e : kTetEdges) {
      const Vec3 d = m.vertex(t, e[1]) - m.vertex(t, e[0]);
      found = found || (std::abs(std::abs(d[0]) - 0.5) < 1e-15 && std::abs(std::abs(d[1]) - 0.5) < 1e-15 &&
                        std::abs(std::abs(d[2]) - 0.5) < 1e-15 && d[0] * d[1] > 0 && d[1] * d[2] > 0);
    }
    EXPECT_TRUE(found) << "tet " << t;
  }
}

TEST(MeshTopology, FaceAndEdgeIncidenceIsConsistent) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 4);
  std::vector<int> face_count(m.num_faces(), 0);
  for (int t = 0; t < m.num_tets(); ++t)
    for (int i = 0; i < 4; ++i) ++face_count[m.tet_faces[t][i]];
  for (int f = 0; f < m.num_faces(); ++f) EXPECT_EQ(face_count[f], m.is_boundary_face(f) ? 1 : 2);
  // Euler characteristic of a ball: V - E + F - T = 1
  EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_faces() - m.num_tets(), 1);
}

TEST(MeshTopology, DegenerateElementIsRejected) {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0), Vec3(0, 0, 1)};
  EXPECT_THROW(make_mesh(v, {{0, 1, 2, 4}, {0, 1, 2, 3}}, "bad"), Error);
}

TEST(MeshTopology, NegativelyOrientedInputIsReoriented) {
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  const Mesh m = make_mesh(v, {{0, 2, 1, 3}}, "one");
  EXPECT_NEAR(m.volume(0), 1.0 / 6, 1e-15);
}

TEST(OctantMesh, SingleCornerTet) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 1);
  EXPECT_EQ(m.num_tets(), 1);
  int on = 0;
  for (const auto& v : m.vertices) on += std::abs(v.norm() - 1) < 1e-15;
  EXPECT_EQ(on, 3);
  const auto c = classify_boundary(m, kUnitSphere);
  EXPECT_EQ(c.s_h, std::vector<int>{0});
  EXPECT_TRUE(c.r_h.empty());
}

TEST(OctantMesh, SphereJ4ShellOnSurface) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 4);
  EXPECT_EQ(m.num_tets(), 64);
  const auto c = classify_boundary(m, kUnitSphere);
  ASSERT_FALSE(c.gamma_vertices.empty());
  for (int v : c.gamma_vertices) EXPECT_NEAR(m.vertices[v].squaredNorm(), 1.0, 1e-12);
  // the outer shell of a J = 4 lattice has (J+1)(J+2)/2 = 15 vertices
  EXPECT_EQ(c.gamma_vertices.size(), 15u);
}

TEST(OctantMesh, EllipsoidJ8PositiveVolumes) {
  EXPECT_GT(min_volume(generate_octant_mesh(kEllipsoid, 8)), 0.0);
}

TEST(OctantMesh, VolumeConvergesQuadratically) {
  const double exact = std::numbers::pi * 0.6 * 0.8 / 6;
  const double e4 = exact - total_volume(generate_octant_mesh(kEllipsoid, 4));
  const double e8 = exact - total_volume(generate_octant_mesh(kEllipsoid, 8));
  EXPECT_GT(e4, 0.0);
  EXPECT_GE(e4 / e8, 3.0);
  EXPECT_LE(e4 / e8, 5.0);
}

TEST(OctantMesh, RejectsBadInput) {
  EXPECT_THROW(generate_octant_mesh(kUnitSphere, 0), Error);
  EXPECT_THROW(generate_octant_mesh(kTorus, 2), Error);
}

TEST(TorusMesh, Counts) {
  EXPECT_EQ(generate_torus_sector_mesh(2, 5.0 / 6, 1.0 / 6).num_tets(), 48);
  EXPECT_EQ(generate_torus_sector_mesh(4, 5.0 / 6, 1.0 / 6).num_tets(), 384);
}

TEST(TorusMesh, OddOrTooSmallParameterIsRejected) {
  EXPECT_THROW(generate_torus_sector_mesh(3, 5.0 / 6, 1.0 / 6), Error);
  EXPECT_THROW(generate_torus_sector_mesh(0, 5.0 / 6, 1.0 / 6), Error);
  EXPECT_THROW(generate_torus_sector_mesh(2, 1.0 / 6, 5.0 / 6), Error);
}

TEST(TorusMesh, CurvedBoundaryVerticesOnTorus) {
  const Mesh m = generate_torus_sector_mesh(4, 5.0 / 6, 1.0 / 6);
  EXPECT_GT(min_volume(m), 0.0);
  const auto c = classify_boundary(m, kTorus);
  ASSERT_FALSE(c.gamma_vertices.empty());
  for (int v : c.gamma_vertices) EXPECT_NEAR(kTorus.value(m.vertices[v]), 0.0, 1e-12);
  for (const auto& v : m.vertices) {
    EXPECT_GE(v[2], -1e-15);
    EXPECT_GE(v[1], -1e-15);
    EXPECT_LE(v[1], v[0] + 1e-14);  // 0 <= theta <= pi/4
  }
}

TEST(TorusMesh, ReferenceMeshSize) {
  EXPECT_DOUBLE_EQ(generate_torus_sector_mesh(4, 5.0 / 6, 1.0 / 6).reference_h, std::numbers::pi / 32);
}

TEST(TorusMesh, CurvedBoundaryIsAManifoldAwayFromTheSymmetryPlanes) {
  const Mesh m = generate_torus_sector_mesh(2, 5.0 / 6, 1.0 / 6);
  const auto c = classify_boundary(m, kTorus);
  const double tol = kTorus.tolerance();
  for (int e : c.gamma_edges) {
    int faces = 0;
    for (int f : c.gamma_faces) {
      const auto& fv = m.faces[f];
      const bool a = std::find(fv.begin(), fv.end(), m.edges[e][0]) != fv.end();
      const bool b = std::find(fv.begin(), fv.end(), m.edges[e][1]) != fv.end();
      faces += a && b;
    }
    bool rim = false;
    for (const auto& p : m.symmetry_planes)
      rim = rim || (std::abs(p.signed_distance(m.vertices[m.edges[e][0]])) <= tol &&
                    std::abs(p.signed_distance(m.vertices[m.edges[e][1]])) <= tol);
    EXPECT_EQ(faces, rim ? 1 : 2) << "edge " << e;
  }
}

TEST(Classification, MatchesBruteForceScan) {
  for (int J : {2, 4}) {
    const Mesh m = generate_octant_mesh(kUnitSphere, J);
    const auto c = classify_boundary(m, kUnitSphere);
    const BruteForce b = brute_force_sets(m, kUnitSphere);
    EXPECT_EQ(std::set<int>(c.s_h.begin(), c.s_h.end()), b.s_h);
    EXPECT_EQ(std::set<int>(c.r_h.begin(), c.r_h.end()), b.r_h);
    EXPECT_EQ(c.s_h.size() + c.r_h.size(), b.touching.size());
    EXPECT_TRUE(c.violations.empty());
  }
  const Mesh t = generate_torus_sector_mesh(2, 5.0 / 6, 1.0 / 6);
  const auto c = classify_boundary(t, kTorus);
  const BruteForce b = brute_force_sets(t, kTorus);
  EXPECT_EQ(std::set<int>(c.s_h.begin(), c.s_h.end()), b.s_h);
  EXPECT_EQ(std::set<int>(c.r_h.begin(), c.r_h.end()), b.r_h);
}

TEST(Classification, SetsAreDisjoint) {
  const Mesh m = generate_octant_mesh(kEllipsoid, 4);
  const auto c = classify_boundary(m, kEllipsoid);
  for (int t : c.s_h) EXPECT_FALSE(c.in_r_h(t));
  for (int t : c.r_h) EXPECT_FALSE(c.in_s_h(t));
  EXPECT_EQ(c.o_h_size(), c.s_h.size() + c.r_h.size());
}

TEST(Classification, StableUnderVertexOrderPermutation) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 4);
  const auto c = classify_boundary(m, kUnitSphere);
  auto g = ts::rng(404);
  auto tets = m.tets;
  for (auto& t : tets) std::shuffle(t.begin(), t.end(), g);
  const Mesh p = make_mesh(m.vertices, tets, m.domain, m.symmetry_planes);
  const auto cp = classify_boundary(p, kUnitSphere);
  EXPECT_EQ(c.s_h, cp.s_h);
  EXPECT_EQ(c.r_h, cp.r_h);
  EXPECT_EQ(c.gamma_vertices, cp.gamma_vertices);
}

TEST(Classification, VertexOffSurfaceIsAnError) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 2);
  try {
    classify_boundary(m, Surface::sphere(Vec3::Zero(), 1.1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "boundary vertex off surface");
  }
}

TEST(Classification, ViolationsAreReported) {
  // Regular tet inscribed in the sphere, no symmetry planes: four curved faces.
  const double s = 1 / std::sqrt(3.0);
  std::vector<Vec3> v = {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
  const Mesh m = make_mesh(v, {{0, 1, 2, 3}}, "inscribed");
  const auto c = classify_boundary(m, kUnitSphere, {});
  EXPECT_EQ(c.violations, std::vector<int>{0});
  EXPECT_THROW(require_shiftable(c), Error);
}

TEST(Classification, QuasiUniformFamilies) {
  auto ratio = [](const Mesh& m) {
    return *std::max_element(m.h_tet.begin(), m.h_tet.end()) / *std::min_element(m.h_tet.begin(), m.h_tet.end());
  };
  for (int J : {2, 4, 8}) {
    EXPECT_LT(ratio(generate_octant_mesh(kUnitSphere, J)), 6.0) << J;
    EXPECT_LT(ratio(generate_octant_mesh(kEllipsoid, J)), 6.0) << J;
  }
  for (int I : {2, 4, 8}) EXPECT_LT(ratio(generate_torus_sector_mesh(I, 5.0 / 6, 1.0 / 6)), 6.0) << I;
}

TEST(SkinDirection, CoplanarFaces) {
  const Vec3 n(0, 0, 1);
  EXPECT_TRUE(skin_direction(Vec3(0, 0, 0), Vec3(1, 0, 0), n, n).isApprox(n, 1e-15));
}

TEST(SkinDirection, SymmetricRoofRidge) {
  const double s = 0.6, c = 0.8;
  const Vec3 w = skin_direction(Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(s, 0, c), Vec3(-s, 0, c));
  EXPECT_TRUE(w.isApprox(Vec3(0, 0, 1), 1e-15));
}

TEST(SkinDirection, DegenerateConfigurationIsAnError) {
  try {
    skin_direction(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "degenerate skin");
  }
}

TEST(SkinDirection, UprightOnSphereOctant) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 4);
  const auto c = classify_boundary(m, kUnitSphere);
  for (int e : c.gamma_edges) {
    const Vec3 w = skin_direction(c, e);
    const Vec3 a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
    EXPECT_NEAR(w.dot((b - a).normalized()), 0.0, 1e-12);
    const Vec3 mid = 0.5 * (a + b);
    const Vec3 P = nearest_line_intersection(kUnitSphere, Line3::through(mid, w), m.h);
    EXPECT_GE(std::abs(w.dot(outward_normal(kUnitSphere, P))), 1.0 - m.h) << "edge " << e;
    EXPECT_GT(w.dot(mid), 0.0);  // points out of the domain
  }
  const auto interior = std::find(c.edge_on_gamma.begin(), c.edge_on_gamma.end(), 0);
  ASSERT_NE(interior, c.edge_on_gamma.end());
  EXPECT_THROW(skin_direction(c, static_cast<int>(interior - c.edge_on_gamma.begin())), Error);
}

TEST(MeshIO, VtkAndTextDump) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 4);
  std::ostringstream vtk, dump;
  write_vtk(vtk, m);
  write_mesh_dump(dump, m);
  EXPECT_NE(vtk.str().find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(vtk.str().find("CELLS 64 320"), std::string::npos);
  EXPECT_NE(vtk.str().find("CELL_TYPES 64"), std::string::npos);
  std::istringstream in(dump.str());
  std::string word;
  int nv = 0, nt = 0;
  in >> word >> nv;
  EXPECT_EQ(word, "vertices");
  EXPECT_EQ(nv, m.num_vertices());
  for (int i = 0; i < nv; ++i) {
    double x, y, z;
    in >> x >> y >> z;
    ASSERT_EQ(Vec3(x, y, z), m.vertices[i]);  // %.17g round-trips exactly
  }
  in >> word >> nt;
  EXPECT_EQ(word, "tets");
  EXPECT_EQ(nt, 64);
}

TEST(MeshIO, PointDataSizeIsChecked) {
  const Mesh m = generate_octant_mesh(kUnitSphere, 1);
  std::vector<double> wrong(2, 0.0);
  std::ostringstream os;
  EXPECT_THROW(write_vtk(os, m, &wrong), Error);
}
