/**
 * @brief Built-in property suite (run by `bsfem check`).
 */
#pragma once

#include "bsfem/analysis.hpp"
#include "bsfem/nonconforming.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace bsfem {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Uniform random point of the reference tetrahedron.
inline Vec3 random_reference_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::array<double, 3> s = {U(rng), U(rng), U(rng)};
  std::sort(s.begin(), s.end());
  return {s[0], s[1] - s[0], s[2] - s[1]};
}

// Random polynomial of total degree <= k as a callable.
inline ScalarField random_polynomial(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<std::pair<std::array<int, 3>, double>> terms;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b)
      for (int c = 0; a + b + c <= k; ++c) terms.push_back({{a, b, c}, U(rng)});
  return [terms](const Vec3& x) {
    double v = 0.0;
    for (const auto& [e, coef] : terms) v += coef * std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
    return v;
  };
}

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace detail

inline CheckResult check_quadrature() {
  double worst = 0.0;
  for (const auto& rule : {four_point_rule(), fifteen_point_rule()})
    for (int a = 0; a <= rule.degree; ++a)
      for (int b = 0; a + b <= rule.degree; ++b)
        for (int c = 0; a + b + c <= rule.degree; ++c) {
          const double exact =
              detail::factorial(a) * detail::factorial(b) * detail::factorial(c) / detail::factorial(a + b + c + 3);
          double q = 0.0;
          for (int i = 0; i < rule.size(); ++i) {
            const Vec3& p = rule.points[i];
            q += rule.weights[i] * std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c);
          }
          worst = std::max(worst, std::abs(q - exact) / exact);
        }
  return {"quadrature exactness to degree 5", worst <= 1e-13, "max relative error " + detail::sci(worst)};
}

inline CheckResult check_shape_functions() {
  std::mt19937_64 rng(11);
  double delta = 0.0, unity = 0.0;
  for (int k : {2, 3}) {
    const LagrangeElement el(k);
    for (int j = 0; j < el.size(); ++j)
      for (int i = 0; i < el.size(); ++i)
        delta = std::max(delta, std::abs(el.value(i, el.node(j)) - (i == j ? 1.0 : 0.0)));
    for (int s = 0; s < 100; ++s) unity = std::max(unity, std::abs(el.values(detail::random_reference_point(rng)).sum() - 1.0));
  }
  return {"shape functions: delta property and partition of unity", delta <= 1e-12 && unity <= 1e-12,
          "delta " + detail::sci(delta) + ", unity " + detail::sci(unity)};
}

inline CheckResult check_gradients() {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  const double step = 1e-6;
  for (int k : {2, 3}) {
    const LagrangeElement el(k);
    for (int s = 0; s < 100; ++s) {
      const Vec3 xi = detail::random_reference_point(rng);
      for (int i = 0; i < el.size(); ++i) {
        const Vec3 g = el.gradient(i, xi);
        for (int d = 0; d < 3; ++d) {
          Vec3 p = xi, q = xi;
          p[d] += step;
          q[d] -= step;
          worst = std::max(worst, std::abs(g[d] - (el.value(i, p) - el.value(i, q)) / (2 * step)));
        }
      }
    }
  }
  return {"shape gradients vs central differences", worst <= 1e-6, "max difference " + detail::sci(worst)};
}

inline CheckResult check_meshes() {
  double min_vol = 1e300, worst_f = 0.0;
  auto scan = [&](const Mesh& m, const Surface& s) {
    for (int t = 0; t < m.num_tets(); ++t) min_vol = std::min(min_vol, m.volume(t));
    const auto c = classify_boundary(m, s);
    for (int v : c.gamma_vertices) worst_f = std::max(worst_f, std::abs(s.value(m.vertices[v])));
  };
  for (int J : {1, 4, 8}) {
    scan(generate_octant_mesh(cases::tp1_sphere().surface, J), cases::tp1_sphere().surface);
    scan(generate_octant_mesh(cases::tp2_ellipsoid().surface, J), cases::tp2_ellipsoid().surface);
  }
  const Surface torus = cases::tp3_torus().surface;
  for (int I : {2, 4}) scan(generate_torus_sector_mesh(I, torus.major_radius(), torus.minor_radius()), torus);
  return {"mesh validity: positive volumes, boundary vertices on the surface", min_vol > 0 && worst_f <= 1e-12,
          "min volume " + detail::sci(min_vol) + ", max |F| " + detail::sci(worst_f)};
}

inline CheckResult check_modified_basis_reproduction() {
  std::mt19937_64 rng(13);
  double worst = 0.0;
  auto run = [&](const Mesh& m, const Surface& s, int k) {
    const auto c = classify_boundary(m, s);
    const LagrangeSpace sp = build_lagrange_space(m, k);
    const ShiftedNodeTable tab = build_shifted_node_table(m, sp, c, s);
    const ModifiedBasisSet bases = build_modified_bases(m, sp, tab, c);
    const LagrangeElement el(k);
    for (const auto& b : bases.bases) {
      const ScalarField p = detail::random_polynomial(rng, k);
      Vector vals(el.size());
      for (int i = 0; i < el.size(); ++i) vals[i] = p(tab.shifted[sp.tet_nodes[b.tet][i]]);
      const Vector coef = b.C * vals;
      const AffineMap map(m, b.tet);
      for (int r = 0; r < 20; ++r) {
        const Vec3 xi = detail::random_reference_point(rng);
        const double exact = p(map.map(xi));
        worst = std::max(worst, std::abs(el.values(xi).dot(coef) - exact) / std::max(1.0, std::abs(exact)));
      }
    }
  };
  for (int k : {2, 3}) {
    run(generate_octant_mesh(cases::tp1_sphere().surface, 4), cases::tp1_sphere().surface, k);
    run(generate_octant_mesh(cases::tp2_ellipsoid().surface, 4), cases::tp2_ellipsoid().surface, k);
    const Surface torus = cases::tp3_torus().surface;
    run(generate_torus_sector_mesh(2, torus.major_radius(), torus.minor_radius()), torus, k);
  }
  return {"modified basis reproduces P_k at random points", worst <= 1e-9, "max relative error " + detail::sci(worst)};
}

inline CheckResult check_nc_patch_test() {
  std::mt19937_64 rng(14);
  const NCReferenceElement ref = nc_build_reference_basis();
  const Mesh m = generate_octant_mesh(cases::tp1_sphere().surface, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField w = detail::random_polynomial(rng, 2);
    // Element interpolants from each element's own DOFs.
    std::vector<Vector> coef(m.num_tets());
    for (int t = 0; t < m.num_tets(); ++t) coef[t] = ref.G * nc_element_dofs(m, t, w);
    for (int f = 0; f < m.num_faces(); ++f) {
      if (m.is_boundary_face(f)) continue;
      // Functionals of face f and its edges evaluated on both traces.
      std::array<Vector, 2> dofs;
      for (int side = 0; side < 2; ++side) {
        const int t = m.face_tets[f][side];
        const AffineMap map(m, t);
        auto uh = [&](const Vec3& x) { return ref.p2.values(map.inverse(x)).dot(coef[t]); };
        dofs[side].resize(4);
        dofs[side][0] = uh(m.face_centroid(f));
        for (int e = 0; e < 3; ++e) {
          const Vec3& a = m.vertices[m.faces[f][e]];
          const Vec3& b = m.vertices[m.faces[f][(e + 1) % 3]];
          dofs[side][1 + e] = nc_edge_functional(uh(a), uh(0.5 * (a + b)), uh(b));
        }
      }
      worst = std::max(worst, (dofs[0] - dofs[1]).cwiseAbs().maxCoeff());
    }
  }
  return {"nonconforming patch test: functional jumps vanish for global quadratics", worst <= 1e-12,
          "max jump " + detail::sci(worst)};
}

inline std::vector<CheckResult> run_property_suite() {
  return {check_quadrature(),       check_shape_functions(),
          check_gradients(),        check_meshes(),
          check_modified_basis_reproduction(), check_nc_patch_test()};
}

}  // namespace bsfem
