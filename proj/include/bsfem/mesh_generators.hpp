/**
 * @brief Structured tetrahedral mesh families: boxes, ball/ellipsoid octants
 * and torus sectors.
 */
#pragma once

#include "bsfem/geometry.hpp"
#include "bsfem/mesh.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace bsfem {

namespace detail {

// The six Kuhn simplices of the unit cube: vertex path 0 -> e_p0 -> e_p0+e_p1 -> (1,1,1).
inline constexpr std::array<std::array<int, 3>, 6> kKuhnPermutations = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

inline std::array<std::array<int, 3>, 4> kuhn_simplex(const std::array<int, 3>& corner, int perm) {
  std::array<std::array<int, 3>, 4> v;
  v[0] = corner;
  for (int s = 0; s < 3; ++s) {
    v[s + 1] = v[s];
    v[s + 1][kKuhnPermutations[perm][s]] += 1;
  }
  return v;
}

}  // namespace detail

/// Box [lo, hi] split into nx*ny*nz cells of six tets each; every tet
/// contains its cell's diagonal parallel to (hi - lo).
inline Mesh generate_box_tet_mesh(int nx, int ny, int nz, const Vec3& lo = Vec3::Zero(),
                                  const Vec3& hi = Vec3::Ones()) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error("box subdivision counts must be >= 1");
  const std::array<int, 3> n = {nx, ny, nz};
  auto id = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  std::vector<Vec3> verts;
  verts.reserve((nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Vec3 r(double(i) / n[0], double(j) / n[1], double(k) / n[2]);
        verts.push_back(lo + r.cwiseProduct(hi - lo));
      }
  std::vector<std::array<int, 4>> tets;
  tets.reserve(6 * nx * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (int p = 0; p < 6; ++p) {
          const auto s = detail::kuhn_simplex({i, j, k}, p);
          tets.push_back({id(s[0][0], s[0][1], s[0][2]), id(s[1][0], s[1][1], s[1][2]),
                          id(s[2][0], s[2][1], s[2][2]), id(s[3][0], s[3][1], s[3][2])});
        }
  std::vector<Plane> planes;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e[d] = 1.0;
    planes.push_back({e, lo[d]});
    planes.push_back({e, hi[d]});
  }
  Mesh m = make_mesh(std::move(verts), std::move(tets), "box", std::move(planes));
  m.reference_h = 1.0 / std::max({nx, ny, nz});
  return m;
}

/// Octant {x, y, z >= 0} of a ball or ellipsoid.
///
/// The corner tetrahedron (O, e1, e2, e3) is refined uniformly into J^3
/// tets (Freudenthal subdivision); lattice points on the plane shell
/// x + y + z = j/J are then moved radially to the sphere of radius j/J,
/// and the result is scaled by the semiaxes. All vertices of the outer
/// shell land exactly on the surface.
inline Mesh generate_octant_mesh(const Surface& surface, int J) {
  if (J < 1) throw Error("octant mesh parameter J must be >= 1");
  Vec3 scale, shift = Vec3::Zero();
  if (surface.kind() == SurfaceKind::sphere) {
    scale = Vec3::Constant(surface.radius());
    shift = surface.center();
  } else if (surface.kind() == SurfaceKind::ellipsoid) {
    const auto ax = surface.semiaxes();
    scale = {ax[0], ax[1], ax[2]};
  } else {
    throw Error("octant meshes require a sphere or an ellipsoid");
  }

  std::vector<int> index((J + 1) * (J + 1) * (J + 1), -1);
  auto slot = [&](int i, int j, int k) { return i + (J + 1) * (j + (J + 1) * k); };
  std::vector<Vec3> verts;
  for (int k = 0; k <= J; ++k)
    for (int j = 0; j <= J - k; ++j)
      for (int i = 0; i <= J - j - k; ++i) {
        index[slot(i, j, k)] = static_cast<int>(verts.size());
        Vec3 p = Vec3::Zero();
        const int shell = i + j + k;
        if (shell > 0) {
          const Vec3 dir = Vec3(i, j, k).normalized();
          p = (double(shell) / J) * dir;
        }
        verts.push_back(shift + p.cwiseProduct(scale));
      }

  // Freudenthal refinement: Kuhn triangulation in u = (x+y+z, y+z, z) restricted
  // to u1 >= u2 >= u3, mapped back by x = u1-u2, y = u2-u3, z = u3.
  std::vector<std::array<int, 4>> tets;
  tets.reserve(J * J * J);
  for (int c3 = 0; c3 < J; ++c3)
    for (int c2 = 0; c2 < J; ++c2)
      for (int c1 = 0; c1 < J; ++c1)
        for (int p = 0; p < 6; ++p) {
          const auto s = detail::kuhn_simplex({c1, c2, c3}, p);
          bool inside = true;
          for (const auto& u : s) inside = inside && u[0] >= u[1] && u[1] >= u[2];
          if (!inside) continue;
          std::array<int, 4> tet;
          for (int q = 0; q < 4; ++q) {
            const auto& u = s[q];
            tet[q] = index[slot(u[0] - u[1], u[1] - u[2], u[2])];
          }
          tets.push_back(tet);
        }

  std::vector<Plane> planes;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e[d] = 1.0;
    planes.push_back({e, shift[d]});
  }
  Mesh m = make_mesh(std::move(verts), std::move(tets), surface.name() + "-octant",
                     std::move(planes));
  m.reference_h = 1.0 / J;
  return m;
}

/// Concentric max-norm map of the unit square [0,1]^2 onto the quarter
/// unit disk; the rings max(y, z) = const become circles.
inline std::array<double, 2> square_to_quarter_disk(double y, double z) {
  const double m = std::max(y, z);
  if (m <= 0.0) return {0.0, 0.0};
  const double quarter = std::numbers::pi / 4;
  const double phi = y >= z ? quarter * (z / y) : 2 * quarter - quarter * (y / z);
  return {m * std::cos(phi), m * std::sin(phi)};
}

/// Sector {z >= 0, 0 <= atan(y/x) <= pi/4} of the torus with axis z, with
/// 6 I^3 tets. Built from the (2I, I/2, I/2)-box mesh of the unit cube,
/// whose sections are mapped onto quarter disks, mirrored into half disks
/// and finally wrapped around the axis.
inline Mesh generate_torus_sector_mesh(int I, double major_radius, double minor_radius) {
  if (I < 2 || I % 2 != 0) throw Error("torus mesh parameter I must be even and >= 2");
  if (!(minor_radius > 0 && minor_radius < major_radius))
    throw Error("torus radii must satisfy 0 < r_m < r_M");
  const int nx = 2 * I, n = I / 2;
  auto id = [&](int i, int jy, int kz) { return i + (nx + 1) * ((jy + n) + (2 * n + 1) * kz); };

  std::vector<Vec3> verts((nx + 1) * (2 * n + 1) * (n + 1));
  for (int kz = 0; kz <= n; ++kz)
    for (int jy = -n; jy <= n; ++jy)
      for (int i = 0; i <= nx; ++i) {
        auto [yd, zd] = square_to_quarter_disk(double(std::abs(jy)) / n, double(kz) / n);
        if (jy < 0) yd = -yd;
        const double rho = major_radius + yd * minor_radius;
        const double theta = (double(i) / nx) * std::numbers::pi / 4;
        double x = rho * std::cos(theta), y = rho * std::sin(theta);
        if (i == 0) y = 0.0;
        verts[id(i, jy, kz)] = Vec3(x, y, zd * minor_radius);
      }

  std::vector<std::array<int, 4>> tets;
  tets.reserve(6 * I * I * I);
  for (int side : {1, -1})
    for (int ck = 0; ck < n; ++ck)
      for (int cj = 0; cj < n; ++cj)
        for (int ci = 0; ci < nx; ++ci)
          for (int p = 0; p < 6; ++p) {
            const auto s = detail::kuhn_simplex({ci, cj, ck}, p);
            std::array<int, 4> tet;
            for (int q = 0; q < 4; ++q) tet[q] = id(s[q][0], side * s[q][1], s[q][2]);
            tets.push_back(tet);
          }

  const double c = std::cos(std::numbers::pi / 4), sn = std::sin(std::numbers::pi / 4);
  std::vector<Plane> planes = {{Vec3(0, 0, 1), 0.0}, {Vec3(0, 1, 0), 0.0}, {Vec3(sn, -c, 0), 0.0}};
  Mesh m = make_mesh(std::move(verts), std::move(tets), "torus-sector", std::move(planes));
  m.reference_h = std::numbers::pi / (8.0 * I);
  return m;
}

}  // namespace bsfem
