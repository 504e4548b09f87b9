/**
 * @brief Exact-solution cases, error norms over the polyhedral domain and
 * convergence tables.
 */
#pragma once

#include "bsfem/affine_map.hpp"
#include "bsfem/assembly.hpp"
#include "bsfem/mesh_generators.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bsfem {

struct ExactCase {
  std::string name;
  Surface surface = Surface::sphere(Vec3::Zero(), 1.0);
  ScalarField u;
  VectorField grad_u;
  ScalarField f;
  ScalarField g;  // empty for homogeneous data
  bool convex = true;
  std::string parameter = "J";  // J: octant meshes, I: torus sectors
};

namespace cases {

inline constexpr double kEllipsoidA = 0.6, kEllipsoidB = 0.8;
inline constexpr double kTorusMajor = 5.0 / 6.0, kTorusMinor = 1.0 / 6.0;

inline ExactCase quadratic_ellipsoid() {
  const double a = kEllipsoidA, b = kEllipsoidB;
  ExactCase c;
  c.name = "quadratic-ellipsoid";
  c.surface = Surface::ellipsoid(a, b, 1.0);
  c.u = [=](const Vec3& x) { return 1.0 - (x[0] * x[0] / (a * a) + x[1] * x[1] / (b * b) + x[2] * x[2]); };
  c.grad_u = [=](const Vec3& x) { return Vec3(-2 * x[0] / (a * a), -2 * x[1] / (b * b), -2 * x[2]); };
  c.f = [=](const Vec3&) { return 2.0 * (1 / (a * a) + 1 / (b * b) + 1.0); };
  return c;
}

inline ExactCase tp1_sphere() {
  ExactCase c;
  c.name = "tp1-sphere";
  c.surface = Surface::sphere(Vec3::Zero(), 1.0);
  c.u = [](const Vec3& x) {
    const double r2 = x.squaredNorm();
    return r2 - r2 * r2;
  };
  c.grad_u = [](const Vec3& x) { return Vec3((2.0 - 4.0 * x.squaredNorm()) * x); };
  c.f = [](const Vec3& x) { return -6.0 + 20.0 * x.squaredNorm(); };
  return c;
}

inline ExactCase tp2_ellipsoid() {
  const double a = kEllipsoidA, b = kEllipsoidB;
  const double ia2 = 1 / (a * a), ib2 = 1 / (b * b);
  ExactCase c;
  c.name = "tp2-ellipsoid";
  c.surface = Surface::ellipsoid(a, b, 1.0);
  auto A = [=](const Vec3& x) { return 1 - x[0] * x[0] * ia2 - x[1] * x[1] * ib2 - x[2] * x[2]; };
  auto B = [=](const Vec3& x) { return 1 - x[0] * x[0] * ib2 - x[1] * x[1] * ia2 - x[2] * x[2]; };
  auto gA = [=](const Vec3& x) { return Vec3(-2 * x[0] * ia2, -2 * x[1] * ib2, -2 * x[2]); };
  auto gB = [=](const Vec3& x) { return Vec3(-2 * x[0] * ib2, -2 * x[1] * ia2, -2 * x[2]); };
  c.u = [=](const Vec3& x) { return A(x) * B(x); };
  c.grad_u = [=](const Vec3& x) { return Vec3(B(x) * gA(x) + A(x) * gB(x)); };
  c.f = [=](const Vec3& x) {
    const double lap = -2 * (ia2 + ib2 + 1);  // same for both factors
    return -(A(x) * lap + B(x) * lap + 2 * gA(x).dot(gB(x)));
  };
  return c;
}

inline ExactCase tp3_torus() {
  const double rM = kTorusMajor, rm = kTorusMinor;
  ExactCase c;
  c.name = "tp3-torus";
  c.surface = Surface::torus(rM, rm);
  c.convex = false;
  c.parameter = "I";
  c.u = [=](const Vec3& x) {
    const double d = rM - std::hypot(x[0], x[1]);
    return rm * rm - x[2] * x[2] - d * d;
  };
  c.grad_u = [=](const Vec3& x) {
    const double rho = std::hypot(x[0], x[1]);
    const double s = 2 * (rM - rho) / rho;
    return Vec3(s * x[0], s * x[1], -2 * x[2]);
  };
  c.f = [=](const Vec3& x) { return 6.0 - 2 * rM / std::hypot(x[0], x[1]); };
  return c;
}

/// Quadratic solution with non-zero boundary data on the unit ball octant.
inline ExactCase quadratic_sphere_g() {
  ExactCase c;
  c.name = "quadratic-sphere-g";
  c.surface = Surface::sphere(Vec3::Zero(), 1.0);
  c.u = [](const Vec3& x) { return 1 + x[0] * x[0] + 2 * x[1] * x[1] - x[2] * x[2]; };
  c.grad_u = [](const Vec3& x) { return Vec3(2 * x[0], 4 * x[1], -2 * x[2]); };
  c.f = [](const Vec3&) { return -4.0; };
  c.g = c.u;
  return c;
}

}  // namespace cases

inline std::vector<std::string> case_names() {
  return {"quadratic-ellipsoid", "tp1-sphere", "tp2-ellipsoid", "tp3-torus", "quadratic-sphere-g"};
}

inline ExactCase exact_case(const std::string& name) {
  if (name == "quadratic-ellipsoid") return cases::quadratic_ellipsoid();
  if (name == "tp1-sphere") return cases::tp1_sphere();
  if (name == "tp2-ellipsoid") return cases::tp2_ellipsoid();
  if (name == "tp3-torus") return cases::tp3_torus();
  if (name == "quadratic-sphere-g") return cases::quadratic_sphere_g();
  throw Error("unknown case '" + name + "'");
}

inline Mesh mesh_for_case(const ExactCase& c, int param) {
  if (c.surface.kind() == SurfaceKind::torus)
    return generate_torus_sector_mesh(param, c.surface.major_radius(), c.surface.minor_radius());
  return generate_octant_mesh(c.surface, param);
}

struct ErrorReport {
  double h = 0.0;
  double err_h1_broken = 0.0;
  double err_l2 = 0.0;
  double err_nodal_max = 0.0;
};

/// Errors of the piecewise polynomial with per-element Lagrange coefficients
/// `coef` (one column per tet) against u, integrated over the mesh with
/// `quad`; the nodal maximum runs over every element's Lagrangian nodes.
inline ErrorReport error_norms(const Mesh& m, int k, const Matrix& coef, const ScalarField& u,
                               const VectorField& grad_u, const QuadratureRule& quad, double h) {
  const ElementTables tab(k, quad);
  const int n = tab.element.size();
  if (coef.rows() != n || coef.cols() != m.num_tets()) throw Error("coefficient field has the wrong shape");
  ErrorReport r;
  r.h = h;
  double h1 = 0.0, l2 = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) {
    const AffineMap map(m, t);
    const Vector c = coef.col(t);
    for (int q = 0; q < quad.size(); ++q) {
      const Vec3 x = map.map(quad.points[q]);
      const double w = quad.weights[q] * map.det();
      const double e = u(x) - tab.values[q].dot(c);
      const Vec3 gh = map.gradient(tab.grads[q].transpose() * c);
      l2 += w * e * e;
      h1 += w * (grad_u(x) - gh).squaredNorm();
    }
    for (int i = 0; i < n; ++i)
      r.err_nodal_max = std::max(r.err_nodal_max, std::abs(u(map.map(tab.element.node(i))) - c[i]));
  }
  r.err_h1_broken = std::sqrt(h1);
  r.err_l2 = std::sqrt(l2);
  return r;
}

/// Estimated order of convergence between two refinements.
inline double eoc(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0 && e2 > 0 && h1 > 0 && h2 > 0)) throw Error("eoc needs positive errors and mesh sizes");
  if (!(h1 > h2)) throw Error("eoc needs h1 > h2");
  return std::log(e1 / e2) / std::log(h1 / h2);
}

enum class Method { new_method, polyhedral, nonconforming };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::new_method: return "new";
    case Method::polyhedral: return "polyhedral";
    case Method::nonconforming: return "nonconforming";
  }
  return "";
}

inline Method parse_method(const std::string& s) {
  if (s == "new") return Method::new_method;
  if (s == "polyhedral") return Method::polyhedral;
  if (s == "nonconforming") return Method::nonconforming;
  throw Error("unknown method '" + s + "'");
}

struct ConvergenceRow {
  int param = 0;
  int n_dofs = 0;
  ErrorReport err;
  std::optional<double> solve_seconds;
};

struct ConvergenceTable {
  std::string case_name;
  Method method = Method::new_method;
  int k = 2;
  std::vector<ConvergenceRow> rows;

  /// EOC between rows i-1 and i (i >= 1).
  double eoc_h1(std::size_t i) const {
    return eoc(rows[i - 1].err.err_h1_broken, rows[i].err.err_h1_broken, rows[i - 1].err.h, rows[i].err.h);
  }
  double eoc_l2(std::size_t i) const {
    return eoc(rows[i - 1].err.err_l2, rows[i].err.err_l2, rows[i - 1].err.h, rows[i].err.h);
  }
};

inline constexpr const char* kCsvHeader =
    "case,method,k,param,h,n_dofs,err_h1_broken,err_l2,err_nodal_max,eoc_h1,eoc_l2,solve_seconds";

namespace detail {

inline std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// EOC, or empty when undefined (first row or a zero error).
inline std::string format_eoc(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0 && e2 > 0)) return "";
  return format_number("%.4f", eoc(e1, e2, h1, h2));
}

}  // namespace detail

/// CSV rows (without header); solve_seconds is empty when not recorded.
inline std::string csv_rows(const ConvergenceTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    os << t.case_name << ',' << to_string(t.method) << ',' << t.k << ',' << r.param << ','
       << detail::format_number("%.10e", r.err.h) << ',' << r.n_dofs << ','
       << detail::format_number("%.10e", r.err.err_h1_broken) << ','
       << detail::format_number("%.10e", r.err.err_l2) << ','
       << detail::format_number("%.10e", r.err.err_nodal_max) << ',';
    if (i > 0) {
      const auto& p = t.rows[i - 1];
      os << detail::format_eoc(p.err.err_h1_broken, r.err.err_h1_broken, p.err.h, r.err.h) << ','
         << detail::format_eoc(p.err.err_l2, r.err.err_l2, p.err.h, r.err.h);
    } else {
      os << ',';
    }
    os << ',';
    if (r.solve_seconds) os << detail::format_number("%.3f", *r.solve_seconds);
    os << '\n';
  }
  return os.str();
}

inline std::string to_csv(const ConvergenceTable& t) { return std::string(kCsvHeader) + "\n" + csv_rows(t); }

/// Fixed-width table for terminals.
inline std::string format_table(const ConvergenceTable& t) {
  std::ostringstream os;
  os << t.case_name << "  method=" << to_string(t.method) << "  k=" << t.k << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%6s %12s %9s %14s %8s %14s %8s %14s\n", "param", "h", "dofs", "err_h1",
                "eoc", "err_l2", "eoc", "nodal_max");
  os << line;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    std::string e1, e2;
    if (i > 0) {
      const auto& p = t.rows[i - 1];
      e1 = detail::format_eoc(p.err.err_h1_broken, r.err.err_h1_broken, p.err.h, r.err.h);
      e2 = detail::format_eoc(p.err.err_l2, r.err.err_l2, p.err.h, r.err.h);
    }
    std::snprintf(line, sizeof line, "%6d %12.5e %9d %14.6e %8s %14.6e %8s %14.6e\n", r.param, r.err.h, r.n_dofs,
                  r.err.err_h1_broken, e1.c_str(), r.err.err_l2, e2.c_str(), r.err.err_nodal_max);
    os << line;
  }
  return os.str();
}

}  // namespace bsfem
