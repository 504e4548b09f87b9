/**
 * @brief Analytic curved boundaries and the line constructions that place
 * shifted boundary nodes on them.
 *
 * Every surface is the zero set of an implicit function F with F < 0 inside
 * the domain and F > 0 outside.
 */
#pragma once

#include "bsfem/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bsfem {

enum class SurfaceKind { sphere, ellipsoid, torus, plane };

class Surface {
 public:
  static Surface sphere(const Vec3& center, double radius) {
    if (!(radius > 0)) throw Error("sphere radius must be positive");
    Surface s(SurfaceKind::sphere);
    s.center_ = center;
    s.p_ = {radius, radius, radius};
    return s;
  }

  /// Ellipsoid centred at the origin with semiaxes a, b, c along x, y, z.
  static Surface ellipsoid(double a, double b, double c) {
    if (!(a > 0 && b > 0 && c > 0)) throw Error("ellipsoid semiaxes must be positive");
    Surface s(SurfaceKind::ellipsoid);
    s.p_ = {a, b, c};
    return s;
  }

  /// Torus with symmetry axis z, centred at the origin.
  static Surface torus(double major_radius, double minor_radius) {
    if (!(minor_radius > 0 && minor_radius < major_radius))
      throw Error("torus radii must satisfy 0 < r_m < r_M");
    Surface s(SurfaceKind::torus);
    s.p_ = {major_radius, minor_radius, 0.0};
    return s;
  }

  /// Half-space {x : n.x <= offset}. Flat boundaries reduce the shifted
  /// construction to the identity, which makes this kind useful for
  /// verifying that the method collapses onto standard Galerkin.
  static Surface plane(const Vec3& normal, double offset) {
    const double len = normal.norm();
    if (!(len > 0)) throw Error("plane normal must be nonzero");
    Surface s(SurfaceKind::plane);
    s.center_ = normal / len;
    s.p_ = {offset / len, 0.0, 0.0};
    return s;
  }

  SurfaceKind kind() const { return kind_; }
  const Vec3& center() const { return center_; }
  double radius() const { return p_[0]; }
  std::array<double, 3> semiaxes() const { return p_; }
  double major_radius() const { return p_[0]; }
  double minor_radius() const { return p_[1]; }
  const Vec3& plane_normal() const { return center_; }
  double plane_offset() const { return p_[0]; }

  std::string name() const {
    switch (kind_) {
      case SurfaceKind::sphere: return "sphere";
      case SurfaceKind::ellipsoid: return "ellipsoid";
      case SurfaceKind::torus: return "torus";
      case SurfaceKind::plane: return "plane";
    }
    return "unknown";
  }

  double value(const Vec3& x) const {
    switch (kind_) {
      case SurfaceKind::sphere: return (x - center_).squaredNorm() - p_[0] * p_[0];
      case SurfaceKind::ellipsoid: {
        const double u = x[0] / p_[0], v = x[1] / p_[1], w = x[2] / p_[2];
        return u * u + v * v + w * w - 1.0;
      }
      case SurfaceKind::torus: {
        const double d = p_[0] - std::hypot(x[0], x[1]);
        return d * d + x[2] * x[2] - p_[1] * p_[1];
      }
      case SurfaceKind::plane: return center_.dot(x) - p_[0];
    }
    return 0.0;
  }

  Vec3 gradient(const Vec3& x) const {
    switch (kind_) {
      case SurfaceKind::sphere: return 2.0 * (x - center_);
      case SurfaceKind::ellipsoid:
        return {2.0 * x[0] / (p_[0] * p_[0]), 2.0 * x[1] / (p_[1] * p_[1]),
                2.0 * x[2] / (p_[2] * p_[2])};
      case SurfaceKind::torus: {
        const double rho = std::hypot(x[0], x[1]);
        // on the axis the radial derivative has no direction; use its magnitude along x
        const double cx = rho > 0 ? x[0] / rho : 1.0;
        const double cy = rho > 0 ? x[1] / rho : 0.0;
        const double dr = -2.0 * (p_[0] - rho);
        return {dr * cx, dr * cy, 2.0 * x[2]};
      }
      case SurfaceKind::plane: return center_;
    }
    return Vec3::Zero();
  }

  /// Overall size of the surface, used to scale tolerances.
  double characteristic_length() const {
    switch (kind_) {
      case SurfaceKind::sphere: return p_[0];
      case SurfaceKind::ellipsoid: return std::max({p_[0], p_[1], p_[2]});
      case SurfaceKind::torus: return p_[0] + p_[1];
      case SurfaceKind::plane: return 1.0;
    }
    return 1.0;
  }

  /// tol_surface: points whose first-order distance estimate |F|/|grad F|
  /// is below this are considered to lie on the surface.
  double tolerance() const { return 1e-9 * characteristic_length(); }

  double distance_estimate(const Vec3& x) const {
    const double f = value(x);
    if (f == 0.0) return 0.0;
    const double g = gradient(x).norm();
    return g > 0 ? std::abs(f) / g : std::numeric_limits<double>::infinity();
  }

  bool contains_point(const Vec3& x) const { return distance_estimate(x) <= tolerance(); }

 private:
  explicit Surface(SurfaceKind k) : kind_(k), center_(Vec3::Zero()) {}

  SurfaceKind kind_;
  Vec3 center_;
  std::array<double, 3> p_{};
};

struct Line3 {
  Vec3 origin;
  Vec3 direction;  // unit length

  static Line3 through(const Vec3& origin, const Vec3& direction) {
    const double len = direction.norm();
    if (!(len > 0)) throw Error("line direction must be nonzero");
    return {origin, direction / len};
  }

  Vec3 at(double t) const { return origin + t * direction; }
};

inline double implicit_value(const Surface& s, const Vec3& p) { return s.value(p); }

inline Vec3 outward_normal(const Surface& s, const Vec3& p) {
  if (s.distance_estimate(p) > s.tolerance()) throw Error("point is not on the surface");
  const Vec3 g = s.gradient(p);
  const double n = g.norm();
  if (!(n > 0)) throw Error("degenerate normal");
  return g / n;
}

namespace detail {

// Real roots of F(origin + t d) = 0 for the quadric and plane kinds.
inline std::vector<double> quadric_line_roots(const Surface& s, const Line3& line) {
  const Vec3& o = line.origin;
  const Vec3& d = line.direction;
  double A = 0, B = 0, C = s.value(o);
  if (s.kind() == SurfaceKind::plane) {
    const double nd = s.plane_normal().dot(d);
    if (nd == 0.0) return {};
    return {-C / nd};
  }
  if (s.kind() == SurfaceKind::sphere) {
    const Vec3 oc = o - s.center();
    A = d.squaredNorm();
    B = 2.0 * oc.dot(d);
  } else {
    const auto ax = s.semiaxes();
    for (int i = 0; i < 3; ++i) {
      const double a2 = ax[i] * ax[i];
      A += d[i] * d[i] / a2;
      B += 2.0 * o[i] * d[i] / a2;
    }
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0) return {};
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  std::vector<double> roots;
  if (q != 0.0) {
    roots.push_back(q / A);
    roots.push_back(C / q);
  } else {
    roots.push_back(0.0);
  }
  return roots;
}

// Bisection on a sign-change bracket followed by one guarded Newton step.
inline double refine_root(const Surface& s, const Line3& line, double a, double b) {
  auto f = [&](double t) { return s.value(line.at(t)); };
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double t = 0.5 * (a + b);
  const double df = s.gradient(line.at(t)).dot(line.direction);
  if (df != 0.0) {
    const double tn = t - f(t) / df;
    if (std::abs(f(tn)) < std::abs(f(t))) t = tn;
  }
  return t;
}

inline bool better_root(double cand, double best) {
  const double ac = std::abs(cand), ab = std::abs(best);
  if (ac < ab) return true;
  return ac == ab && cand > best;  // ties go to the positive direction
}

}  // namespace detail

/// Intersection of the line with the surface nearest to the line origin,
/// searching both directions within |t| <= 4 h_ref.
inline Vec3 nearest_line_intersection(const Surface& s, const Line3& line, double h_ref) {
  const double bracket = 4.0 * h_ref;
  if (s.kind() != SurfaceKind::torus) {
    std::optional<double> best;
    for (double t : detail::quadric_line_roots(s, line)) {
      if (std::abs(t) > bracket) continue;
      if (!best || detail::better_root(t, *best)) best = t;
    }
    if (!best) throw Error("no boundary intersection");
    return line.at(*best);
  }

  const double f0 = s.value(line.origin);
  if (f0 == 0.0) return line.origin;
  const int steps = 256;
  const double dt = bracket / steps;
  double f_pos = f0, f_neg = f0;
  for (int i = 1; i <= steps; ++i) {
    const double t0 = (i - 1) * dt, t1 = i * dt;
    const double fp = s.value(line.at(t1));
    const double fn = s.value(line.at(-t1));
    std::optional<double> best;
    if (fp == 0.0 || (fp < 0) != (f_pos < 0))
      best = fp == 0.0 ? t1 : detail::refine_root(s, line, t0, t1);
    if (fn == 0.0 || (fn < 0) != (f_neg < 0)) {
      const double tn = fn == 0.0 ? -t1 : detail::refine_root(s, line, -t0, -t1);
      if (!best || detail::better_root(tn, *best)) best = tn;
    }
    if (best) return line.at(*best);
    f_pos = fp;
    f_neg = fn;
  }
  throw Error("no boundary intersection");
}

/// Point of the surface closest to p.
inline Vec3 closest_point_projection(const Surface& s, const Vec3& p) {
  switch (s.kind()) {
    case SurfaceKind::plane: return p - s.value(p) * s.plane_normal();
    case SurfaceKind::sphere: {
      const Vec3 v = p - s.center();
      const double n = v.norm();
      if (!(n > 0)) throw Error("closest point is not unique");
      return s.center() + s.radius() * v / n;
    }
    case SurfaceKind::torus: {
      const double rho = std::hypot(p[0], p[1]);
      if (!(rho > 0)) throw Error("closest point is not unique");
      const Vec3 ring(s.major_radius() * p[0] / rho, s.major_radius() * p[1] / rho, 0.0);
      const Vec3 v = p - ring;
      const double n = v.norm();
      if (!(n > 0)) throw Error("closest point is not unique");
      return ring + s.minor_radius() * v / n;
    }
    case SurfaceKind::ellipsoid: break;
  }

  // Ellipsoid: q_i = p_i a_i^2 / (a_i^2 + t) with phi(t) = F(q(t)) = 0,
  // phi strictly decreasing on (-min a_i^2, inf).
  const auto ax = s.semiaxes();
  auto phi = [&](double t, double* dphi) {
    double v = -1.0, dv = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a2 = ax[i] * ax[i];
      const double r = ax[i] * p[i] / (a2 + t);
      v += r * r;
      dv += -2.0 * r * r / (a2 + t);
    }
    if (dphi) *dphi = dv;
    return v;
  };
  const double amin2 = std::min({ax[0] * ax[0], ax[1] * ax[1], ax[2] * ax[2]});
  double lo = -amin2, hi = 0.0;
  if (phi(0.0, nullptr) > 0) {
    hi = amin2;
    int guard = 0;
    while (phi(hi, nullptr) > 0) {
      hi *= 2.0;
      if (++guard > 200) throw Error("closest point projection did not converge");
    }
  }
  double t = 0.0;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double d = 0.0;
    const double v = phi(t, &d);
    if (v == 0.0) {
      converged = true;
      break;
    }
    if (v > 0) lo = t; else hi = t;
    double tn = d != 0.0 ? t - v / d : 0.5 * (lo + hi);
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    const bool small = std::abs(tn - t) <= 1e-15 * (amin2 + std::abs(t));
    t = tn;
    if (small) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error("closest point projection did not converge");
  Vec3 q;
  for (int i = 0; i < 3; ++i) q[i] = p[i] * ax[i] * ax[i] / (ax[i] * ax[i] + t);
  return q;
}

}  // namespace bsfem
