/**
 * @brief Symmetric quadrature rules on the reference tetrahedron (volume 1/6).
 */
#pragma once

#include "bsfem/common.hpp"

#include <vector>

namespace bsfem {

struct QuadratureRule {
  std::vector<Vec3> points;  // reference coordinates
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

inline void add_orbit_31(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d lam = Eigen::Vector4d::Constant(a);
    lam[i] = b;
    q.points.emplace_back(lam[1], lam[2], lam[3]);
    q.weights.push_back(w);
  }
}

inline void add_orbit_22(QuadratureRule& q, double a, double w) {
  const double b = 0.5 - a;
  for (const auto& e : kTetEdges) {
    Eigen::Vector4d lam = Eigen::Vector4d::Constant(b);
    lam[e[0]] = a;
    lam[e[1]] = a;
    q.points.emplace_back(lam[1], lam[2], lam[3]);
    q.weights.push_back(w);
  }
}

}  // namespace detail

/// 4-point rule, exact for degree 2.
inline QuadratureRule four_point_rule() {
  QuadratureRule q;
  q.degree = 2;
  detail::add_orbit_31(q, 0.13819660112501051518, 1.0 / 24.0);
  return q;
}

/// 15-point rule with positive weights, exact for degree 5. Orbit
/// parameters (7 -+ sqrt 15)/34 and (10 - 2 sqrt 15)/40.
inline QuadratureRule fifteen_point_rule() {
  QuadratureRule q;
  q.degree = 5;
  q.points.emplace_back(0.25, 0.25, 0.25);
  q.weights.push_back(0.019753086419753086420);  // 16/810
  detail::add_orbit_31(q, 0.091971078052723032789, 0.011989513963169770002);
  detail::add_orbit_31(q, 0.31979362782962990839, 0.011511367871045397547);
  detail::add_orbit_22(q, 0.056350832689629155741, 0.0088183421516754850088);  // 10/1134
  return q;
}

namespace detail {

// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-t)^alpha, via the
// Golub-Welsch eigenproblem of the monic recurrence.
inline void gauss_jacobi01(int n, double alpha, std::vector<double>& x, std::vector<double>& w) {
  Matrix J = Matrix::Zero(n, n);
  const double ab = alpha;  // beta = 0
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    J(k, k) = k == 0 ? -alpha / (ab + 2) : -(alpha * alpha) / (s * (s + 2));
    if (k + 1 < n) {
      const double kk = k + 1, s1 = 2 * kk + ab;
      const double b = 4 * kk * (kk + alpha) * kk * (kk + ab) / (s1 * s1 * (s1 + 1) * (s1 - 1));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(J);
  const double mu0 = std::pow(2.0, alpha + 1) / (alpha + 1);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    x[i] = 0.5 * (eig.eigenvalues()[i] + 1);
    w[i] = mu0 * v0 * v0 / std::pow(2.0, alpha + 1);
  }
}

}  // namespace detail

/// Conical product rule with n points per direction (n^3 points, exact for
/// degree 2n - 1). Collapsed map x = u, y = (1-u)v, z = (1-u)(1-v)s.
inline QuadratureRule conical_product_rule(int n) {
  if (n < 1) throw Error("conical product rule needs n >= 1");
  std::vector<double> xu, wu, xv, wv, xs, ws;
  detail::gauss_jacobi01(n, 2.0, xu, wu);
  detail::gauss_jacobi01(n, 1.0, xv, wv);
  detail::gauss_jacobi01(n, 0.0, xs, ws);
  QuadratureRule q;
  q.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        q.points.emplace_back(xu[i], (1 - xu[i]) * xv[j], (1 - xu[i]) * (1 - xv[j]) * xs[k]);
        q.weights.push_back(wu[i] * wv[j] * ws[k]);
      }
  return q;
}

/// Cheapest available rule exact to the requested degree.
inline QuadratureRule quadrature_rule(int min_degree) {
  if (min_degree < 0 || min_degree > 41) throw Error("no quadrature rule of degree " + std::to_string(min_degree));
  if (min_degree <= 2) return four_point_rule();
  if (min_degree <= 5) return fifteen_point_rule();
  return conical_product_rule((min_degree + 2) / 2);
}

}  // namespace bsfem
