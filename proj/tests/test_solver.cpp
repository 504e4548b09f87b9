#include "bsfem/mesh_generators.hpp"
#include "bsfem/pipeline.hpp"
#include "bsfem/solver.hpp"

#include <gtest/gtest.h>

using namespace bsfem;

namespace {

// Textbook dense Gaussian elimination with partial pivoting.
std::vector<double> dense_lu_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < n; ++r) {
      const double l = a[r][c] / a[c][c];
      if (l == 0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= l * a[c][k];
      b[r] -= l * b[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Unpreconditioned conjugate gradients, for symmetric positive definite A.
Vector conjugate_gradients(const SparseMatrix& A, const Vector& b) {
  Vector x = Vector::Zero(b.size()), r = b, p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < 20 * b.size() && std::sqrt(rr) > 1e-15 * b.norm(); ++it) {
    const Vector Ap = A * p;
    const double alpha = rr / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    const double rr1 = r.squaredNorm();
    p = r + (rr1 / rr) * p;
    rr = rr1;
  }
  return x;
}

LinearSystem ellipsoid_system(Method method, int J) {
  const ExactCase c = cases::tp2_ellipsoid();
  const Mesh m = generate_octant_mesh(c.surface, J);
  const auto cls = classify_boundary(m, c.surface);
  const LagrangeSpace sp = build_lagrange_space(m, 2);
  const ShiftedNodeTable tab = build_shifted_node_table(m, sp, cls, c.surface);
  const std::vector<double> zero(sp.num_nodes, 0.0);
  if (method == Method::polyhedral) return assemble_polyhedral(m, sp, tab, c.f, zero, fifteen_point_rule());
  const ModifiedBasisSet bases = build_modified_bases(m, sp, tab, cls);
  return assemble_new_method(m, sp, tab, bases, c.f, zero, fifteen_point_rule());
}

SparseMatrix sparse(const Matrix& d) { return d.sparseView(); }

}  // namespace

TEST(Solve, IdentitySystem) {
  SparseMatrix I(3, 3);
  I.setIdentity();
  const Vector e1 = Vector::Unit(3, 0);
  EXPECT_EQ(solve(I, e1).x, e1);
  EXPECT_EQ(solve(I, e1).iterations, 0);
}

TEST(Solve, TwoByTwoUpperTriangular) {
  Matrix A(2, 2);
  A << 2, 1, 0, 1;
  for (SolverMethod m : {SolverMethod::direct, SolverMethod::gmres}) {
    const SolveReport r = solve(sparse(A), Vector::Constant(2, 1.0) + Vector::Unit(2, 0) * 2, 1e-12, m);
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
    EXPECT_NEAR(r.x[1], 1.0, 1e-12);
    EXPECT_LE(r.relative_residual, 1e-12);
  }
}

TEST(Solve, ZeroRightHandSide) {
  Matrix A(2, 2);
  A << 3, 1, 1, 2;
  const SolveReport r = solve(sparse(A), Vector::Zero(2));
  EXPECT_LE((sparse(A) * r.x).norm(), 1e-12);
}

TEST(Solve, ToleranceOutsideRangeIsRejected) {
  SparseMatrix I(2, 2);
  I.setIdentity();
  EXPECT_THROW(solve(I, Vector::Ones(2), 0.0), Error);
  EXPECT_THROW(solve(I, Vector::Ones(2), 1e-5), Error);
  EXPECT_NO_THROW(solve(I, Vector::Ones(2), 1e-6));
}

TEST(Solve, SingularMatrixReportsSolverFailure) {
  Matrix A(2, 2);
  A << 1, 1, 1, 1;
  try {
    solve(sparse(A), Vector::Unit(2, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("solver failure", 0), 0u) << e.what();
    EXPECT_NE(std::string(e.what()).find("relative residual"), std::string::npos);
  }
}

TEST(Solve, DimensionMismatchIsAnError) {
  SparseMatrix I(2, 2);
  I.setIdentity();
  EXPECT_THROW(solve(I, Vector::Ones(3)), Error);
}

TEST(Solve, MethodNames) {
  EXPECT_EQ(parse_solver_method("direct"), SolverMethod::direct);
  EXPECT_EQ(parse_solver_method("gmres"), SolverMethod::gmres);
  EXPECT_THROW(parse_solver_method("cg"), Error);
}

TEST(Solve, NewMethodSystemMatchesDenseLuOracle) {
  const LinearSystem sys = ellipsoid_system(Method::new_method, 4);
  const Matrix A(sys.A);
  std::vector<std::vector<double>> a(A.rows(), std::vector<double>(A.cols()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) a[i][j] = A(i, j);
  const std::vector<double> oracle = dense_lu_solve(a, std::vector<double>(sys.rhs.data(), sys.rhs.data() + sys.size()));
  for (SolverMethod m : {SolverMethod::direct, SolverMethod::gmres}) {
    const SolveReport r = solve(sys, 1e-12, m);
    EXPECT_LE(r.relative_residual, 1e-12);
    const Vector o = Eigen::Map<const Vector>(oracle.data(), sys.size());
    EXPECT_LE((r.x - o).norm(), 1e-9 * o.norm()) << to_string(m);
  }
}

TEST(Solve, BaselineSystemMatchesConjugateGradients) {
  const LinearSystem sys = ellipsoid_system(Method::polyhedral, 8);
  ASSERT_LE(sys.size(), 5000);
  const SolveReport r = solve(sys);
  const Vector o = conjugate_gradients(sys.A, sys.rhs);
  EXPECT_LE((r.x - o).norm(), 1e-9 * o.norm());
}

TEST(Solve, DeterministicRepeat) {
  const LinearSystem sys = ellipsoid_system(Method::new_method, 4);
  EXPECT_EQ(solve(sys).x, solve(sys).x);
}

TEST(Solve, DimensionGrowsCubically) {
  const int n4 = ellipsoid_system(Method::new_method, 4).size();
  const int n8 = ellipsoid_system(Method::new_method, 8).size();
  const int n16 = ellipsoid_system(Method::new_method, 16).size();
  EXPECT_GT(double(n8) / n4, 5.0);
  EXPECT_LT(double(n8) / n4, 9.0);
  EXPECT_GT(double(n16) / n8, 6.0);
  EXPECT_LT(double(n16) / n8, 9.0);
}
