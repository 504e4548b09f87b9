#pragma once

#include "bsfem/assembly.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <sstream>
#include <string>

namespace bsfem {

enum class SolverMethod { direct, gmres };

inline std::string to_string(SolverMethod m) { return m == SolverMethod::direct ? "sparse-lu" : "gmres-ilut"; }

inline SolverMethod parse_solver_method(const std::string& s) {
  if (s == "direct" || s == "sparse-lu") return SolverMethod::direct;
  if (s == "gmres" || s == "gmres-ilut") return SolverMethod::gmres;
  throw Error("unknown solver '" + s + "'");
}

struct SolveReport {
  Vector x;
  double relative_residual = 0.0;
  int iterations = 0;  // refinement steps (direct) or Krylov iterations
  std::string method;
};

namespace detail {

// ||Ax - b|| / ||b||, or ||Ax|| when b = 0.
inline double relative_residual(const SparseMatrix& A, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double r = (A * x - b).norm();
  return nb > 0 ? r / nb : r;
}

[[noreturn]] inline void solver_failure(const std::string& why, double residual) {
  std::ostringstream os;
  os << "solver failure: " << why << " (relative residual " << residual << ")";
  throw Error(os.str());
}

}  // namespace detail

/// Solves A x = b. The direct path is a sparse LU with partial pivoting and
/// up to three steps of iterative refinement; the Krylov path is restarted
/// GMRES preconditioned by an incomplete LU.
inline SolveReport solve(const SparseMatrix& A, const Vector& b, double tol = 1e-12,
                         SolverMethod method = SolverMethod::direct) {
  if (!(tol > 0 && tol <= 1e-6)) throw Error("solver tolerance must lie in (0, 1e-6]");
  if (A.rows() != A.cols() || A.rows() != b.size()) throw Error("solver failure: dimension mismatch");
  SolveReport rep;
  rep.method = to_string(method);
  if (b.size() == 0) {
    rep.x = Vector();
    return rep;
  }

  if (method == SolverMethod::direct) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) detail::solver_failure("singular matrix in factorization", NAN);
    rep.x = lu.solve(b);
    rep.relative_residual = detail::relative_residual(A, rep.x, b);
    for (int step = 0; step < 3 && rep.relative_residual > 0.01 * tol; ++step) {
      const Vector r = b - A * rep.x;
      const Vector x1 = rep.x + lu.solve(r);
      const double res1 = detail::relative_residual(A, x1, b);
      if (!(res1 < rep.relative_residual)) break;
      rep.x = x1;
      rep.relative_residual = res1;
      rep.iterations = step + 1;
    }
  } else {
    Eigen::GMRES<SparseMatrix, Eigen::IncompleteLUT<double>> gmres;
    gmres.set_restart(60);
    gmres.setTolerance(tol * 0.1);
    gmres.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A.rows()));
    gmres.compute(A);
    if (gmres.info() != Eigen::Success) detail::solver_failure("preconditioner breakdown", NAN);
    rep.x = gmres.solve(b);
    rep.iterations = static_cast<int>(gmres.iterations());
    rep.relative_residual = detail::relative_residual(A, rep.x, b);
  }
  if (!std::isfinite(rep.relative_residual) || rep.relative_residual > tol)
    detail::solver_failure("residual above tolerance", rep.relative_residual);
  return rep;
}

inline SolveReport solve(const LinearSystem& sys, double tol = 1e-12, SolverMethod method = SolverMethod::direct) {
  return solve(sys.A, sys.rhs, tol, method);
}

}  // namespace bsfem
