/**
 * @brief End-to-end runs: mesh, classify, assemble, solve, measure.
 */
#pragma once

#include "bsfem/analysis.hpp"
#include "bsfem/nonconforming.hpp"
#include "bsfem/solver.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace bsfem {

struct RunOptions {
  double tol = 1e-12;
  SolverMethod solver = SolverMethod::direct;
  bool parallel = false;
  std::string dump_matrix;  // MatrixMarket path, empty to skip
};

struct CaseResult {
  Mesh mesh;
  BoundaryClassification classification;
  int k = 2;
  int n_dofs = 0;
  ErrorReport errors;
  SolveReport solve;
  Matrix coefficients;  // per-element Lagrange coefficients of u_h
  double shift_deviation = 0.0;
  double seconds = 0.0;  // wall time from mesh generation to error measurement
  std::vector<std::string> warnings;

  /// u_h at the mesh vertices (taken from the first incident element).
  std::vector<double> vertex_values() const {
    std::vector<double> v(mesh.num_vertices(), 0.0);
    std::vector<char> seen(mesh.num_vertices(), 0);
    for (int t = 0; t < mesh.num_tets(); ++t)
      for (int i = 0; i < 4; ++i) {
        const int id = mesh.tets[t][i];
        if (seen[id]) continue;
        seen[id] = 1;
        v[id] = coefficients(i, t);
      }
    return v;
  }
};

inline void validate_combination(const ExactCase& c, Method method, int k) {
  if (k != 2 && k != 3) throw Error("unsupported polynomial degree (k must be 2 or 3)");
  if (method == Method::nonconforming) {
    if (k != 2) throw Error("the nonconforming element exists only for k = 2");
    if (c.g) throw Error("the nonconforming element supports only homogeneous Dirichlet data");
  }
}

// Error norms use a finer rule than assembly: |u - u_h|^2 of a quartic u is degree 8.
inline constexpr int kErrorQuadratureDegree = 8;

inline CaseResult solve_case(const ExactCase& c, Method method, int k, int param, const RunOptions& opt = {}) {
  validate_combination(c, method, k);
  const auto start = std::chrono::steady_clock::now();
  CaseResult res;
  res.k = k;
  res.mesh = mesh_for_case(c, param);
  const Mesh& m = res.mesh;
  res.classification = classify_boundary(m, c.surface);
  const auto& cls = res.classification;
  if (method == Method::polyhedral) {
    if (!cls.violations.empty())
      res.warnings.push_back(std::to_string(cls.violations.size()) +
                             " tets violate the one-face-or-one-edge boundary assumption");
  } else {
    require_shiftable(cls);
  }

  const QuadratureRule quad = fifteen_point_rule();
  const AssemblyOptions aopt{opt.parallel, 0};
  LinearSystem sys;
  if (method == Method::nonconforming) {
    const NCReferenceElement ref = nc_build_reference_basis();
    const NCSpace space = build_nc_space(m, cls, c.surface);
    const NCModifiedBasisSet bases = build_nc_modified_bases(m, cls, space, ref);
    res.shift_deviation = nc_max_shift_deviation(bases, ref);
    sys = nc_assemble(m, space, bases, ref, c.f, quad, aopt);
    if (!opt.dump_matrix.empty()) write_matrix_market(sys, opt.dump_matrix);
    res.solve = solve(sys, opt.tol, opt.solver);
    res.coefficients = nc_element_coefficients(m, space, bases, ref, sys.dofs, res.solve.x);
  } else {
    const LagrangeSpace space = build_lagrange_space(m, k);
    const ShiftedNodeTable table = build_shifted_node_table(m, space, cls, c.surface);
    if (method == Method::new_method) {
      const ModifiedBasisSet bases = build_modified_bases(m, space, table, cls);
      res.shift_deviation = max_shift_deviation(bases);
      const auto dvals = dirichlet_values(c.g, table);
      sys = assemble_new_method(m, space, table, bases, c.f, dvals, quad, aopt);
      if (!opt.dump_matrix.empty()) write_matrix_market(sys, opt.dump_matrix);
      res.solve = solve(sys, opt.tol, opt.solver);
      res.coefficients = lagrange_element_coefficients(m, space, sys.dofs, &bases, res.solve.x, dvals);
    } else {
      const auto dvals = polyhedral_dirichlet_values(c.g, table, c.surface);
      sys = assemble_polyhedral(m, space, table, c.f, dvals, quad, aopt);
      if (!opt.dump_matrix.empty()) write_matrix_market(sys, opt.dump_matrix);
      res.solve = solve(sys, opt.tol, opt.solver);
      res.coefficients = lagrange_element_coefficients(m, space, sys.dofs, nullptr, res.solve.x, dvals);
    }
  }
  res.n_dofs = sys.size();
  res.errors =
      error_norms(m, k, res.coefficients, c.u, c.grad_u, quadrature_rule(kErrorQuadratureDegree), m.reference_h);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

/// One solve per refinement parameter. With `record_time` false the
/// timing column stays empty so that repeated runs give identical output.
inline ConvergenceTable run_convergence(const ExactCase& c, Method method, int k, const std::vector<int>& params,
                                        const RunOptions& opt = {}, bool record_time = true) {
  if (params.size() < 2) throw Error("a convergence study needs at least two refinement values");
  ConvergenceTable table;
  table.case_name = c.name;
  table.method = method;
  table.k = k;
  for (int p : params) {
    const CaseResult r = solve_case(c, method, k, p, opt);
    ConvergenceRow row;
    row.param = p;
    row.n_dofs = r.n_dofs;
    row.err = r.errors;
    if (record_time) row.solve_seconds = r.seconds;
    if (!table.rows.empty() && !(row.err.h < table.rows.back().err.h))
      throw Error("refinement values must give strictly decreasing h");
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bsfem
