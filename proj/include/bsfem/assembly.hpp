/**
 * @brief Petrov-Galerkin assembly of the boundary-shifted method and the
 * standard Galerkin assembly of the polyhedral approach.
 *
 * Test functions are the Lagrange basis functions of the nodes off Gamma_h.
 * Trial functions coincide with them except on O_h, where the element matrix
 * becomes S0 * C. Dirichlet columns are moved to the right-hand side.
 */
#pragma once

#include "bsfem/affine_map.hpp"
#include "bsfem/quadrature.hpp"
#include "bsfem/trial_space.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/SparseExtra>

#include <algorithm>
#include <string>
#include <thread>
#include <vector>

namespace bsfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct DofMap {
  std::vector<int> equation;  // per global node, -1 for Dirichlet nodes
  std::vector<int> node;      // per equation

  int size() const { return static_cast<int>(node.size()); }
  bool is_dirichlet(int global) const { return equation[global] < 0; }
};

/// Equations for every node with `constrained[node] == 0`, in node order.
inline DofMap build_dof_map(const std::vector<char>& constrained) {
  DofMap d;
  d.equation.assign(constrained.size(), -1);
  for (std::size_t i = 0; i < constrained.size(); ++i)
    if (!constrained[i]) {
      d.equation[i] = static_cast<int>(d.node.size());
      d.node.push_back(static_cast<int>(i));
    }
  return d;
}

struct LinearSystem {
  SparseMatrix A;  // row = test dof, column = trial dof
  Vector rhs;
  DofMap dofs;
  bool symmetric = false;

  int size() const { return static_cast<int>(rhs.size()); }
};

struct AssemblyOptions {
  bool parallel = false;
  int threads = 0;  // 0: hardware concurrency
};

/// Reference shape data tabulated at the points of a quadrature rule.
struct ElementTables {
  LagrangeElement element;
  QuadratureRule quad;
  std::vector<Vector> values;                                   // per point
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> grads;  // per point

  ElementTables(int k, QuadratureRule q) : element(k), quad(std::move(q)) {
    for (const auto& xi : quad.points) {
      values.push_back(element.values(xi));
      grads.push_back(element.gradients(xi));
    }
  }
};

inline void require_stiffness_degree(int k, const QuadratureRule& quad) {
  if (quad.degree < 2 * (k - 1)) throw Error("quadrature degree too low for the stiffness matrix");
}

inline Matrix element_stiffness(const AffineMap& map, const ElementTables& tab) {
  const int n = tab.element.size();
  Matrix S = Matrix::Zero(n, n);
  for (int q = 0; q < tab.quad.size(); ++q) {
    // rows: physical gradients (B^{-T} g)^T = g^T B^{-1}
    const Eigen::Matrix<double, Eigen::Dynamic, 3> G = tab.grads[q] * map.inverse_linear();
    S.noalias() += (tab.quad.weights[q] * map.det()) * (G * G.transpose());
  }
  return S;
}

inline Matrix element_stiffness(const Mesh& m, int t, int k, const QuadratureRule& quad) {
  require_stiffness_degree(k, quad);
  return element_stiffness(AffineMap(m, t), ElementTables(k, quad));
}

inline Vector element_load(const AffineMap& map, const ScalarField& f, const ElementTables& tab) {
  Vector b = Vector::Zero(tab.element.size());
  if (!f) return b;
  for (int q = 0; q < tab.quad.size(); ++q)
    b += (tab.quad.weights[q] * map.det() * f(map.map(tab.quad.points[q]))) * tab.values[q];
  return b;
}

inline Vector element_load(const Mesh& m, int t, const ScalarField& f, int k, const QuadratureRule& quad) {
  return element_load(AffineMap(m, t), f, ElementTables(k, quad));
}

namespace detail {

struct AssemblyChunk {
  std::vector<Triplet> triplets;
  std::vector<std::pair<int, double>> rhs;  // applied in order
};

// Runs body(t, chunk) over contiguous element ranges and merges the chunks
// in element order, so the result does not depend on the thread count.
template <class Body>
void for_elements(int nt, const AssemblyOptions& opt, Body&& body, std::vector<AssemblyChunk>& chunks) {
  int nthreads = 1;
  if (opt.parallel) {
    nthreads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, std::max(1, nt));
  }
  chunks.assign(nthreads, {});
  if (nthreads == 1) {
    for (int t = 0; t < nt; ++t) body(t, chunks[0]);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  for (int c = 0; c < nthreads; ++c) {
    const int lo = static_cast<int>(static_cast<long long>(nt) * c / nthreads);
    const int hi = static_cast<int>(static_cast<long long>(nt) * (c + 1) / nthreads);
    pool.emplace_back([&, c, lo, hi] {
      try {
        for (int t = lo; t < hi; ++t) body(t, chunks[c]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline LinearSystem finish(DofMap dofs, std::vector<AssemblyChunk>& chunks, bool symmetric) {
  LinearSystem sys;
  const int n = dofs.size();
  sys.dofs = std::move(dofs);
  sys.symmetric = symmetric;
  sys.rhs = Vector::Zero(n);
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.triplets.size();
  std::vector<Triplet> all;
  all.reserve(total);
  for (auto& c : chunks) {
    all.insert(all.end(), c.triplets.begin(), c.triplets.end());
    for (const auto& [i, v] : c.rhs) sys.rhs[i] += v;
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(all.begin(), all.end());
  sys.A.makeCompressed();
  return sys;
}

}  // namespace detail

/// Shared kernel: element trial matrices S0 * C (C = I where `bases` has no
/// entry), test rows and trial columns restricted to unconstrained nodes,
/// Dirichlet columns moved to the right-hand side with `dirichlet` values.
inline LinearSystem assemble_lagrange(const Mesh& m, const LagrangeSpace& sp, const std::vector<char>& constrained,
                                      const ModifiedBasisSet* bases, const ScalarField& f,
                                      const std::vector<double>& dirichlet, const QuadratureRule& quad,
                                      const AssemblyOptions& opt = {}) {
  require_stiffness_degree(sp.k, quad);
  const ElementTables tab(sp.k, quad);
  DofMap dofs = build_dof_map(constrained);
  const int n = tab.element.size();

  std::vector<detail::AssemblyChunk> chunks;
  detail::for_elements(
      m.num_tets(), opt,
      [&](int t, detail::AssemblyChunk& out) {
        const AffineMap map(m, t);
        Matrix A = element_stiffness(map, tab);
        if (bases) {
          if (const auto* b = bases->find(t)) A = A * b->C;
        }
        const Vector load = element_load(map, f, tab);
        const auto& nodes = sp.tet_nodes[t];
        for (int i = 0; i < n; ++i) {
          const int row = dofs.equation[nodes[i]];
          if (row < 0) continue;
          double r = load[i];
          for (int j = 0; j < n; ++j) {
            const int col = dofs.equation[nodes[j]];
            if (col >= 0)
              out.triplets.emplace_back(row, col, A(i, j));
            else
              r -= A(i, j) * dirichlet[nodes[j]];
          }
          out.rhs.emplace_back(row, r);
        }
      },
      chunks);
  return detail::finish(std::move(dofs), chunks, bases == nullptr);
}

/// Boundary-shifted Petrov-Galerkin system; `dirichlet` holds g at the
/// shifted nodes (see dirichlet_values).
inline LinearSystem assemble_new_method(const Mesh& m, const LagrangeSpace& sp, const ShiftedNodeTable& tab,
                                        const ModifiedBasisSet& bases, const ScalarField& f,
                                        const std::vector<double>& dirichlet, const QuadratureRule& quad,
                                        const AssemblyOptions& opt = {}) {
  if (bases.k != sp.k) throw Error("modified bases built for another degree");
  if (static_cast<int>(bases.index.size()) != m.num_tets()) throw Error("modified bases built for another mesh");
  // every element carrying a shifted node needs its modified basis
  for (int t = 0; t < m.num_tets(); ++t) {
    if (bases.find(t)) continue;
    for (int g : sp.tet_nodes[t])
      if (tab.on_gamma[g] && sp.entity[g].kind != EntityKind::vertex)
        throw Error("missing modified basis for element " + std::to_string(t));
  }
  return assemble_lagrange(m, sp, tab.on_gamma, &bases, f, dirichlet, quad, opt);
}

/// Standard Galerkin system with Dirichlet values imposed on Gamma_h.
inline LinearSystem assemble_polyhedral(const Mesh& m, const LagrangeSpace& sp, const ShiftedNodeTable& tab,
                                        const ScalarField& f, const std::vector<double>& dirichlet,
                                        const QuadratureRule& quad, const AssemblyOptions& opt = {}) {
  return assemble_lagrange(m, sp, tab.on_gamma, nullptr, f, dirichlet, quad, opt);
}

/// Per-element coefficients in the canonical Lagrange basis (one column per
/// tet) of the discrete solution: C applied to the element's nodal values.
inline Matrix lagrange_element_coefficients(const Mesh& m, const LagrangeSpace& sp, const DofMap& dofs,
                                            const ModifiedBasisSet* bases, const Vector& solution,
                                            const std::vector<double>& dirichlet) {
  const int n = LagrangeElement::node_count(sp.k);
  Matrix coef(n, m.num_tets());
  Vector local(n);
  for (int t = 0; t < m.num_tets(); ++t) {
    for (int i = 0; i < n; ++i) {
      const int g = sp.tet_nodes[t][i];
      const int eq = dofs.equation[g];
      local[i] = eq >= 0 ? solution[eq] : dirichlet[g];
    }
    const ModifiedElementBasis* b = bases ? bases->find(t) : nullptr;
    coef.col(t) = b ? Vector(b->C * local) : local;
  }
  return coef;
}

/// MatrixMarket coordinate dump of the system matrix.
inline void write_matrix_market(const LinearSystem& sys, const std::string& path) {
  if (!Eigen::saveMarket(sys.A, path)) throw Error("cannot write " + path);
}

}  // namespace bsfem
