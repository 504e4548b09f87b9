// Batch commands behind the bsfem executable: mesh, solve, convergence,
// check. Kept in a header so the tests can drive them in-process.
#pragma once

#include "bsfem/checks.hpp"
#include "bsfem/mesh_io.hpp"
#include "bsfem/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bsfem::cli {

struct RunConfig {
  std::string case_name = "tp1-sphere";
  std::string method = "new";
  int k = 2;
  std::vector<int> refine;
  std::string out = "out";
  bool vtk = false;
  bool dump_matrix = false;
  bool sequential = false;
  double tol = 1e-12;
  std::string solver = "direct";
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// "4,8,16" or "4 8 16".
inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    std::istringstream words(item);
    std::string w;
    while (words >> w) {
      std::size_t used = 0;
      int x = 0;
      try {
        x = std::stoi(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size()) throw Error("invalid integer '" + w + "' in refinement list");
      v.push_back(x);
    }
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error("invalid boolean for '" + key + "': " + v);
}

/// Applies one key=value setting; unknown keys are rejected.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "case") c.case_name = value;
    else if (key == "method") c.method = value;
    else if (key == "k") c.k = std::stoi(value);
    else if (key == "refine") c.refine = parse_int_list(value);
    else if (key == "out") c.out = value;
    else if (key == "vtk") c.vtk = parse_bool(key, value);
    else if (key == "dump_matrix") c.dump_matrix = parse_bool(key, value);
    else if (key == "sequential") c.sequential = parse_bool(key, value);
    else if (key == "tol") c.tol = std::stod(value);
    else if (key == "solver") c.solver = value;
    else throw Error("unknown config key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw Error("invalid value for '" + key + "': " + value);
  } catch (const std::out_of_range&) {
    throw Error("value out of range for '" + key + "': " + value);
  }
}

/// key=value lines; '#' starts a comment.
inline void load_config(RunConfig& c, std::istream& is) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read config " + path);
  load_config(c, is);
}

enum class Command { mesh, solve, convergence, check };

inline void validate(const RunConfig& c, Command cmd) {
  if (cmd == Command::check) return;
  const ExactCase ec = exact_case(c.case_name);
  if (c.refine.empty()) throw Error("no refinement values given (--refine)");
  for (int p : c.refine) {
    if (ec.parameter == "I") {
      if (p < 2 || p % 2 != 0) throw Error("torus mesh parameter I must be even and >= 2 (got " + std::to_string(p) + ")");
    } else if (p < 1) {
      throw Error("octant mesh parameter J must be >= 1 (got " + std::to_string(p) + ")");
    }
  }
  if (cmd == Command::mesh) return;
  validate_combination(ec, parse_method(c.method), c.k);
  parse_solver_method(c.solver);
  if (!(c.tol > 0 && c.tol <= 1e-6)) throw Error("tol must lie in (0, 1e-6]");
  if (cmd == Command::solve && c.refine.size() != 1) throw Error("solve takes exactly one refinement value");
  if (cmd == Command::convergence && c.refine.size() < 2)
    throw Error("convergence needs at least two refinement values");
}

inline RunOptions run_options(const RunConfig& c) {
  RunOptions o;
  o.tol = c.tol;
  o.solver = parse_solver_method(c.solver);
  o.parallel = !c.sequential;
  return o;
}

inline std::string stem(const RunConfig& c) {
  return c.case_name + "_" + c.method + "_k" + std::to_string(c.k);
}

inline std::filesystem::path output_dir(const RunConfig& c) {
  std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  return dir;
}

inline int cmd_mesh(const RunConfig& c, std::ostream& out) {
  validate(c, Command::mesh);
  const ExactCase ec = exact_case(c.case_name);
  const auto dir = output_dir(c);
  for (int p : c.refine) {
    const Mesh m = mesh_for_case(ec, p);
    const auto cls = classify_boundary(m, ec.surface);
    const std::string base = m.domain + "_" + ec.parameter + std::to_string(p);
    write_vtk((dir / (base + ".vtk")).string(), m);
    write_mesh_dump((dir / (base + ".txt")).string(), m);
    out << "mesh " << m.domain << ' ' << ec.parameter << '=' << p << " vertices=" << m.num_vertices()
        << " tets=" << m.num_tets() << " S_h=" << cls.s_h.size() << " R_h=" << cls.r_h.size()
        << " violations=" << cls.violations.size() << '\n';
  }
  return 0;
}

inline int cmd_solve(const RunConfig& c, std::ostream& out) {
  validate(c, Command::solve);
  const ExactCase ec = exact_case(c.case_name);
  const Method method = parse_method(c.method);
  const int p = c.refine.front();
  const auto dir = output_dir(c);
  const std::string base = stem(c) + "_" + ec.parameter + std::to_string(p);
  RunOptions opt = run_options(c);
  if (c.dump_matrix) opt.dump_matrix = (dir / (base + ".mtx")).string();

  const CaseResult r = solve_case(ec, method, c.k, p, opt);
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "err_h1_broken=%.10e err_l2=%.10e err_nodal_max=%.10e n_dofs=%d residual=%.3e\n",
                r.errors.err_h1_broken, r.errors.err_l2, r.errors.err_nodal_max, r.n_dofs,
                r.solve.relative_residual);
  out << c.case_name << ' ' << c.method << " k=" << c.k << ' ' << ec.parameter << '=' << p << '\n' << line;

  ConvergenceTable t;
  t.case_name = c.case_name;
  t.method = method;
  t.k = c.k;
  t.rows.push_back({p, r.n_dofs, r.errors, c.sequential ? std::nullopt : std::optional<double>(r.seconds)});
  std::ofstream csv(dir / (base + ".csv"));
  csv << to_csv(t);
  if (!csv) throw Error("cannot write CSV output");
  if (c.vtk) {
    const auto values = r.vertex_values();
    write_vtk((dir / (base + ".vtk")).string(), r.mesh, &values);
  }
  return 0;
}

inline int cmd_convergence(const RunConfig& c, std::ostream& out) {
  validate(c, Command::convergence);
  const ExactCase ec = exact_case(c.case_name);
  const ConvergenceTable t = run_convergence(ec, parse_method(c.method), c.k, c.refine, run_options(c), !c.sequential);
  const auto dir = output_dir(c);
  const auto path = dir / (stem(c) + ".csv");
  std::ofstream csv(path);
  csv << to_csv(t);
  if (!csv) throw Error("cannot write " + path.string());
  out << format_table(t) << "csv: " << path.string() << '\n';
  return 0;
}

inline int cmd_check(std::ostream& out) {
  int failed = 0;
  for (const auto& r : run_property_suite()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    failed += r.passed ? 0 : 1;
  }
  out << (failed ? std::to_string(failed) + " check(s) failed\n" : std::string("all checks passed\n"));
  return failed ? 1 : 0;
}

}  // namespace bsfem::cli
