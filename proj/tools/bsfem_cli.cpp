#include "bsfem_commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace bsfem::cli;
  CLI::App app{"Boundary-shifted finite elements for the Poisson equation on curved 3D domains"};
  app.require_subcommand(1);

  std::string config_path, case_name, method, refine, out, solver;
  int k = 0;
  double tol = 0.0;
  bool sequential = false, vtk = false, dump_matrix = false;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file; flags override it");
    sub->add_option("--case", case_name, "quadratic-ellipsoid | tp1-sphere | tp2-ellipsoid | tp3-torus | quadratic-sphere-g");
    sub->add_option("--refine", refine, "refinement values J (octants) or I (torus), e.g. 4,8,16");
    sub->add_option("--out", out, "output directory");
  };
  auto add_solver_options = [&](CLI::App* sub) {
    sub->add_option("--method", method, "new | polyhedral | nonconforming");
    sub->add_option("--k", k, "polynomial degree (2 or 3)");
    sub->add_option("--tol", tol, "solver relative residual tolerance");
    sub->add_option("--solver", solver, "direct | gmres");
    sub->add_flag("--sequential", sequential, "sequential assembly, no timings in CSV output");
    sub->add_flag("--dump-matrix", dump_matrix, "write the system matrix in MatrixMarket format");
  };

  auto* mesh = app.add_subcommand("mesh", "write VTK and text dumps of the case meshes");
  add_run_options(mesh);
  auto* solve = app.add_subcommand("solve", "solve one case on one mesh");
  add_run_options(solve);
  add_solver_options(solve);
  solve->add_flag("--vtk", vtk, "write the solution at the vertices as VTK point data");
  auto* conv = app.add_subcommand("convergence", "error table over a refinement sequence");
  add_run_options(conv);
  add_solver_options(conv);
  auto* check = app.add_subcommand("check", "run the built-in property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(std::cout);

    RunConfig c;
    if (!config_path.empty()) load_config_file(c, config_path);
    if (!case_name.empty()) c.case_name = case_name;
    if (!method.empty()) c.method = method;
    if (k != 0) c.k = k;
    if (!refine.empty()) c.refine = parse_int_list(refine);
    if (!out.empty()) c.out = out;
    if (tol != 0.0) c.tol = tol;
    if (!solver.empty()) c.solver = solver;
    c.sequential = c.sequential || sequential;
    c.vtk = c.vtk || vtk;
    c.dump_matrix = c.dump_matrix || dump_matrix;

    if (mesh->parsed()) return cmd_mesh(c, std::cout);
    if (solve->parsed()) return cmd_solve(c, std::cout);
    return cmd_convergence(c, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
