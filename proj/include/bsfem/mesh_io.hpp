/**
 * @brief Mesh export: VTK legacy ASCII unstructured grids and a plain-text
 * dump (vertex table + tet table) used by golden tests.
 */
#pragma once

#include "bsfem/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace bsfem {

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  return os;
}

}  // namespace detail

/// Optional point data must have one value per vertex.
inline void write_vtk(std::ostream& os, const Mesh& m, const std::vector<double>* point_data = nullptr,
                      const std::string& field = "u_h") {
  if (point_data && static_cast<int>(point_data->size()) != m.num_vertices())
    throw Error("point data size does not match the vertex count");
  os << "# vtk DataFile Version 3.0\n" << m.domain << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << m.num_vertices() << " double\n";
  for (const auto& v : m.vertices)
    os << detail::fmt17(v[0]) << ' ' << detail::fmt17(v[1]) << ' ' << detail::fmt17(v[2]) << '\n';
  os << "CELLS " << m.num_tets() << ' ' << 5 * m.num_tets() << '\n';
  for (const auto& t : m.tets) os << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  os << "CELL_TYPES " << m.num_tets() << '\n';
  for (int t = 0; t < m.num_tets(); ++t) os << "10\n";
  if (point_data) {
    os << "POINT_DATA " << m.num_vertices() << "\nSCALARS " << field << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *point_data) os << detail::fmt17(v) << '\n';
  }
}

inline void write_vtk(const std::string& path, const Mesh& m, const std::vector<double>* point_data = nullptr,
                      const std::string& field = "u_h") {
  auto os = detail::open_output(path);
  write_vtk(os, m, point_data, field);
}

inline void write_mesh_dump(std::ostream& os, const Mesh& m) {
  os << "vertices " << m.num_vertices() << '\n';
  for (const auto& v : m.vertices)
    os << detail::fmt17(v[0]) << ' ' << detail::fmt17(v[1]) << ' ' << detail::fmt17(v[2]) << '\n';
  os << "tets " << m.num_tets() << '\n';
  for (const auto& t : m.tets) os << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

inline void write_mesh_dump(const std::string& path, const Mesh& m) {
  auto os = detail::open_output(path);
  write_mesh_dump(os, m);
}

}  // namespace bsfem
