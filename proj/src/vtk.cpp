#include "olm/vtk.hpp"

#include <fstream>
#include <stdexcept>

namespace olm {

void write_vtk_fields(const std::string& path,
                      const std::vector<Eigen::Vector2d>& points,
                      const std::vector<Eigen::Vector3i>& cells,
                      const std::vector<Eigen::Vector2d>& velocity,
                      const std::vector<double>& pressure) {
  if (velocity.size() != points.size() || pressure.size() != points.size())
    throw std::invalid_argument("write_vtk_fields: field size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vtk file: " + path);
  out.precision(12);
  out << "# vtk DataFile Version 2.0\n";
  out << "olm-stokes fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const Eigen::Vector2d& p : points) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << cells.size() << ' ' << 4 * cells.size() << '\n';
  for (const Eigen::Vector3i& c : cells)
    out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << cells.size() << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) out << "5\n";
  out << "POINT_DATA " << points.size() << '\n';
  out << "VECTORS velocity double\n";
  for (const Eigen::Vector2d& v : velocity) out << v.x() << ' ' << v.y() << " 0\n";
  out << "SCALARS pressure double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (double p : pressure) out << p << '\n';
}

}  // namespace olm
