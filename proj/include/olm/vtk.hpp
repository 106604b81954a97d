#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "olm/core.hpp"

namespace olm {

// Legacy-VTK ASCII (version 2.0) unstructured grid with point data: a
// 3-component zero-padded `velocity` vector and a `pressure` scalar.
void write_vtk_fields(const std::string& path,
                      const std::vector<Eigen::Vector2d>& points,
                      const std::vector<Eigen::Vector3i>& cells,
                      const std::vector<Eigen::Vector2d>& velocity,
                      const std::vector<double>& pressure);

}  // namespace olm
