#pragma once

#include "faultflow/mesh.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace faultflow {

/// Legacy ASCII VTK unstructured grid with cell data "pressure" (scalar) and
/// "velocity" (vector).
void write_vtk(std::ostream& out, const SimplicialMesh& mesh, const Eigen::VectorXd& pressure,
               const std::vector<Point>& velocity, const std::string& title);
void write_vtk(const std::string& path, const SimplicialMesh& mesh, const Eigen::VectorXd& pressure,
               const std::vector<Point>& velocity, const std::string& title);

struct VtkSummary {
    long points = 0;
    long cells = 0;
    std::vector<std::string> arrays;
};

/// Structural check of a legacy ASCII unstructured grid: header, counts of
/// points, cell connectivity and types, and the length of every cell-data
/// array. Throws ParseError with the offending line.
VtkSummary check_vtk(std::istream& in);
VtkSummary check_vtk(const std::string& path);

}  // namespace faultflow
