#pragma once

#include "faultflow/mesh.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace faultflow {

/// Symmetric weight tensor in ambient coordinates. Only its restriction to the
/// tangent space of a cell enters the kernels.
using Tensor = Eigen::Matrix3d;

enum class DofKind { face_flux, cell_pressure, interface_flux };

/// Dense element matrix with at most 4 rows and columns.
struct LocalMatrix {
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

    Storage values;
    DofKind row_kind = DofKind::face_flux;
    DofKind col_kind = DofKind::face_flux;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    double operator()(int i, int j) const { return values(i, j); }
};

/*
 * Lowest-order Raviart-Thomas kernels.
 *
 * Degrees of freedom are net fluxes through faces, measured along the global
 * face orientation. On a cell with vertices P_0..P_d the basis function for
 * local face i is
 *
 *     zeta_i(x) = s_i (x - P_i) / (d |K|),
 *
 * with s_i the orientation sign of the face in that cell. Its outward flux is 1
 * through face i and 0 through the others, and div zeta_i = s_i / |K|.
 * Everything is integrated exactly for affine cells.
 */

/// Weighted mass matrix, entry (i,j) = int_K (W zeta_i) . zeta_j.
/// Throws InputError for a degenerate cell or a weight that is not symmetric
/// positive definite on the tangent space of the cell.
LocalMatrix rt0_local_mass(const CellGeometry& cell, const Tensor& weight);

/// Row vector of int_K div zeta_j, i.e. the orientation signs.
LocalMatrix rt0_local_div(const CellGeometry& cell);

/// Interface contribution alpha_M^2 / |f| on the flux dof of an Omega face glued
/// to a damage layer. The normal trace of the flux basis is 1/|f|.
LocalMatrix trace_term_local(double face_measure, double alpha_M_sq);

/// Same, after checking that `omega_face` belongs to the M map of `side`.
LocalMatrix trace_term_local(const MixedDimGeometry& geometry, Side side, int omega_face,
                             double alpha_M_sq);

/// Evaluates the RT0 field with local dofs `dofs` (global orientation) at `x`.
Point rt0_evaluate(const CellGeometry& cell, std::span<const double> dofs, const Point& x);

/// Face fluxes |f| v.n_f of a constant field, one per mesh face.
Eigen::VectorXd rt0_interpolate_constant(const SimplicialMesh& mesh, const Point& v);

/// Cell-centroid values of an RT0 field given by per-face fluxes.
std::vector<Point> rt0_cell_velocities(const SimplicialMesh& mesh, const Eigen::VectorXd& face_fluxes);

/// Throws InputError unless `weight` is symmetric and SPD on the cell's tangent space.
void check_weight(const CellGeometry& cell, const Tensor& weight);

}  // namespace faultflow
