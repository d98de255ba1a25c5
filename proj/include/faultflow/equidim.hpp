#pragma once

#include "faultflow/assembly.hpp"
#include "faultflow/coefficients.hpp"
#include "faultflow/mesh.hpp"

#include <span>
#include <vector>

namespace faultflow {

/// Inverse permeability per cell of a layered mesh.
struct EquiDimCoefficients {
    std::vector<Tensor> sigma_sq;
    std::vector<int> region;
};

/// sigma^2 = alpha_normal^2 eps n(x)n + (alpha_tangential^2 / eps)(I - n(x)n).
/// Throws InputError unless |n| = 1 within 1e-12.
Tensor sigma_from_alpha(double alpha_tangential_sq, double alpha_normal_sq, double eps, const Point& normal);

/// Inverse of the thickness reduction used by permeability mode:
/// sigma^2 = (alpha_normal^2 / eps) n(x)n + alpha_tangential^2 eps (I - n(x)n).
Tensor sigma_from_reduced(double alpha_tangential_sq, double alpha_normal_sq, double eps, const Point& normal);

/// Per-cell tensors on a mesh from build_layered_equidim_mesh. Raw fields are
/// evaluated at cell centroids; damage and fault cells go through layer_alphas
/// and then the map matching `mode` (sigma_from_alpha for literal,
/// sigma_from_reduced for permeability).
EquiDimCoefficients equidim_coefficients(const SimplicialMesh& mesh, const ParameterTable& raw, CoefficientMode mode,
                                         double eps_mu, double eps_gamma, const Point& normal = Point(1, 0, 0));

struct EquiDimSolution {
    Eigen::VectorXd u;  ///< net face fluxes
    Eigen::VectorXd p;  ///< cell pressures
    double relative_residual = 0.0;
    double max_conservation_residual = 0.0;  ///< max_K |(B'u - f)_K|
};

/// Mixed RT0-P0 solve on one conforming mesh. Throws SolverError without a
/// pressure boundary or when the factorisation fails.
EquiDimSolution solve_equidim(const SimplicialMesh& mesh, const EquiDimCoefficients& coeff, const DomainBoundary& bc,
                              std::span<const double> sources = {}, Execution exec = Execution::parallel);

}  // namespace faultflow
