#pragma once

#include "faultflow/fem.hpp"
#include "faultflow/mesh.hpp"

#include <Eigen/Sparse>

#include <span>

namespace faultflow {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Execution { serial, parallel };

/// Weighted RT0 mass (faces x faces) and the pressure coupling B
/// (faces x cells, B(f,c) = -sign of f in c) for one mesh.
struct DomainOperators {
    SparseMatrix mass;
    SparseMatrix div;
};

/// `weights` has one tensor per cell. The parallel path computes element
/// matrices with OpenMP into per-cell triplet slots; both paths return the same
/// matrices bit for bit.
DomainOperators assemble_rt0_p0(const SimplicialMesh& mesh, std::span<const Tensor> weights,
                                Execution exec = Execution::parallel);

/// Straightforward serial loop kept as a reference for the parallel path.
DomainOperators assemble_rt0_p0_reference(const SimplicialMesh& mesh, std::span<const Tensor> weights);

}  // namespace faultflow
