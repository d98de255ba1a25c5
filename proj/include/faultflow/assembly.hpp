#pragma once

#include "faultflow/coefficients.hpp"
#include "faultflow/kernels.hpp"
#include "faultflow/mesh.hpp"

#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace faultflow {

/// Boundary data on one mesh. Keys are face indices of external boundary faces.
/// `pressure` holds p-bar; `flux` holds the outward normal velocity u-bar (the
/// flux dof becomes u-bar |f|). Faces in neither map are impermeable.
struct DomainBoundary {
    std::map<int, double> pressure;
    std::map<int, double> flux;

    bool has_pressure() const { return !pressure.empty(); }
};

/// Sets p-bar (or u-bar) to `value` at the centroid of every face tagged `tag`.
/// Returns the number of faces touched.
int add_pressure(DomainBoundary& bc, const SimplicialMesh& mesh, const std::string& tag,
                 const std::function<double(const Point&)>& value);
int add_flux(DomainBoundary& bc, const SimplicialMesh& mesh, const std::string& tag,
             const std::function<double(const Point&)>& value);

struct BoundaryConditions {
    DomainBoundary omega;
    std::array<DomainBoundary, 2> mu;
    DomainBoundary gamma;
};

/// Per-cell sources; an empty vector means zero.
struct SourceField {
    std::vector<double> omega;
    std::array<std::vector<double>, 2> mu;
    std::vector<double> gamma;
};

/// Flux/pressure system of one mesh after boundary data has been applied.
///
///     [ A  B ] [u]   [g]
///     [ B' 0 ] [p] = [f]
///
/// g carries -p-bar on pressure faces; f = -q |K|. Flux-constrained faces are
/// eliminated symmetrically: zero row and column, unit diagonal, g(f) = value.
struct DomainSystem {
    SparseMatrix A;
    SparseMatrix B;
    Eigen::VectorXd g;
    Eigen::VectorXd f;
    std::vector<char> fixed;  ///< per face
    double source_integral = 0.0;
};

/// Validates `bc` against `mesh` and assembles. Throws InputError for a face out
/// of range, an interior face, a face listed twice, a face carrying one of
/// `forbidden_tags`, or a weight that is not SPD.
DomainSystem assemble_domain(const SimplicialMesh& mesh, std::span<const Tensor> weights,
                             const DomainBoundary& bc, std::span<const double> sources,
                             const std::string& name, Execution exec = Execution::parallel,
                             const std::vector<std::string>& forbidden_tags = {});

/// Applies the symmetric elimination to flux faces of `sys` (used by assemble_domain).
void eliminate_flux_faces(DomainSystem& sys, const std::vector<std::pair<int, double>>& values);

enum class Block { u_omega = 0, p_omega, u_mu, p_mu, u_gamma, p_gamma, u_Gamma };

inline constexpr std::array<Block, 7> kBlocks{Block::u_omega, Block::p_omega, Block::u_mu,   Block::p_mu,
                                              Block::u_gamma, Block::p_gamma, Block::u_Gamma};

const char* to_string(Block block);

/*
 * Global mixed-dimensional system, unknowns ordered
 * (u_Omega, p_Omega, u_mu, p_mu, u_gamma, p_gamma, u_Gamma):
 *
 *   [ A_O  B_O              G_O                          ]
 *   [ B_O'                                               ]
 *   [           A_m  B_m                                 ]
 *   [ G_O'      B_m'                           G_m       ]
 *   [                          A_g  B_g                  ]
 *   [                          B_g'            G_g       ]
 *   [                     G_m'            G_g'  A_G      ]
 *
 * Layer blocks stack the left side before the right side. u_Gamma carries one
 * exchange flux density per (side, fault cell) pair.
 */
struct BlockSystem {
    SparseMatrix A_omega, B_omega, G_omega;
    SparseMatrix A_mu, B_mu, G_mu;
    SparseMatrix A_gamma, B_gamma, G_gamma;
    SparseMatrix A_Gamma;
    Eigen::VectorXd g_omega, f_omega, g_mu, f_mu, g_gamma, f_gamma;

    std::array<long, 8> offsets{};      ///< block starts; offsets[7] is the total size
    std::array<int, 2> mu_face_start{}; ///< per side, within u_mu
    std::array<int, 2> mu_cell_start{}; ///< per side, within p_mu
    std::array<int, 2> gamma_pair_start{}; ///< per side, within u_Gamma
    std::vector<char> fixed_omega, fixed_mu, fixed_gamma;
    double source_integral = 0.0;       ///< sum of q |K| over all domains

    long offset(Block b) const { return offsets[static_cast<int>(b)]; }
    long size(Block b) const { return offsets[static_cast<int>(b) + 1] - offsets[static_cast<int>(b)]; }
    long total_size() const { return offsets[7]; }

    /// Which block a global index belongs to.
    Block block_of(long dof) const;

    SparseMatrix global_matrix() const;
    Eigen::VectorXd global_rhs() const;
};

/// Assembles the coupled system. Throws InputError for missing or non-positive
/// coefficients and invalid boundary data.
BlockSystem assemble(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const BoundaryConditions& bc,
                     const SourceField& src, Execution exec = Execution::parallel);

}  // namespace faultflow
