#pragma once

#include "faultflow/assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <memory>
#include <string>

namespace faultflow {

struct MixedSolution {
    Eigen::VectorXd u_omega;                  ///< per Omega face, net flux
    Eigen::VectorXd p_omega;                  ///< per Omega cell
    std::array<Eigen::VectorXd, 2> u_mu;      ///< per layer face, by side
    std::array<Eigen::VectorXd, 2> p_mu;      ///< per layer cell, by side
    Eigen::VectorXd u_gamma;
    Eigen::VectorXd p_gamma;
    std::array<Eigen::VectorXd, 2> u_Gamma;   ///< exchange flux density per Gamma pair, by side
};

Eigen::VectorXd pack(const BlockSystem& system, const MixedSolution& solution);
MixedSolution unpack(const BlockSystem& system, const Eigen::VectorXd& x);

/// Flux-to-pressure coupling K (all flux rows, all pressure columns) and the
/// block-diagonal flux matrix, so that the system reads [A K; K' 0].
SparseMatrix coupling_matrix(const BlockSystem& system);
SparseMatrix flux_matrix(const BlockSystem& system);

/// Index of the first pressure dof of a component with no pressure anchor, or -1.
long floating_pressure_dof(const BlockSystem& system);

struct SolveInfo {
    double relative_residual = 0.0;
    int iterations = 0;
};

/// Direct sparse LU of the full symmetric indefinite system.
/// Throws SolverError naming the dof and domain of a floating pressure
/// component, or when the residual exceeds 1e-9 relative.
MixedSolution solve_saddle(const BlockSystem& system, SolveInfo* info = nullptr);

/// Dense blocks of the pressure system
///
///     [ S_O   C_O   0   ] [p_O]   [r_O]
///     [ C_O'  S_m   C_m ] [p_m] = [r_m]
///     [ 0     C_m'  S_g ] [p_g]   [r_g]
struct SchurBlocks {
    Eigen::MatrixXd S_omega, S_mu, S_gamma, C_omega, C_mu;
    Eigen::VectorXd r_omega, r_mu, r_gamma;
};

struct SpdReport {
    bool omega = false;
    bool mu = false;
    bool gamma = false;
    std::string method;

    bool all() const { return omega && mu && gamma; }
};

/// Matrix-free pressure operator K' A^-1 K. The flux blocks are factorised once;
/// A^-1 is never formed.
class PressureSchur {
public:
    explicit PressureSchur(const BlockSystem& system);
    ~PressureSchur();
    PressureSchur(PressureSchur&&) noexcept;
    PressureSchur& operator=(PressureSchur&&) noexcept;

    long size() const { return static_cast<long>(rhs_.size()); }
    /// Start of the Omega, mu and gamma pressures within the pressure vector.
    std::array<long, 4> offsets() const { return offsets_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const;
    const Eigen::VectorXd& rhs() const { return rhs_; }

    /// Applies A^-1 block by block.
    Eigen::VectorXd solve_flux(const Eigen::VectorXd& rhs) const;

    /// Column-by-column dense blocks; intended for small systems.
    SchurBlocks dense_blocks() const;

    const BlockSystem& system() const { return *system_; }
    const SparseMatrix& coupling() const { return K_; }

private:
    struct Factors;
    const BlockSystem* system_;
    SparseMatrix K_;
    std::unique_ptr<Factors> factors_;
    Eigen::VectorXd rhs_;
    std::array<long, 4> offsets_{};
};

PressureSchur build_pressure_schur(const BlockSystem& system);

/// Preconditioned conjugate gradients on the pressure system. The
/// preconditioner is K' diag(A)^-1 K, factorised directly. Throws SolverError
/// with the iteration count when the true relative residual stays above 1e-9.
Eigen::VectorXd solve_schur(const PressureSchur& schur, SolveInfo* info = nullptr, int max_iterations = 2000);

/// Back-substitution u = A^-1 (g - K p).
MixedSolution reconstruct_velocity(const BlockSystem& system, const Eigen::VectorXd& pressures);
MixedSolution reconstruct_velocity(const PressureSchur& schur, const Eigen::VectorXd& pressures);

/// S blocks are symmetric positive definite. Up to `dense_limit` rows the dense
/// block is Cholesky-factorised; above it the certificate is that A is SPD and
/// the sparse Gram matrix of the stacked coupling blocks factorises with
/// positive pivots, which is equivalent.
SpdReport check_schur_spd(const BlockSystem& system, long dense_limit = 2000);

struct Diagnostics {
    double residual = 0.0;     ///< ||M x - b|| / ||b|| on the full system
    double p0_residual = 0.0;  ///< max conservation-row residual, each row scaled by its largest entry
    double balance = 0.0;      ///< sum of outward external boundary fluxes minus sum of q |K|
    double m_law = 0.0;        ///< max |alpha_M^2 u/|f| + p_mu - lambda| / max(1, max|p|)
    double gamma_law = 0.0;    ///< max |alpha_Gamma^2 u_Gamma + p_gamma - p_mu| / max(1, max|p|)
};

/// Discrete trace pressure on an Omega boundary face recovered from the flux
/// row of its owner cell: s p_K - (M_K u)_f.
double trace_pressure(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const MixedSolution& sol,
                      int omega_face);

Diagnostics diagnose(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const BlockSystem& system,
                     const MixedSolution& solution);

}  // namespace faultflow
