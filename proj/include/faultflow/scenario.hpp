#pragma once

#include "faultflow/assembly.hpp"
#include "faultflow/coefficients.hpp"
#include "faultflow/equidim.hpp"
#include "faultflow/linsolve.hpp"
#include "faultflow/mesh.hpp"
#include "faultflow/model_error.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace faultflow {

/// Boundary rule from a `bc.<domain>.<tag> = pressure|flux <value> [where: ...]` line.
/// Domains: omega, mu (both layers), mu_left, mu_right, gamma.
struct BoundaryRule {
    std::string domain;
    std::string tag;
    bool pressure = true;
    double value = 0.0;
    Predicate where;
    int line = 0;
};

/// `source.<domain> = <value> [where: ...]`. Layer and fault values are
/// integrated over the thickness.
struct SourceRule {
    std::string domain;
    double value = 0.0;
    Predicate where;
    int line = 0;
};

enum class SolverChoice { saddle, schur };

/*
 * Flat `key = value` scenario file; `#` starts a comment.
 *
 *   name = case_ii
 *   mode = permeability            # or literal
 *   geometry = two_block 53 40     # or: geometry = mesh data/fault3d.mesh
 *   eps = 1e-2                     # or eps_mu / eps_gamma separately
 *   k.omega = 1
 *   k.mu = 1
 *   k.mu = 2e-3 where: 0.25 <= y <= 0.75
 *   bc.omega.left = pressure 0
 *   bc.gamma.top = flux 0.5 where: x < 10
 *   source.omega = 1 where: x < 0.5, y < 0.5
 *   solver = saddle                # or schur
 *   output = out/case_ii
 *   reference.refined = 106 80     # second mixed grid for the error bounds
 *   reference.eta_factor = 0.25    # equi-dimensional cell width / eps
 *   reference.ny = 160
 *   reference.outer_size = 0.00625
 *   sweep.eps = 1e-2, 5e-3, 2.5e-3
 *
 * Later `k` rules override earlier ones where their predicates hold.
 */
struct Scenario {
    std::string name = "scenario";
    std::string base_dir = ".";  ///< resolves relative mesh paths
    int nx = 0;
    int ny = 0;
    std::string mesh_path;
    CoefficientMode mode = CoefficientMode::permeability;
    double eps_mu = 1e-2;
    double eps_gamma = 1e-2;
    ParameterTable k;
    std::vector<BoundaryRule> boundary;
    std::vector<SourceRule> sources;
    SolverChoice solver = SolverChoice::saddle;
    std::string output = "output";
    int refined_nx = 0;
    int refined_ny = 0;
    double eta_factor = 0.25;
    int reference_ny = 160;
    double reference_outer = 1.0 / 160;
    std::vector<double> sweep_eps;

    bool structured() const { return mesh_path.empty(); }
};

/// Parses `0.25 <= y <= 0.75`, `z >= 10`, `x < 1 and y > 0.5` (also `,`).
/// Throws InputError.
Predicate parse_predicate(const std::string& text);

/// Throws ConfigError carrying the line number.
Scenario parse_scenario(std::istream& in, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Structured geometry at (nx, ny), or the imported mesh.
MixedDimGeometry scenario_geometry(const Scenario& sc, int nx, int ny);
MixedDimGeometry scenario_geometry(const Scenario& sc);

/// Throws ConfigError for a rule that selects no face.
BoundaryConditions mixed_boundary(const Scenario& sc, const MixedDimGeometry& geometry);
SourceField mixed_sources(const Scenario& sc, const MixedDimGeometry& geometry);
CoefficientSet scenario_coefficients(const Scenario& sc, const MixedDimGeometry& geometry);

/// Same data on a mesh from build_layered_equidim_mesh: matrix cells take the
/// omega rules, damage and fault cells the layer rules, with layer fluxes and
/// sources divided by the thickness.
DomainBoundary equidim_boundary(const Scenario& sc, const SimplicialMesh& layered);
std::vector<double> equidim_sources(const Scenario& sc, const SimplicialMesh& layered);

struct RunResult {
    MixedDimGeometry geometry;
    CoefficientSet coeff;
    BlockSystem system;
    MixedSolution solution;
    Diagnostics diagnostics;
    SolveInfo info;
};

RunResult solve_scenario(const Scenario& sc, Execution exec = Execution::parallel);
RunResult solve_scenario(const Scenario& sc, const MixedDimGeometry& geometry, Execution exec = Execution::parallel);

struct PairJump {
    Point at;
    double value = 0.0;
};

/// Pressure jumps across the interfaces.
struct JumpProfile {
    std::array<std::vector<PairJump>, 2> m;      ///< Omega trace minus layer pressure, per M pair
    std::array<std::vector<PairJump>, 2> gamma;  ///< layer minus fault pressure, per Gamma pair
    std::vector<PairJump> across;                ///< left minus right Omega trace at matching layer cells
    double pressure_min = 0.0;
    double pressure_max = 0.0;

    double range() const { return pressure_max - pressure_min; }
};

JumpProfile jump_profile(const RunResult& run);

/// Measure-weighted mean of |velocity| at cell centroids. Layer and fault
/// values use the reduced (thickness-integrated) fluxes.
struct SpeedSummary {
    double omega = 0.0;
    std::array<double, 2> mu{};
    double gamma = 0.0;
};

SpeedSummary mean_speeds(const RunResult& run);

/// FAULTFLOW_OUTPUT_DIR when set, else the scenario's `output`.
std::string output_directory(const Scenario& sc);

/// VTK per domain plus summary.csv. Returns the written paths.
std::vector<std::string> write_outputs(const Scenario& sc, const RunResult& run, const std::string& dir);
void write_summary(std::ostream& out, const Scenario& sc, const RunResult& run);

/// Mixed solves at (nx, ny) and (nx2, ny2), equi-dimensional solve at eta, all
/// with eps_mu = eps_gamma = eps.
ErrorReport error_bounds(const Scenario& sc, double eps, int nx, int ny, int nx2, int ny2, double eta,
                         Execution exec = Execution::parallel);

/// error_bounds over `eps` using the scenario grids and reference settings.
std::vector<ErrorReport> model_error_sweep(const Scenario& sc, const std::vector<double>& eps,
                                           Execution exec = Execution::parallel);

}  // namespace faultflow
