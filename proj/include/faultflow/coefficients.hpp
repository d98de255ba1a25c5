#pragma once

#include "faultflow/fem.hpp"
#include "faultflow/mesh.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace faultflow {

/// How raw per-region values `k` turn into the reduced coefficients.
///
/// literal:      alpha_mu^2 = k eps,     alpha_M^2 = k / eps,     alpha_Omega^2 = k
/// permeability: alpha_mu^2 = 1/(k eps), alpha_M^2 = eps / k,     alpha_Omega^2 = 1/k
///
/// The fault uses the same laws with eps_gamma for alpha_gamma and alpha_Gamma.
enum class CoefficientMode { literal, permeability };

const char* to_string(CoefficientMode mode);
CoefficientMode parse_mode(const std::string& text);

struct LayerAlphas {
    double tangential_sq = 0.0;  ///< alpha_mu^2 or alpha_gamma^2
    double normal_sq = 0.0;      ///< alpha_M^2 or alpha_Gamma^2
};

LayerAlphas layer_alphas(double k, double eps, CoefficientMode mode);
double matrix_alpha_sq(double k, CoefficientMode mode);

/// One axis-aligned interval condition `lo <= x_axis <= hi` (either side optional).
struct AxisBound {
    int axis = 0;
    double lo = -1e300;
    double hi = 1e300;
    bool lo_strict = false;
    bool hi_strict = false;

    bool contains(double v) const {
        return (lo_strict ? v > lo : v >= lo) && (hi_strict ? v < hi : v <= hi);
    }
};

/// Conjunction of axis bounds; the empty predicate holds everywhere.
struct Predicate {
    std::vector<AxisBound> bounds;
    bool operator()(const Point& x) const {
        for (const auto& b : bounds)
            if (!b.contains(x[b.axis])) return false;
        return true;
    }
};

/// Piecewise-constant field: the last rule whose predicate holds wins.
struct PiecewiseField {
    struct Rule {
        Predicate where;
        double value = 0.0;
    };
    std::vector<Rule> rules;

    static PiecewiseField constant(double v) { return {{{Predicate{}, v}}}; }
    /// Throws InputError when no rule covers `x`.
    double operator()(const Point& x) const;
};

/// Raw values per region. Recognised names: omega, mu_left, mu_right, mu
/// (both layers), gamma.
using ParameterTable = std::map<std::string, PiecewiseField>;

/// All reduced coefficients, piecewise constant per cell or interface pair.
struct CoefficientSet {
    std::vector<Tensor> alpha_omega_sq;                ///< per Omega cell
    std::array<std::vector<double>, 2> alpha_mu_sq;    ///< per damage-layer cell, by side
    std::array<std::vector<double>, 2> alpha_M_sq;     ///< per M pair, by side
    std::vector<double> alpha_gamma_sq;                ///< per fault cell
    std::array<std::vector<double>, 2> alpha_Gamma_sq; ///< per Gamma pair, by side
    double eps_mu = 1.0;
    double eps_gamma = 1.0;
    CoefficientMode mode = CoefficientMode::literal;

    /// Same value everywhere for each kind of coefficient.
    static CoefficientSet uniform(const MixedDimGeometry& geometry, double omega, double mu, double M,
                                  double gamma, double Gamma);

    /// Throws InputError for missing entries or non-positive values.
    void validate(const MixedDimGeometry& geometry) const;
};

/// Evaluates `raw` at cell centroids and applies `mode`. Throws InputError for an
/// unknown region name, a missing region, or k <= 0.
CoefficientSet coefficients_from_mode(const MixedDimGeometry& geometry, const ParameterTable& raw,
                                      CoefficientMode mode, double eps_mu, double eps_gamma);

/// Field for a layer: "mu_left"/"mu_right" fall back to "mu".
const PiecewiseField& region_field(const ParameterTable& raw, const std::string& name);

}  // namespace faultflow
