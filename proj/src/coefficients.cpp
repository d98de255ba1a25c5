#include "faultflow/coefficients.hpp"

#include "faultflow/error.hpp"

#include <cmath>

namespace faultflow {

const char* to_string(CoefficientMode mode) {
    return mode == CoefficientMode::literal ? "literal" : "permeability";
}

CoefficientMode parse_mode(const std::string& text) {
    if (text == "literal") return CoefficientMode::literal;
    if (text == "permeability") return CoefficientMode::permeability;
    throw InputError("unknown coefficient mode '" + text + "'");
}

LayerAlphas layer_alphas(double k, double eps, CoefficientMode mode) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InputError("k must be positive and finite");
    if (!(eps > 0.0)) throw InputError("thickness must be positive");
    if (mode == CoefficientMode::literal) return {k * eps, k / eps};
    return {1.0 / (k * eps), eps / k};
}

double matrix_alpha_sq(double k, CoefficientMode mode) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InputError("k must be positive and finite");
    return mode == CoefficientMode::literal ? k : 1.0 / k;
}

double PiecewiseField::operator()(const Point& x) const {
    for (auto it = rules.rbegin(); it != rules.rend(); ++it)
        if (it->where(x)) return it->value;
    throw InputError("no rule defines the field at (" + std::to_string(x.x()) + ", " +
                     std::to_string(x.y()) + ", " + std::to_string(x.z()) + ")");
}

const PiecewiseField& region_field(const ParameterTable& raw, const std::string& name) {
    if (auto it = raw.find(name); it != raw.end()) return it->second;
    if (name == "mu_left" || name == "mu_right")
        if (auto it = raw.find("mu"); it != raw.end()) return it->second;
    throw InputError("missing parameters for region '" + name + "'");
}

CoefficientSet CoefficientSet::uniform(const MixedDimGeometry& geometry, double omega, double mu, double M,
                                       double gamma, double Gamma) {
    CoefficientSet c;
    c.alpha_omega_sq.assign(geometry.omega.num_cells(), omega * Tensor::Identity());
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        c.alpha_mu_sq[k].assign(geometry.mu(s).num_cells(), mu);
        c.alpha_M_sq[k].assign(geometry.m(s).pairs.size(), M);
        c.alpha_Gamma_sq[k].assign(geometry.g(s).pairs.size(), Gamma);
    }
    c.alpha_gamma_sq.assign(geometry.gamma.num_cells(), gamma);
    return c;
}

void CoefficientSet::validate(const MixedDimGeometry& geometry) const {
    auto need = [](std::size_t have, std::size_t want, const char* what) {
        if (have != want) throw InputError(std::string("missing coefficient: ") + what);
    };
    auto positive = [](const std::vector<double>& v, const char* what) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(v[i] > 0.0) || !std::isfinite(v[i]))
                throw InputError(std::string("non-positive coefficient ") + what + " at entry " + std::to_string(i));
    };
    need(alpha_omega_sq.size(), geometry.omega.num_cells(), "alpha_Omega");
    need(alpha_gamma_sq.size(), geometry.gamma.num_cells(), "alpha_gamma");
    positive(alpha_gamma_sq, "alpha_gamma");
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        need(alpha_mu_sq[k].size(), geometry.mu(s).num_cells(), "alpha_mu");
        need(alpha_M_sq[k].size(), geometry.m(s).pairs.size(), "alpha_M");
        need(alpha_Gamma_sq[k].size(), geometry.g(s).pairs.size(), "alpha_Gamma");
        positive(alpha_mu_sq[k], "alpha_mu");
        positive(alpha_M_sq[k], "alpha_M");
        positive(alpha_Gamma_sq[k], "alpha_Gamma");
    }
    if (!(eps_mu > 0.0) || !(eps_gamma > 0.0)) throw InputError("thicknesses must be positive");
}

CoefficientSet coefficients_from_mode(const MixedDimGeometry& geometry, const ParameterTable& raw,
                                      CoefficientMode mode, double eps_mu, double eps_gamma) {
    for (const auto& [name, field] : raw)
        if (name != "omega" && name != "mu" && name != "mu_left" && name != "mu_right" && name != "gamma")
            throw InputError("unknown region name '" + name + "'");

    CoefficientSet c;
    c.mode = mode;
    c.eps_mu = eps_mu;
    c.eps_gamma = eps_gamma;

    const PiecewiseField& omega = region_field(raw, "omega");
    c.alpha_omega_sq.resize(geometry.omega.num_cells());
    for (int cell = 0; cell < geometry.omega.num_cells(); ++cell)
        c.alpha_omega_sq[cell] = matrix_alpha_sq(omega(geometry.omega.cell_centroid(cell)), mode) * Tensor::Identity();

    const PiecewiseField& gamma = region_field(raw, "gamma");
    c.alpha_gamma_sq.resize(geometry.gamma.num_cells());
    for (int cell = 0; cell < geometry.gamma.num_cells(); ++cell)
        c.alpha_gamma_sq[cell] = layer_alphas(gamma(geometry.gamma.cell_centroid(cell)), eps_gamma, mode).tangential_sq;

    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        const SimplicialMesh& layer = geometry.mu(s);
        const PiecewiseField& field = region_field(raw, std::string("mu_") + to_string(s));
        c.alpha_mu_sq[k].resize(layer.num_cells());
        for (int cell = 0; cell < layer.num_cells(); ++cell)
            c.alpha_mu_sq[k][cell] = layer_alphas(field(layer.cell_centroid(cell)), eps_mu, mode).tangential_sq;
        for (const auto& p : geometry.m(s).pairs)
            c.alpha_M_sq[k].push_back(layer_alphas(field(layer.cell_centroid(p.lower)), eps_mu, mode).normal_sq);
        for (const auto& p : geometry.g(s).pairs)
            c.alpha_Gamma_sq[k].push_back(
                layer_alphas(gamma(geometry.gamma.cell_centroid(p.lower)), eps_gamma, mode).normal_sq);
    }
    return c;
}

}  // namespace faultflow
