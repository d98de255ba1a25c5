#include "faultflow/equidim.hpp"

#include "faultflow/error.hpp"

#include <Eigen/UmfPackSupport>

#include <cmath>

namespace faultflow {

namespace {

Tensor split(double normal_part, double tangential_part, const Point& n) {
    if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-12) throw InputError("layer normal must be a unit vector");
    const Tensor nn = n * n.transpose();
    return normal_part * nn + tangential_part * (Tensor::Identity() - nn);
}

}  // namespace

Tensor sigma_from_alpha(double alpha_tangential_sq, double alpha_normal_sq, double eps, const Point& normal) {
    return split(alpha_normal_sq * eps, alpha_tangential_sq / eps, normal);
}

Tensor sigma_from_reduced(double alpha_tangential_sq, double alpha_normal_sq, double eps, const Point& normal) {
    return split(alpha_normal_sq / eps, alpha_tangential_sq * eps, normal);
}

EquiDimCoefficients equidim_coefficients(const SimplicialMesh& mesh, const ParameterTable& raw, CoefficientMode mode,
                                         double eps_mu, double eps_gamma, const Point& normal) {
    if (!mesh.has_regions()) throw InputError("layered mesh carries no cell regions");
    const int matrix = mesh.region_index("matrix");
    const int damage_left = mesh.region_index("damage_left");
    const int damage_right = mesh.region_index("damage_right");
    const int fault = mesh.region_index("fault");
    auto omega_it = raw.find("omega");
    if (omega_it == raw.end()) throw InputError("no values for region omega");
    const PiecewiseField& f_left = region_field(raw, "mu_left");
    const PiecewiseField& f_right = region_field(raw, "mu_right");
    const PiecewiseField& f_gamma = region_field(raw, "gamma");
    auto sigma = [&](double k, double eps, const Point& n) {
        const LayerAlphas a = layer_alphas(k, eps, mode);
        return mode == CoefficientMode::literal ? sigma_from_alpha(a.tangential_sq, a.normal_sq, eps, n)
                                                : sigma_from_reduced(a.tangential_sq, a.normal_sq, eps, n);
    };

    EquiDimCoefficients out;
    out.sigma_sq.resize(mesh.num_cells());
    out.region.resize(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const Point& x = mesh.cell_centroid(c);
        const int r = mesh.cell_region(c);
        out.region[c] = r;
        if (r == matrix) out.sigma_sq[c] = matrix_alpha_sq(omega_it->second(x), mode) * Tensor::Identity();
        else if (r == damage_left) out.sigma_sq[c] = sigma(f_left(x), eps_mu, normal);
        else if (r == damage_right) out.sigma_sq[c] = sigma(f_right(x), eps_mu, normal);
        else if (r == fault) out.sigma_sq[c] = sigma(f_gamma(x), eps_gamma, normal);
        else throw InputError("unknown region index " + std::to_string(r) + " on cell " + std::to_string(c));
    }
    return out;
}

EquiDimSolution solve_equidim(const SimplicialMesh& mesh, const EquiDimCoefficients& coeff, const DomainBoundary& bc,
                              std::span<const double> sources, Execution exec) {
    if (static_cast<int>(coeff.sigma_sq.size()) != mesh.num_cells())
        throw InputError("equi-dimensional coefficients do not match the mesh");
    if (!bc.has_pressure()) throw SolverError("singular system: no pressure boundary data", mesh.num_faces(), "p");
    const DomainSystem sys = assemble_domain(mesh, coeff.sigma_sq, bc, sources, "equi", exec);

    const long nf = mesh.num_faces(), nc = mesh.num_cells();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(sys.A.nonZeros() + 2 * sys.B.nonZeros());
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.A, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < sys.B.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.B, k); it; ++it) {
            t.emplace_back(it.row(), nf + it.col(), it.value());
            t.emplace_back(nf + it.col(), it.row(), it.value());
        }
    SparseMatrix M(nf + nc, nf + nc);
    M.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd b(nf + nc);
    b << sys.g, sys.f;

    Eigen::UmfPackLU<SparseMatrix> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation of the equi-dimensional system failed");
    Eigen::VectorXd x = lu.solve(b);
    const double bn = b.norm() > 0.0 ? b.norm() : 1.0;
    double res = (M * x - b).norm() / bn;
    for (int step = 0; step < 3 && res > 1e-12; ++step) {
        const Eigen::VectorXd r = b - M * x;
        x += lu.solve(r);
        res = (M * x - b).norm() / bn;
    }
    if (!(res <= 1e-9)) throw SolverError("equi-dimensional residual " + std::to_string(res) + " exceeds 1e-9");

    EquiDimSolution out;
    out.u = x.head(nf);
    out.p = x.tail(nc);
    out.relative_residual = res;
    out.max_conservation_residual = (sys.B.transpose() * out.u - sys.f).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace faultflow
