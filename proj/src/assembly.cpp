#include "faultflow/assembly.hpp"

#include "faultflow/error.hpp"

#include <algorithm>
#include <cmath>

namespace faultflow {

namespace {

using Triplet = Eigen::Triplet<double>;

void append(std::vector<Triplet>& out, const SparseMatrix& m, long row0, long col0, bool transpose = false) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            if (transpose) out.emplace_back(row0 + it.col(), col0 + it.row(), it.value());
            else out.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
        }
}

void check_boundary(const SimplicialMesh& mesh, const DomainBoundary& bc, const std::string& name,
                    const std::vector<std::string>& forbidden_tags) {
    auto check = [&](int f, double value, const char* kind) {
        if (f < 0 || f >= mesh.num_faces())
            throw InputError(name + ": " + kind + " condition on face " + std::to_string(f) + " out of range");
        if (!mesh.is_boundary_face(f))
            throw InputError(name + ": " + kind + " condition on interior face " + std::to_string(f));
        if (std::find(forbidden_tags.begin(), forbidden_tags.end(), mesh.boundary_tag(f)) != forbidden_tags.end())
            throw InputError(name + ": " + kind + " condition on interface face " + std::to_string(f));
        if (!std::isfinite(value))
            throw InputError(name + ": non-finite " + kind + " value on face " + std::to_string(f));
    };
    for (const auto& [f, v] : bc.pressure) check(f, v, "pressure");
    for (const auto& [f, v] : bc.flux) {
        check(f, v, "flux");
        if (bc.pressure.count(f))
            throw InputError(name + ": face " + std::to_string(f) + " has both pressure and flux conditions");
    }
}

SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Triplet> t;
    append(t, a, 0, 0);
    append(t, b, a.rows(), a.cols());
    SparseMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

Eigen::VectorXd stack(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out(a.size() + b.size());
    out << a, b;
    return out;
}

}  // namespace

int add_pressure(DomainBoundary& bc, const SimplicialMesh& mesh, const std::string& tag,
                 const std::function<double(const Point&)>& value) {
    const auto faces = mesh.faces_with_tag(tag);
    for (int f : faces) bc.pressure[f] = value(mesh.face_centroid(f));
    return static_cast<int>(faces.size());
}

int add_flux(DomainBoundary& bc, const SimplicialMesh& mesh, const std::string& tag,
             const std::function<double(const Point&)>& value) {
    const auto faces = mesh.faces_with_tag(tag);
    for (int f : faces) bc.flux[f] = value(mesh.face_centroid(f));
    return static_cast<int>(faces.size());
}

const char* to_string(Block block) {
    switch (block) {
        case Block::u_omega: return "u_omega";
        case Block::p_omega: return "p_omega";
        case Block::u_mu: return "u_mu";
        case Block::p_mu: return "p_mu";
        case Block::u_gamma: return "u_gamma";
        case Block::p_gamma: return "p_gamma";
        case Block::u_Gamma: return "u_Gamma";
    }
    return "?";
}

void eliminate_flux_faces(DomainSystem& sys, const std::vector<std::pair<int, double>>& values) {
    if (values.empty()) return;
    Eigen::VectorXd fixed_values = Eigen::VectorXd::Zero(sys.A.rows());
    for (const auto& [f, v] : values) {
        sys.fixed[f] = 1;
        fixed_values[f] = v;
    }
    sys.g -= sys.A * fixed_values;
    sys.f -= sys.B.transpose() * fixed_values;

    const auto& fixed = sys.fixed;
    sys.A.prune([&](Eigen::Index i, Eigen::Index j, double) { return !fixed[i] && !fixed[j]; });
    sys.B.prune([&](Eigen::Index i, Eigen::Index, double) { return !fixed[i]; });
    for (const auto& [f, v] : values) {
        sys.A.coeffRef(f, f) = 1.0;
        sys.g[f] = v;
    }
    sys.A.makeCompressed();
}

DomainSystem assemble_domain(const SimplicialMesh& mesh, std::span<const Tensor> weights, const DomainBoundary& bc,
                             std::span<const double> sources, const std::string& name, Execution exec,
                             const std::vector<std::string>& forbidden_tags) {
    check_boundary(mesh, bc, name, forbidden_tags);
    if (!sources.empty() && static_cast<int>(sources.size()) != mesh.num_cells())
        throw InputError(name + ": need one source value per cell");

    DomainOperators ops = assemble_rt0_p0(mesh, weights, exec);
    DomainSystem sys;
    sys.A = std::move(ops.mass);
    sys.B = std::move(ops.div);
    sys.g = Eigen::VectorXd::Zero(mesh.num_faces());
    sys.f = Eigen::VectorXd::Zero(mesh.num_cells());
    sys.fixed.assign(mesh.num_faces(), 0);

    for (const auto& [f, p] : bc.pressure) sys.g[f] = -p;
    for (std::size_t c = 0; c < sources.size(); ++c) {
        if (!std::isfinite(sources[c])) throw InputError(name + ": non-finite source in cell " + std::to_string(c));
        const double q = sources[c] * mesh.cell_measure(static_cast<int>(c));
        sys.f[static_cast<Eigen::Index>(c)] = -q;
        sys.source_integral += q;
    }

    // Unlisted external faces are impermeable.
    std::vector<std::pair<int, double>> values;
    for (int f : mesh.boundary_faces()) {
        if (bc.pressure.count(f)) continue;
        const auto& tag = mesh.boundary_tag(f);
        if (std::find(forbidden_tags.begin(), forbidden_tags.end(), tag) != forbidden_tags.end()) continue;
        const auto it = bc.flux.find(f);
        values.emplace_back(f, it == bc.flux.end() ? 0.0 : it->second * mesh.face_measure(f));
    }
    eliminate_flux_faces(sys, values);
    return sys;
}

Block BlockSystem::block_of(long dof) const {
    for (int b = 6; b >= 0; --b)
        if (dof >= offsets[b]) return static_cast<Block>(b);
    return Block::u_omega;
}

SparseMatrix BlockSystem::global_matrix() const {
    std::vector<Triplet> t;
    const long uO = offset(Block::u_omega), pO = offset(Block::p_omega);
    const long um = offset(Block::u_mu), pm = offset(Block::p_mu);
    const long ug = offset(Block::u_gamma), pg = offset(Block::p_gamma);
    const long uG = offset(Block::u_Gamma);

    append(t, A_omega, uO, uO);
    append(t, B_omega, uO, pO);
    append(t, B_omega, pO, uO, true);
    append(t, G_omega, uO, pm);
    append(t, G_omega, pm, uO, true);
    append(t, A_mu, um, um);
    append(t, B_mu, um, pm);
    append(t, B_mu, pm, um, true);
    append(t, G_mu, pm, uG);
    append(t, G_mu, uG, pm, true);
    append(t, A_gamma, ug, ug);
    append(t, B_gamma, ug, pg);
    append(t, B_gamma, pg, ug, true);
    append(t, G_gamma, pg, uG);
    append(t, G_gamma, uG, pg, true);
    append(t, A_Gamma, uG, uG);

    SparseMatrix m(total_size(), total_size());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Eigen::VectorXd BlockSystem::global_rhs() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(total_size());
    b.segment(offset(Block::u_omega), g_omega.size()) = g_omega;
    b.segment(offset(Block::p_omega), f_omega.size()) = f_omega;
    b.segment(offset(Block::u_mu), g_mu.size()) = g_mu;
    b.segment(offset(Block::p_mu), f_mu.size()) = f_mu;
    b.segment(offset(Block::u_gamma), g_gamma.size()) = g_gamma;
    b.segment(offset(Block::p_gamma), f_gamma.size()) = f_gamma;
    return b;
}

BlockSystem assemble(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const BoundaryConditions& bc,
                     const SourceField& src, Execution exec) {
    coeff.validate(geometry);
    const SimplicialMesh& omega = geometry.omega;
    const SimplicialMesh& gamma = geometry.gamma;

    DomainSystem sys_omega = assemble_domain(omega, coeff.alpha_omega_sq, bc.omega, src.omega, "omega", exec,
                                             {interface_tag(Side::left), interface_tag(Side::right)});

    std::array<DomainSystem, 2> sys_mu;
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        std::vector<Tensor> w;
        w.reserve(coeff.alpha_mu_sq[k].size());
        for (double a : coeff.alpha_mu_sq[k]) w.push_back(a * Tensor::Identity());
        sys_mu[k] = assemble_domain(geometry.mu(s), w, bc.mu[k], src.mu[k], std::string("mu_") + to_string(s), exec);
    }
    std::vector<Tensor> wg;
    wg.reserve(coeff.alpha_gamma_sq.size());
    for (double a : coeff.alpha_gamma_sq) wg.push_back(a * Tensor::Identity());
    DomainSystem sys_gamma = assemble_domain(gamma, wg, bc.gamma, src.gamma, "gamma", exec);

    // Robin term of the M law on the Omega flux dofs.
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        const auto& pairs = geometry.m(s).pairs;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const int f = pairs[i].higher;
            sys_omega.A.coeffRef(f, f) += trace_term_local(omega.face_measure(f), coeff.alpha_M_sq[k][i])(0, 0);
        }
    }

    BlockSystem out;
    out.mu_face_start = {0, geometry.mu_left.num_faces()};
    out.mu_cell_start = {0, geometry.mu_left.num_cells()};
    out.gamma_pair_start = {0, static_cast<int>(geometry.g_left.pairs.size())};
    const long n_mu_faces = geometry.mu_left.num_faces() + geometry.mu_right.num_faces();
    const long n_mu_cells = geometry.mu_left.num_cells() + geometry.mu_right.num_cells();
    const long n_Gamma = static_cast<long>(geometry.g_left.pairs.size() + geometry.g_right.pairs.size());
    const std::array<long, 7> sizes{omega.num_faces(), omega.num_cells(), n_mu_faces, n_mu_cells,
                                    gamma.num_faces(), gamma.num_cells(), n_Gamma};
    out.offsets[0] = 0;
    for (int b = 0; b < 7; ++b) out.offsets[b + 1] = out.offsets[b] + sizes[b];

    out.A_omega = std::move(sys_omega.A);
    out.B_omega = std::move(sys_omega.B);
    out.g_omega = std::move(sys_omega.g);
    out.f_omega = std::move(sys_omega.f);
    out.fixed_omega = std::move(sys_omega.fixed);

    out.A_mu = block_diag(sys_mu[0].A, sys_mu[1].A);
    out.B_mu = block_diag(sys_mu[0].B, sys_mu[1].B);
    out.g_mu = stack(sys_mu[0].g, sys_mu[1].g);
    out.f_mu = stack(sys_mu[0].f, sys_mu[1].f);
    out.fixed_mu = sys_mu[0].fixed;
    out.fixed_mu.insert(out.fixed_mu.end(), sys_mu[1].fixed.begin(), sys_mu[1].fixed.end());

    out.A_gamma = std::move(sys_gamma.A);
    out.B_gamma = std::move(sys_gamma.B);
    out.g_gamma = std::move(sys_gamma.g);
    out.f_gamma = std::move(sys_gamma.f);
    out.fixed_gamma = std::move(sys_gamma.fixed);

    out.source_integral =
        sys_omega.source_integral + sys_mu[0].source_integral + sys_mu[1].source_integral + sys_gamma.source_integral;

    std::vector<Triplet> tG_omega, tG_mu, tG_gamma, tA_Gamma;
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        for (const auto& p : geometry.m(s).pairs)
            tG_omega.emplace_back(p.higher, out.mu_cell_start[k] + p.lower, static_cast<double>(p.orientation));
        const auto& pairs = geometry.g(s).pairs;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& p = pairs[i];
            const long col = out.gamma_pair_start[k] + static_cast<long>(i);
            const double area = gamma.cell_measure(p.lower);
            tG_mu.emplace_back(out.mu_cell_start[k] + p.higher, col, -area * p.orientation);
            tG_gamma.emplace_back(p.lower, col, area * p.orientation);
            tA_Gamma.emplace_back(col, col, coeff.alpha_Gamma_sq[k][i] * area);
        }
    }
    out.G_omega.resize(omega.num_faces(), n_mu_cells);
    out.G_omega.setFromTriplets(tG_omega.begin(), tG_omega.end());
    out.G_mu.resize(n_mu_cells, n_Gamma);
    out.G_mu.setFromTriplets(tG_mu.begin(), tG_mu.end());
    out.G_gamma.resize(gamma.num_cells(), n_Gamma);
    out.G_gamma.setFromTriplets(tG_gamma.begin(), tG_gamma.end());
    out.A_Gamma.resize(n_Gamma, n_Gamma);
    out.A_Gamma.setFromTriplets(tA_Gamma.begin(), tA_Gamma.end());
    out.A_omega.makeCompressed();
    return out;
}

}  // namespace faultflow
