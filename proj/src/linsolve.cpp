#include "faultflow/linsolve.hpp"

#include "faultflow/error.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/UmfPackSupport>

#include <cmath>
#include <numeric>

namespace faultflow {

namespace {

using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;

void append(std::vector<Triplet>& out, const SparseMatrix& m, long row0, long col0, bool transpose = false) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            if (transpose) out.emplace_back(row0 + it.col(), col0 + it.row(), it.value());
            else out.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
        }
}

// Flux offsets (u_Omega, u_mu, u_gamma, u_Gamma, end) within the flux vector.
std::array<long, 5> flux_offsets(const BlockSystem& s) {
    std::array<long, 5> o{};
    o[1] = s.size(Block::u_omega);
    o[2] = o[1] + s.size(Block::u_mu);
    o[3] = o[2] + s.size(Block::u_gamma);
    o[4] = o[3] + s.size(Block::u_Gamma);
    return o;
}

std::array<long, 4> pressure_offsets(const BlockSystem& s) {
    std::array<long, 4> o{};
    o[1] = s.size(Block::p_omega);
    o[2] = o[1] + s.size(Block::p_mu);
    o[3] = o[2] + s.size(Block::p_gamma);
    return o;
}

long pressure_to_global(const BlockSystem& s, long i) {
    const auto o = pressure_offsets(s);
    if (i < o[1]) return s.offset(Block::p_omega) + i;
    if (i < o[2]) return s.offset(Block::p_mu) + (i - o[1]);
    return s.offset(Block::p_gamma) + (i - o[2]);
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

template <class Solver>
void factorize(Solver& solver, const SparseMatrix& m, const char* name) {
    if (m.rows() == 0) return;
    solver.compute(m);
    if (solver.info() != Eigen::Success)
        throw SolverError(std::string("factorisation of ") + name + " failed: block is not positive definite", -1,
                          name);
}

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

Vector pack(const BlockSystem& system, const MixedSolution& sol) {
    Vector x(system.total_size());
    x.segment(system.offset(Block::u_omega), system.size(Block::u_omega)) = sol.u_omega;
    x.segment(system.offset(Block::p_omega), system.size(Block::p_omega)) = sol.p_omega;
    for (int k = 0; k < 2; ++k) {
        x.segment(system.offset(Block::u_mu) + system.mu_face_start[k], sol.u_mu[k].size()) = sol.u_mu[k];
        x.segment(system.offset(Block::p_mu) + system.mu_cell_start[k], sol.p_mu[k].size()) = sol.p_mu[k];
        x.segment(system.offset(Block::u_Gamma) + system.gamma_pair_start[k], sol.u_Gamma[k].size()) = sol.u_Gamma[k];
    }
    x.segment(system.offset(Block::u_gamma), system.size(Block::u_gamma)) = sol.u_gamma;
    x.segment(system.offset(Block::p_gamma), system.size(Block::p_gamma)) = sol.p_gamma;
    return x;
}

MixedSolution unpack(const BlockSystem& system, const Vector& x) {
    if (x.size() != system.total_size()) throw SolverError("solution vector has the wrong length");
    MixedSolution sol;
    sol.u_omega = x.segment(system.offset(Block::u_omega), system.size(Block::u_omega));
    sol.p_omega = x.segment(system.offset(Block::p_omega), system.size(Block::p_omega));
    const std::array<long, 3> faces{system.mu_face_start[0], system.mu_face_start[1], system.size(Block::u_mu)};
    const std::array<long, 3> cells{system.mu_cell_start[0], system.mu_cell_start[1], system.size(Block::p_mu)};
    const std::array<long, 3> pairs{system.gamma_pair_start[0], system.gamma_pair_start[1],
                                    system.size(Block::u_Gamma)};
    for (int k = 0; k < 2; ++k) {
        sol.u_mu[k] = x.segment(system.offset(Block::u_mu) + faces[k], faces[k + 1] - faces[k]);
        sol.p_mu[k] = x.segment(system.offset(Block::p_mu) + cells[k], cells[k + 1] - cells[k]);
        sol.u_Gamma[k] = x.segment(system.offset(Block::u_Gamma) + pairs[k], pairs[k + 1] - pairs[k]);
    }
    sol.u_gamma = x.segment(system.offset(Block::u_gamma), system.size(Block::u_gamma));
    sol.p_gamma = x.segment(system.offset(Block::p_gamma), system.size(Block::p_gamma));
    return sol;
}

SparseMatrix coupling_matrix(const BlockSystem& s) {
    const auto u = flux_offsets(s);
    const auto p = pressure_offsets(s);
    std::vector<Triplet> t;
    append(t, s.B_omega, u[0], p[0]);
    append(t, s.G_omega, u[0], p[1]);
    append(t, s.B_mu, u[1], p[1]);
    append(t, s.B_gamma, u[2], p[2]);
    append(t, s.G_mu, u[3], p[1], true);
    append(t, s.G_gamma, u[3], p[2], true);
    SparseMatrix K(u[4], p[3]);
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

SparseMatrix flux_matrix(const BlockSystem& s) {
    const auto u = flux_offsets(s);
    std::vector<Triplet> t;
    append(t, s.A_omega, u[0], u[0]);
    append(t, s.A_mu, u[1], u[1]);
    append(t, s.A_gamma, u[2], u[2]);
    append(t, s.A_Gamma, u[3], u[3]);
    SparseMatrix A(u[4], u[4]);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

long floating_pressure_dof(const BlockSystem& system) {
    // Constant pressure on a component is in the kernel of K unless some flux
    // row touching it has a nonzero row sum (a pressure boundary face).
    const SparseMatrix K = coupling_matrix(system);
    const Eigen::SparseMatrix<double, Eigen::RowMajor> rows(K);
    std::vector<int> parent(K.cols());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> anchored(K.cols(), 0);
    std::vector<int> cols;
    for (int r = 0; r < rows.outerSize(); ++r) {
        double sum = 0.0, scale = 0.0;
        cols.clear();
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
            if (it.value() == 0.0) continue;
            sum += it.value();
            scale = std::max(scale, std::abs(it.value()));
            cols.push_back(static_cast<int>(it.col()));
        }
        if (cols.empty()) continue;
        const int root = find_root(parent, cols[0]);
        for (std::size_t k = 1; k < cols.size(); ++k) {
            const int other = find_root(parent, cols[k]);
            if (other != root) {
                parent[other] = root;
                anchored[root] = anchored[root] || anchored[other];
            }
        }
        if (std::abs(sum) > 1e-12 * scale) anchored[find_root(parent, cols[0])] = 1;
    }
    for (int i = 0; i < K.cols(); ++i)
        if (!anchored[find_root(parent, i)]) return pressure_to_global(system, i);
    return -1;
}

MixedSolution solve_saddle(const BlockSystem& system, SolveInfo* info) {
    if (const long dof = floating_pressure_dof(system); dof >= 0) {
        const char* block = to_string(system.block_of(dof));
        throw SolverError("singular system: pressure dof " + std::to_string(dof) + " (" + block +
                              ") belongs to a component without pressure boundary data",
                          dof, block);
    }
    const SparseMatrix M = system.global_matrix();
    const Vector b = system.global_rhs();
    Eigen::UmfPackLU<SparseMatrix> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed");
    Vector x = lu.solve(b);
    double res = relative((M * x - b).norm(), b.norm());
    int steps = 0;
    while (res > 1e-12 && steps < 3) {
        const Vector r = b - M * x;
        x += lu.solve(r);
        res = relative((M * x - b).norm(), b.norm());
        ++steps;
    }
    if (!(res <= 1e-9)) throw SolverError("direct solve residual " + std::to_string(res) + " exceeds 1e-9");
    if (info) *info = {res, steps};
    return unpack(system, x);
}

struct PressureSchur::Factors {
    Eigen::SimplicialLLT<SparseMatrix> omega, mu, gamma;
    Vector Gamma_inv;
    std::array<long, 5> u{};
};

PressureSchur::PressureSchur(const BlockSystem& system)
    : system_(&system), K_(coupling_matrix(system)), factors_(std::make_unique<Factors>()) {
    factorize(factors_->omega, system.A_omega, "A_omega");
    factorize(factors_->mu, system.A_mu, "A_mu");
    factorize(factors_->gamma, system.A_gamma, "A_gamma");
    factors_->Gamma_inv = system.A_Gamma.diagonal();
    for (Eigen::Index i = 0; i < factors_->Gamma_inv.size(); ++i) {
        if (!(factors_->Gamma_inv[i] > 0.0))
            throw SolverError("factorisation of A_Gamma failed: non-positive diagonal", i, "A_Gamma");
        factors_->Gamma_inv[i] = 1.0 / factors_->Gamma_inv[i];
    }
    factors_->u = flux_offsets(system);
    offsets_ = pressure_offsets(system);

    Vector g = Vector::Zero(K_.rows());
    g.segment(0, system.g_omega.size()) = system.g_omega;
    g.segment(factors_->u[1], system.g_mu.size()) = system.g_mu;
    g.segment(factors_->u[2], system.g_gamma.size()) = system.g_gamma;
    Vector f(K_.cols());
    f << system.f_omega, system.f_mu, system.f_gamma;
    rhs_ = K_.transpose() * solve_flux(g) - f;
}

PressureSchur::~PressureSchur() = default;
PressureSchur::PressureSchur(PressureSchur&&) noexcept = default;
PressureSchur& PressureSchur::operator=(PressureSchur&&) noexcept = default;

Vector PressureSchur::solve_flux(const Vector& rhs) const {
    const auto& u = factors_->u;
    Vector out(rhs.size());
    auto part = [&](const auto& solver, int b) {
        const long n = u[b + 1] - u[b];
        if (n > 0) out.segment(u[b], n) = solver.solve(rhs.segment(u[b], n));
    };
    part(factors_->omega, 0);
    part(factors_->mu, 1);
    part(factors_->gamma, 2);
    out.segment(u[3], u[4] - u[3]) = factors_->Gamma_inv.cwiseProduct(rhs.segment(u[3], u[4] - u[3]));
    return out;
}

Vector PressureSchur::apply(const Vector& p) const { return K_.transpose() * solve_flux(K_ * p); }

SchurBlocks PressureSchur::dense_blocks() const {
    const long n = size();
    Eigen::MatrixXd P(n, n);
    for (long j = 0; j < n; ++j) P.col(j) = apply(Vector::Unit(n, j));
    const auto& o = offsets_;
    SchurBlocks s;
    s.S_omega = P.block(o[0], o[0], o[1] - o[0], o[1] - o[0]);
    s.S_mu = P.block(o[1], o[1], o[2] - o[1], o[2] - o[1]);
    s.S_gamma = P.block(o[2], o[2], o[3] - o[2], o[3] - o[2]);
    s.C_omega = P.block(o[0], o[1], o[1] - o[0], o[2] - o[1]);
    s.C_mu = P.block(o[1], o[2], o[2] - o[1], o[3] - o[2]);
    s.r_omega = rhs_.segment(o[0], o[1] - o[0]);
    s.r_mu = rhs_.segment(o[1], o[2] - o[1]);
    s.r_gamma = rhs_.segment(o[2], o[3] - o[2]);
    return s;
}

PressureSchur build_pressure_schur(const BlockSystem& system) { return PressureSchur(system); }

Vector solve_schur(const PressureSchur& schur, SolveInfo* info, int max_iterations) {
    const Vector& b = schur.rhs();
    const double bnorm = b.norm();
    Vector x = Vector::Zero(schur.size());
    if (bnorm == 0.0) {
        if (info) *info = {0.0, 0};
        return x;
    }

    const SparseMatrix& K = schur.coupling();
    const Vector d = flux_matrix(schur.system()).diagonal();
    const SparseMatrix lumped = K.transpose() * d.cwiseInverse().asDiagonal() * K;
    Eigen::SimplicialLLT<SparseMatrix> precond;
    factorize(precond, lumped, "preconditioner");

    int iterations = 0;
    double res = 1.0;
    // Restarted from the current iterate so the recursive residual cannot drift.
    for (int restart = 0; restart < 4 && iterations < max_iterations; ++restart) {
        Vector r = b - schur.apply(x);
        res = r.norm() / bnorm;
        if (res <= 1e-12) break;
        Vector z = precond.solve(r);
        Vector p = z;
        double rz = r.dot(z);
        while (iterations < max_iterations) {
            const Vector Ap = schur.apply(p);
            const double alpha = rz / p.dot(Ap);
            x += alpha * p;
            r -= alpha * Ap;
            ++iterations;
            if (r.norm() <= 1e-12 * bnorm) break;
            z = precond.solve(r);
            const double rz_next = r.dot(z);
            p = z + (rz_next / rz) * p;
            rz = rz_next;
        }
    }
    res = (b - schur.apply(x)).norm() / bnorm;
    if (info) *info = {res, iterations};
    if (!(res <= 1e-9))
        throw SolverError("conjugate gradients stopped after " + std::to_string(iterations) +
                          " iterations with relative residual " + std::to_string(res));
    return x;
}

MixedSolution reconstruct_velocity(const PressureSchur& schur, const Vector& pressures) {
    const BlockSystem& s = schur.system();
    if (pressures.size() != schur.size()) throw SolverError("pressure vector has the wrong length");
    Vector g = Vector::Zero(schur.coupling().rows());
    const auto u = flux_offsets(s);
    g.segment(0, s.g_omega.size()) = s.g_omega;
    g.segment(u[1], s.g_mu.size()) = s.g_mu;
    g.segment(u[2], s.g_gamma.size()) = s.g_gamma;
    const Vector flux = schur.solve_flux(g - schur.coupling() * pressures);

    const auto o = schur.offsets();
    Vector x(s.total_size());
    x.segment(s.offset(Block::u_omega), u[1]) = flux.segment(0, u[1]);
    x.segment(s.offset(Block::u_mu), u[2] - u[1]) = flux.segment(u[1], u[2] - u[1]);
    x.segment(s.offset(Block::u_gamma), u[3] - u[2]) = flux.segment(u[2], u[3] - u[2]);
    x.segment(s.offset(Block::u_Gamma), u[4] - u[3]) = flux.segment(u[3], u[4] - u[3]);
    x.segment(s.offset(Block::p_omega), o[1]) = pressures.segment(0, o[1]);
    x.segment(s.offset(Block::p_mu), o[2] - o[1]) = pressures.segment(o[1], o[2] - o[1]);
    x.segment(s.offset(Block::p_gamma), o[3] - o[2]) = pressures.segment(o[2], o[3] - o[2]);
    return unpack(s, x);
}

MixedSolution reconstruct_velocity(const BlockSystem& system, const Vector& pressures) {
    return reconstruct_velocity(PressureSchur(system), pressures);
}

SpdReport check_schur_spd(const BlockSystem& system, long dense_limit) {
    SpdReport report;
    PressureSchur schur(system);  // throws if an A block is not SPD
    const auto o = schur.offsets();

    if (schur.size() <= dense_limit) {
        report.method = "dense Cholesky";
        const SchurBlocks blocks = schur.dense_blocks();
        auto spd = [](const Eigen::MatrixXd& S) {
            if (S.rows() == 0) return true;
            if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * S.cwiseAbs().maxCoeff()) return false;
            Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (S + S.transpose()));
            return llt.info() == Eigen::Success;
        };
        report.omega = spd(blocks.S_omega);
        report.mu = spd(blocks.S_mu);
        report.gamma = spd(blocks.S_gamma);
        return report;
    }

    report.method = "sparse certificate";
    auto certify = [&](int b) {
        const long n = o[b + 1] - o[b];
        if (n == 0) return true;
        const SparseMatrix Kb = schur.coupling().middleCols(o[b], n);
        const SparseMatrix gram = Kb.transpose() * Kb;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(gram);
        if (ldlt.info() != Eigen::Success) return false;
        const Vector d = ldlt.vectorD();
        return d.minCoeff() > 1e-13 * d.maxCoeff();
    };
    report.omega = certify(0);
    report.mu = certify(1);
    report.gamma = certify(2);
    return report;
}

double trace_pressure(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const MixedSolution& sol,
                      int omega_face) {
    const SimplicialMesh& mesh = geometry.omega;
    const int cell = mesh.face_cells(omega_face)[0];
    const auto faces = mesh.cell_faces(cell);
    const auto signs = mesh.cell_face_signs(cell);
    const LocalMatrix local = rt0_local_mass(mesh.cell_geometry(cell), coeff.alpha_omega_sq[cell]);
    for (int i = 0; i <= mesh.dim(); ++i) {
        if (faces[i] != omega_face) continue;
        double lambda = signs[i] * sol.p_omega[cell];
        for (int j = 0; j <= mesh.dim(); ++j) lambda -= local(i, j) * sol.u_omega[faces[j]];
        return lambda;
    }
    throw InputError("face " + std::to_string(omega_face) + " is not a face of its owner cell");
}

Diagnostics diagnose(const MixedDimGeometry& geometry, const CoefficientSet& coeff, const BlockSystem& system,
                     const MixedSolution& sol) {
    Diagnostics d;
    const SparseMatrix M = system.global_matrix();
    const Vector b = system.global_rhs();
    const Vector x = pack(system, sol);
    const Vector r = M * x - b;
    d.residual = relative(r.norm(), b.norm());

    for (Block blk : {Block::p_omega, Block::p_mu, Block::p_gamma}) {
        for (long i = system.offset(blk); i < system.offset(blk) + system.size(blk); ++i) {
            double scale = 0.0;
            for (SparseMatrix::InnerIterator it(M, i); it; ++it) scale = std::max(scale, std::abs(it.value()));
            if (scale > 0.0) d.p0_residual = std::max(d.p0_residual, std::abs(r[i]) / scale);
        }
    }

    double outflow = 0.0;
    const SimplicialMesh& omega = geometry.omega;
    for (int f : omega.boundary_faces()) {
        const auto& tag = omega.boundary_tag(f);
        if (tag != interface_tag(Side::left) && tag != interface_tag(Side::right)) outflow += sol.u_omega[f];
    }
    for (Side s : kSides)
        for (int f : geometry.mu(s).boundary_faces()) outflow += sol.u_mu[static_cast<int>(s)][f];
    for (int f : geometry.gamma.boundary_faces()) outflow += sol.u_gamma[f];
    d.balance = std::abs(outflow - system.source_integral);

    double pmax = 1.0;
    pmax = std::max(pmax, sol.p_omega.cwiseAbs().maxCoeff());
    for (int k = 0; k < 2; ++k)
        if (sol.p_mu[k].size()) pmax = std::max(pmax, sol.p_mu[k].cwiseAbs().maxCoeff());
    if (sol.p_gamma.size()) pmax = std::max(pmax, sol.p_gamma.cwiseAbs().maxCoeff());

    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        const auto& m_pairs = geometry.m(s).pairs;
        for (std::size_t i = 0; i < m_pairs.size(); ++i) {
            const int f = m_pairs[i].higher;
            const double lambda = trace_pressure(geometry, coeff, sol, f);
            const double law = coeff.alpha_M_sq[k][i] * sol.u_omega[f] / omega.face_measure(f) +
                               m_pairs[i].orientation * sol.p_mu[k][m_pairs[i].lower] - lambda;
            d.m_law = std::max(d.m_law, std::abs(law) / pmax);
        }
        const auto& g_pairs = geometry.g(s).pairs;
        for (std::size_t i = 0; i < g_pairs.size(); ++i) {
            const double law = coeff.alpha_Gamma_sq[k][i] * sol.u_Gamma[k][i] + sol.p_gamma[g_pairs[i].lower] -
                               sol.p_mu[k][g_pairs[i].higher];
            d.gamma_law = std::max(d.gamma_law, std::abs(law) / pmax);
        }
    }
    return d;
}

}  // namespace faultflow
