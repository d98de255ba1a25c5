#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "faultflow/error.hpp"

#include <random>

using namespace faultflow;

namespace {

double asymmetry(const SparseMatrix& m) {
    const SparseMatrix d = m - SparseMatrix(m.transpose());
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    return worst / scale;
}

CoefficientSet random_coefficients(const MixedDimGeometry& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto draw = [&] { return std::pow(10.0, u(rng)); };
    CoefficientSet c = CoefficientSet::uniform(g, 1, 1, 1, 1, 1);
    for (auto& t : c.alpha_omega_sq) t = draw() * Tensor::Identity();
    for (int k = 0; k < 2; ++k) {
        for (auto& a : c.alpha_mu_sq[k]) a = draw();
        for (auto& a : c.alpha_M_sq[k]) a = draw();
        for (auto& a : c.alpha_Gamma_sq[k]) a = draw();
    }
    for (auto& a : c.alpha_gamma_sq) a = draw();
    return c;
}

}  // namespace

TEST_CASE("minimal geometry matches dense hand assembly") {
    const auto g = build_two_block_geometry(1, 1);
    const double aO = 1.7, amu = 0.6, aM = 2.5, ag = 3.1, aG = 0.8;
    const auto coeff = CoefficientSet::uniform(g, aO, amu, aM, ag, aG);
    const auto bc = fixture::pressure_everywhere(g, [](const Point&) { return 0.0; });
    const auto sys = assemble(g, coeff, bc, {});
    const Eigen::MatrixXd lib = Eigen::MatrixXd(sys.global_matrix());
    const auto ref = oracle::hand_assemble(g, aO, amu, aM, ag, aG);
    REQUIRE(lib.rows() == ref.M.rows());
    for (int b = 0; b < 8; ++b) CHECK(sys.offsets[b] == ref.off[b]);
    CHECK((lib - ref.M).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("assembled systems are symmetric") {
    std::mt19937 rng(11);
    const auto g = build_two_block_geometry(4, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto coeff = random_coefficients(g, rng);
        BoundaryConditions bc = fixture::cross_flow(g, 0.0, 1.0);
        add_flux(bc.omega, g.omega, "top", [](const Point& x) { return x.x() - 1.0; });
        SourceField src;
        src.omega.assign(g.omega.num_cells(), 0.5);
        const auto sys = assemble(g, coeff, bc, src);
        CHECK(asymmetry(sys.global_matrix()) <= 1e-12);
    }
}

TEST_CASE("serial and parallel assembly agree") {
    std::mt19937 rng(5);
    const auto g = build_two_block_geometry(5, 4);
    const auto coeff = random_coefficients(g, rng);
    const auto bc = fixture::cross_flow(g, 0.0, 1.0);
    const auto a = assemble(g, coeff, bc, {}, Execution::serial).global_matrix();
    const auto b = assemble(g, coeff, bc, {}, Execution::parallel).global_matrix();
    CHECK(SparseMatrix(a - b).norm() == 0.0);
}

TEST_CASE("boundary data enters the right-hand side") {
    const auto g = build_two_block_geometry(4, 4);
    const auto coeff = fixture::series(g, 1.0, 1.0);
    BoundaryConditions bc = fixture::cross_flow(g, 3.0, 5.0);
    // a top face away from the pressure boundary so elimination leaves those rows alone
    int top = -1;
    for (int f : g.omega.faces_with_tag("top"))
        if (std::abs(g.omega.face_centroid(f).x() - 0.5) < 0.2) top = f;
    REQUIRE(top >= 0);
    bc.omega.flux[top] = 2.0;
    SourceField src;
    src.gamma.assign(g.gamma.num_cells(), 4.0);
    const auto sys = assemble(g, coeff, bc, src);
    for (int f : g.omega.faces_with_tag("left")) CHECK(sys.g_omega[f] == -3.0);
    for (int f : g.omega.faces_with_tag("right")) CHECK(sys.g_omega[f] == -5.0);
    CHECK(sys.g_omega[top] == doctest::Approx(2.0 * g.omega.face_measure(top)));
    CHECK(sys.fixed_omega[top]);
    for (int f : g.omega.faces_with_tag("bottom")) CHECK(sys.fixed_omega[f]);
    for (int c = 0; c < g.gamma.num_cells(); ++c) CHECK(sys.f_gamma[c] == doctest::Approx(-4.0 * g.gamma.cell_measure(c)));
    CHECK(sys.source_integral == doctest::Approx(4.0));
}

TEST_CASE("coupling entries") {
    const auto g = build_two_block_geometry(3, 3);
    const auto sys = assemble(g, CoefficientSet::uniform(g, 1, 1, 2.0, 1, 5.0), fixture::cross_flow(g, 0, 1), {});
    CHECK(sys.G_omega.nonZeros() == 6);
    CHECK(SparseMatrix(sys.G_omega).coeffs().cwiseAbs().minCoeff() == 1.0);
    const double h = 1.0 / 3.0;
    for (int k = 0; k < sys.G_mu.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.G_mu, k); it; ++it) CHECK(it.value() == doctest::Approx(-h));
    for (int k = 0; k < sys.G_gamma.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.G_gamma, k); it; ++it) CHECK(it.value() == doctest::Approx(h));
    CHECK(Eigen::VectorXd(sys.A_Gamma.diagonal()).isApprox(Eigen::VectorXd::Constant(6, 5.0 * h)));
    // trace term on an M face adds alpha_M^2 / |f|
    const int f = g.m_left.pairs[0].higher;
    const auto base = assemble(g, CoefficientSet::uniform(g, 1, 1, 1e-300, 1, 5.0), fixture::cross_flow(g, 0, 1), {});
    CHECK(sys.A_omega.coeff(f, f) - base.A_omega.coeff(f, f) == doctest::Approx(2.0 / h));
}

TEST_CASE("invalid input is rejected") {
    const auto g = build_two_block_geometry(2, 2);
    auto coeff = fixture::series(g, 1.0, 1.0);
    BoundaryConditions interior;
    for (int f = 0; f < g.omega.num_faces(); ++f)
        if (!g.omega.is_boundary_face(f)) {
            interior.omega.pressure[f] = 1.0;
            break;
        }
    CHECK_THROWS_AS(assemble(g, coeff, interior, {}), InputError);

    BoundaryConditions on_m;
    on_m.omega.pressure[g.m_right.pairs[0].higher] = 1.0;
    CHECK_THROWS_AS(assemble(g, coeff, on_m, {}), InputError);

    BoundaryConditions both = fixture::cross_flow(g, 0, 1);
    both.omega.flux[g.omega.faces_with_tag("left")[0]] = 1.0;
    CHECK_THROWS_AS(assemble(g, coeff, both, {}), InputError);

    auto negative = coeff;
    negative.alpha_M_sq[1][0] = -1.0;
    CHECK_THROWS_AS(assemble(g, negative, fixture::cross_flow(g, 0, 1), {}), InputError);

    auto missing = coeff;
    missing.alpha_gamma_sq.pop_back();
    CHECK_THROWS_AS(assemble(g, missing, fixture::cross_flow(g, 0, 1), {}), InputError);
}
