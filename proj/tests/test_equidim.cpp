#include "doctest.h"

#include "faultflow/equidim.hpp"
#include "faultflow/error.hpp"

#include <cmath>

using namespace faultflow;

namespace {

ParameterTable table(double omega, double mu, double gamma) {
    return {{"omega", PiecewiseField::constant(omega)},
            {"mu", PiecewiseField::constant(mu)},
            {"gamma", PiecewiseField::constant(gamma)}};
}

DomainBoundary left_right(const SimplicialMesh& m, double pl, double pr) {
    DomainBoundary bc;
    add_pressure(bc, m, "left", [&](const Point&) { return pl; });
    add_pressure(bc, m, "right", [&](const Point&) { return pr; });
    return bc;
}

double region_measure(const SimplicialMesh& m, const std::string& name) {
    const int r = m.region_index(name);
    double a = 0.0;
    for (int c = 0; c < m.num_cells(); ++c)
        if (m.cell_region(c) == r) a += m.cell_measure(c);
    return a;
}

const LayeredMeshOptions kSmall{8, 0.1, 1.3};

}  // namespace

TEST_CASE("sigma from alpha along a normal in x") {
    const Tensor s = sigma_from_alpha(1.0, 1e4, 1e-2, Point(1, 0, 0));
    CHECK((s - 100.0 * Tensor::Identity()).norm() < 1e-10);

    const double eps = 0.05;
    CHECK((sigma_from_alpha(eps, 1.0 / eps, eps, Point(1, 0, 0)) - Tensor::Identity()).norm() < 1e-14);

    const Tensor t = sigma_from_alpha(2.0, 3.0, 0.5, Point(0, 1, 0));
    CHECK(t(1, 1) == doctest::Approx(1.5));
    CHECK(t(0, 0) == doctest::Approx(4.0));
    CHECK(std::abs(t(0, 1)) < 1e-15);

    CHECK_THROWS_AS(sigma_from_alpha(1, 1, 1, Point(1, 1, 0)), InputError);
}

TEST_CASE("both maps give the matrix value for the mode") {
    for (double k : {1e-3, 0.5, 7.0}) {
        const double eps = 0.02;
        const auto lit = layer_alphas(k, eps, CoefficientMode::literal);
        const Tensor a = sigma_from_alpha(lit.tangential_sq, lit.normal_sq, eps, Point(1, 0, 0));
        CHECK((a - k * Tensor::Identity()).norm() <= 1e-12 * k);
        const auto perm = layer_alphas(k, eps, CoefficientMode::permeability);
        const Tensor b = sigma_from_reduced(perm.tangential_sq, perm.normal_sq, eps, Point(1, 0, 0));
        CHECK((b - Tensor::Identity() / k).norm() <= 1e-12 / k);
    }
}

TEST_CASE("equidim coefficients follow the cell regions") {
    const auto m = build_layered_equidim_mesh(0.1, 0.05, 0.05, kSmall);
    const auto coeff = equidim_coefficients(m, table(1.0, 2.0, 5.0), CoefficientMode::literal, 0.1, 0.05);
    REQUIRE(coeff.sigma_sq.size() == static_cast<std::size_t>(m.num_cells()));
    const double expect[] = {1.0, 2.0, 5.0, 2.0};
    const char* names[] = {"matrix", "damage_left", "fault", "damage_right"};
    for (int i = 0; i < 4; ++i) {
        const int r = m.region_index(names[i]);
        for (int c = 0; c < m.num_cells(); ++c)
            if (m.cell_region(c) == r) CHECK((coeff.sigma_sq[c] - expect[i] * Tensor::Identity()).norm() < 1e-12);
    }
}

TEST_CASE("linear pressure in x on the layered mesh") {
    const auto m = build_layered_equidim_mesh(0.1, 0.05, 0.05, kSmall);
    const auto coeff = equidim_coefficients(m, table(1, 1, 1), CoefficientMode::permeability, 0.1, 0.05);
    const auto sol = solve_equidim(m, coeff, left_right(m, 1.0, 0.0));
    for (int c = 0; c < m.num_cells(); ++c) CHECK(std::abs(sol.p[c] - (1.0 - m.cell_centroid(c).x() / 2)) < 1e-10);
    for (const auto& v : rt0_cell_velocities(m, sol.u)) {
        CHECK(std::abs(v.x() - 0.5) < 1e-10);
        CHECK(std::abs(v.y()) < 1e-10);
    }
    CHECK(sol.max_conservation_residual <= 1e-10);
}

TEST_CASE("three strips in series") {
    const double eps_mu = 0.1, eps_gamma = 0.05;
    const auto m = build_layered_equidim_mesh(eps_mu, eps_gamma, 0.025, kSmall);
    const auto coeff = equidim_coefficients(m, table(1.0, 2.0, 5.0), CoefficientMode::literal, eps_mu, eps_gamma);
    const double resistance = 1.0 * region_measure(m, "matrix") +
                              2.0 * (region_measure(m, "damage_left") + region_measure(m, "damage_right")) +
                              5.0 * region_measure(m, "fault");
    CHECK(resistance == doctest::Approx(1.75 + 0.4 + 0.25));
    const auto sol = solve_equidim(m, coeff, left_right(m, 0.0, 1.0));
    for (const auto& v : rt0_cell_velocities(m, sol.u)) CHECK(std::abs(v.x() + 1.0 / resistance) < 1e-9);
    CHECK(sol.max_conservation_residual <= 1e-10);
}

TEST_CASE("constant pressure gives zero velocity") {
    const auto m = build_layered_equidim_mesh(0.1, 0.05, 0.05, kSmall);
    const auto coeff = equidim_coefficients(m, table(3, 0.2, 1e-3), CoefficientMode::permeability, 0.1, 0.05);
    const auto sol = solve_equidim(m, coeff, left_right(m, 2.0, 2.0));
    CHECK(sol.u.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((sol.p.array() - 2.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("sources are balanced cell by cell") {
    const auto m = build_layered_equidim_mesh(0.1, 0.05, 0.05, kSmall);
    const auto coeff = equidim_coefficients(m, table(1, 0.5, 2), CoefficientMode::permeability, 0.1, 0.05);
    std::vector<double> q(m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c) q[c] = std::sin(3.0 * m.cell_centroid(c).y());
    const auto sol = solve_equidim(m, coeff, left_right(m, 0.0, 1.0), q);
    CHECK(sol.max_conservation_residual <= 1e-10);
    CHECK(sol.relative_residual <= 1e-9);
}

TEST_CASE("equidim errors") {
    const auto m = build_layered_equidim_mesh(0.1, 0.05, 0.05, kSmall);
    const auto coeff = equidim_coefficients(m, table(1, 1, 1), CoefficientMode::literal, 0.1, 0.05);
    CHECK_THROWS_AS(solve_equidim(m, coeff, DomainBoundary{}), SolverError);
    CHECK_THROWS_AS(build_layered_equidim_mesh(0.1, 0.05, 0.06, kSmall), ResolutionError);
    CHECK_THROWS_AS(equidim_coefficients(m, {{"omega", PiecewiseField::constant(1)}}, CoefficientMode::literal, 0.1, 0.05),
                    InputError);
}
