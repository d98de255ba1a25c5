#include "doctest.h"

#include "faultflow/error.hpp"
#include "faultflow/mesh.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace faultflow;

TEST_CASE("two-block counts") {
    const auto g = build_two_block_geometry(4, 4);
    CHECK(g.omega.num_cells() == 64);
    CHECK(g.mu_left.num_cells() == 4);
    CHECK(g.mu_right.num_cells() == 4);
    CHECK(g.gamma.num_cells() == 4);
    for (Side s : kSides) {
        CHECK(g.m(s).pairs.size() == 4);
        CHECK(g.g(s).pairs.size() == 4);
    }
    const auto one = build_two_block_geometry(1, 1);
    CHECK(one.omega.num_cells() == 4);
    CHECK(one.gamma.num_cells() == 1);
}

TEST_CASE("53 by 40 grid") {
    const auto g = build_two_block_geometry(53, 40);
    CHECK(g.omega.num_cells() == 8480);
    CHECK(g.gamma.num_cells() == 40);
    CHECK(g.mu_left.num_cells() + g.mu_right.num_cells() == 80);
}

TEST_CASE("two-block geometry invariants") {
    const auto g = build_two_block_geometry(5, 3);
    CHECK_NOTHROW(g.validate());
    CHECK(g.omega.total_measure() == doctest::Approx(2.0).epsilon(1e-12));

    // no face on x = 1 is interior, and each side maps onto the layer cells
    for (int f = 0; f < g.omega.num_faces(); ++f)
        if (std::abs(g.omega.face_centroid(f).x() - 1.0) < 1e-12 &&
            std::abs(g.omega.face_normal(f).x()) > 0.5)
            CHECK(g.omega.is_boundary_face(f));
    for (Side s : kSides) {
        std::set<int> cells;
        for (const auto& p : g.m(s).pairs) {
            const int owner = g.omega.face_cells(p.higher)[0];
            const bool left = g.omega.cell_centroid(owner).x() < 1.0;
            CHECK(left == (s == Side::left));
            cells.insert(p.lower);
        }
        CHECK(static_cast<int>(cells.size()) == g.mu(s).num_cells());
    }
}

TEST_CASE("closed-polytope identity and orientation") {
    const auto g = build_two_block_geometry(3, 2);
    for (const SimplicialMesh* m : {&g.omega, &g.mu_left, &g.gamma}) {
        for (int c = 0; c < m->num_cells(); ++c) {
            Point sum = Point::Zero();
            for (int i = 0; i <= m->dim(); ++i) {
                const int f = m->cell_faces(c)[i];
                sum += m->cell_face_signs(c)[i] * m->face_measure(f) * m->face_normal(f);
            }
            CHECK(sum.norm() < 1e-12);
        }
        for (int f = 0; f < m->num_faces(); ++f) {
            CHECK(std::abs(m->face_normal(f).norm() - 1.0) < 1e-12);
            if (m->is_boundary_face(f)) {
                const Point out = m->face_centroid(f) - m->cell_centroid(m->face_cells(f)[0]);
                CHECK(out.dot(m->face_normal(f)) > 0.0);
            }
        }
    }
}

TEST_CASE("degenerate and malformed cells are rejected") {
    std::vector<Point> v{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK_THROWS_AS(SimplicialMesh::from_cells(2, v, {0, 1, 2}), TopologyError);
    CHECK_THROWS_AS(SimplicialMesh::from_cells(2, v, {0, 1, 7}), TopologyError);
    CHECK_THROWS_AS(SimplicialMesh::from_cells(2, v, {0, 1}), TopologyError);
}

TEST_CASE("layered mesh") {
    const double eps = 1e-2, eta = 5e-3;
    const auto m = build_layered_equidim_mesh(eps, eps, eta);
    CHECK(std::abs(m.total_measure() - 2.0) < 1e-10);
    CHECK_NOTHROW(m.validate());

    const double b[4] = {1 - eps / 2 - eps, 1 - eps / 2, 1 + eps / 2, 1 + eps / 2 + eps};
    const double tol = 1e-12;
    std::set<long> fault_columns;
    for (int c = 0; c < m.num_cells(); ++c) {
        const int region = m.cell_region(c);
        double lo = 1e9, hi = -1e9;
        for (int v : m.cell(c)) {
            lo = std::min(lo, m.vertex(v).x());
            hi = std::max(hi, m.vertex(v).x());
        }
        if (region == 0) CHECK((hi <= b[0] + tol || lo >= b[3] - tol));
        else CHECK((lo >= b[region - 1] - tol && hi <= b[region] + tol));
        if (m.region_names()[region] == "fault") fault_columns.insert(std::lround(lo * 1e9));
    }
    CHECK(fault_columns.size() >= 2);
    CHECK(m.region_index("damage_right") == 3);
    CHECK_THROWS_AS(build_layered_equidim_mesh(eps, eps, 2 * eps), ResolutionError);
}

TEST_CASE("mesh file round trip") {
    const auto g = build_two_block_geometry(4, 4);
    std::stringstream buf;
    write_geometry(buf, g);
    const auto h = read_geometry(buf);
    CHECK(h.omega.num_cells() == g.omega.num_cells());
    CHECK(h.omega.num_faces() == g.omega.num_faces());
    for (int v = 0; v < g.omega.num_vertices(); ++v) CHECK((h.omega.vertex(v) - g.omega.vertex(v)).norm() < 1e-12);
    for (Side s : kSides) {
        CHECK(h.m(s).pairs.size() == g.m(s).pairs.size());
        CHECK(h.omega.faces_with_tag(interface_tag(s)).size() == g.m(s).pairs.size());
    }
    CHECK(h.omega.faces_with_tag("left") == g.omega.faces_with_tag("left"));
}

TEST_CASE("missing fault pair is reported") {
    const auto g = build_two_block_geometry(4, 4);
    std::stringstream buf;
    write_geometry(buf, g);
    std::string text = buf.str();
    const auto section = text.find("[interface g_right");
    const auto line = text.find("p 2 2\n", section);
    REQUIRE(line != std::string::npos);
    text.erase(line, 6);
    std::istringstream in(text);
    try {
        read_geometry(in);
        FAIL("expected a topology error");
    } catch (const TopologyError& e) {
        CHECK(std::string(e.what()).find("fault cell 2") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream in("# comment\n[domain omega dim=2]\nv 0 0\n");
    try {
        read_geometry(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream bad_kind("[domain omega dim=2]\nq 1 2\n");
    CHECK_THROWS_AS(read_geometry(bad_kind), ParseError);
    std::istringstream bad_number("[domain omega dim=2]\nv 0 x 0\n");
    CHECK_THROWS_AS(read_geometry(bad_number), ParseError);
}
