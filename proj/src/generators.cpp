#include "faultflow/error.hpp"
#include "faultflow/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace faultflow {

namespace {

constexpr double kGeomTol = 1e-12;

// Structured triangulation of [x0, x0 + 1] x [0, 1] with nx x ny quads.
void unit_square(double x0, int nx, int ny, bool mirrored, std::vector<Point>& verts,
                 std::vector<int>& cells) {
    const int base = static_cast<int>(verts.size());
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.emplace_back(x0 + static_cast<double>(i) / nx, static_cast<double>(j) / ny, 0.0);
    auto id = [&](int i, int j) { return base + j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
            if (!mirrored) {
                cells.insert(cells.end(), {v00, v10, v11, v00, v11, v01});
            } else {
                cells.insert(cells.end(), {v00, v10, v01, v10, v11, v01});
            }
        }
    }
}

SimplicialMesh vertical_segment(int ny) {
    std::vector<Point> verts;
    std::vector<int> cells;
    for (int j = 0; j <= ny; ++j) verts.emplace_back(1.0, static_cast<double>(j) / ny, 0.0);
    for (int j = 0; j < ny; ++j) cells.insert(cells.end(), {j, j + 1});
    SimplicialMesh mesh = SimplicialMesh::from_cells(1, std::move(verts), std::move(cells));
    for (int f : mesh.boundary_faces())
        mesh.set_boundary_tag(f, mesh.face_centroid(f).y() < 0.5 ? "bottom" : "top");
    return mesh;
}

std::vector<double> uniform_nodes(double a, double b, int n) {
    std::vector<double> x(n + 1);
    for (int k = 0; k <= n; ++k) x[k] = a + (b - a) * k / n;
    x.back() = b;
    return x;
}

// Widths growing geometrically from `start` up to `cap`, rescaled to fill `length`.
std::vector<double> graded_widths(double length, double start, double cap, double ratio) {
    std::vector<double> w;
    double total = 0.0, cur = start;
    while (total < length) {
        cur = std::min(cur * ratio, cap);
        w.push_back(cur);
        total += cur;
    }
    if (w.size() > 1 && total - length > 0.5 * w.back()) {
        total -= w.back();
        w.pop_back();
    }
    for (double& x : w) x *= length / total;
    return w;
}

}  // namespace

MixedDimGeometry build_two_block_geometry(int nx, int ny) {
    if (nx < 1 || ny < 1) throw InputError("build_two_block_geometry requires nx, ny >= 1");

    std::vector<Point> verts;
    std::vector<int> cells;
    unit_square(0.0, nx, ny, false, verts, cells);
    unit_square(1.0, nx, ny, true, verts, cells);

    MixedDimGeometry geo;
    geo.omega = SimplicialMesh::from_cells(2, std::move(verts), std::move(cells));
    geo.mu_left = vertical_segment(ny);
    geo.mu_right = vertical_segment(ny);
    geo.gamma = vertical_segment(ny);

    // Faces on x = 1 from each square, ordered by y, match layer cell j.
    std::array<std::vector<std::pair<double, int>>, 2> interface_faces;
    for (int f : geo.omega.boundary_faces()) {
        const Point& c = geo.omega.face_centroid(f);
        const int owner = geo.omega.face_cells(f)[0];
        const bool left_block = geo.omega.cell_centroid(owner).x() < 1.0;
        if (std::abs(c.x() - 1.0) < kGeomTol) {
            interface_faces[left_block ? 0 : 1].emplace_back(c.y(), f);
        } else if (std::abs(c.x()) < kGeomTol) {
            geo.omega.set_boundary_tag(f, "left");
        } else if (std::abs(c.x() - 2.0) < kGeomTol) {
            geo.omega.set_boundary_tag(f, "right");
        } else if (std::abs(c.y()) < kGeomTol) {
            geo.omega.set_boundary_tag(f, "bottom");
        } else {
            geo.omega.set_boundary_tag(f, "top");
        }
    }
    for (Side s : kSides) {
        auto& faces = interface_faces[static_cast<int>(s)];
        std::sort(faces.begin(), faces.end());
        InterfaceMap& m = geo.m(s);
        InterfaceMap& g = geo.g(s);
        for (int j = 0; j < ny; ++j) {
            geo.omega.set_boundary_tag(faces[j].second, interface_tag(s));
            m.pairs.push_back({faces[j].second, j, 1});
            g.pairs.push_back({j, j, 1});
        }
    }
    return geo;
}

SimplicialMesh build_layered_equidim_mesh(double eps_mu, double eps_gamma, double eta,
                                          const LayeredMeshOptions& options) {
    if (!(eps_mu > 0.0) || !(eps_gamma > 0.0) || !(eta > 0.0))
        throw InputError("layer thicknesses and eta must be positive");
    if (eta > eps_gamma)
        throw ResolutionError("eta = " + std::to_string(eta) +
                              " cannot resolve the fault strip of width " + std::to_string(eps_gamma));
    if (eps_gamma / 2 + eps_mu >= 1.0) throw InputError("strips do not fit in (0,2)x(0,1)");
    if (options.ny < 1 || !(options.matrix_size > 0.0) || !(options.grading >= 1.0))
        throw InputError("invalid layered mesh options");

    const double b1 = 1.0 - eps_gamma / 2 - eps_mu, b2 = 1.0 - eps_gamma / 2;
    const double b3 = 1.0 + eps_gamma / 2, b4 = b3 + eps_mu;
    auto cells_across = [&](double width) { return std::max(1, static_cast<int>(std::ceil(width / eta - 1e-9))); };

    const auto damage_left = uniform_nodes(b1, b2, cells_across(eps_mu));
    const auto fault = uniform_nodes(b2, b3, cells_across(eps_gamma));
    const auto damage_right = uniform_nodes(b3, b4, cells_across(eps_mu));
    const double edge_width = std::min(damage_left[1] - damage_left[0], fault[1] - fault[0]);
    const double cap = std::max(options.matrix_size, edge_width);
    const auto widths = graded_widths(b1, edge_width, cap, options.grading);

    std::vector<double> xs;
    {
        double x = b1;
        std::vector<double> left{b1};
        for (double w : widths) left.push_back(x -= w);
        left.back() = 0.0;
        xs.assign(left.rbegin(), left.rend());
    }
    xs.insert(xs.end(), damage_left.begin() + 1, damage_left.end());
    xs.insert(xs.end(), fault.begin() + 1, fault.end());
    xs.insert(xs.end(), damage_right.begin() + 1, damage_right.end());
    {
        double x = b4;
        for (double w : widths) xs.push_back(x += w);
        xs.back() = 2.0;
    }
    const auto ys = uniform_nodes(0.0, 1.0, options.ny);

    const int nx = static_cast<int>(xs.size()) - 1, ny = options.ny;
    std::vector<Point> verts;
    verts.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) verts.emplace_back(xs[i], ys[j], 0.0);
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny * 6);
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            cells.insert(cells.end(),
                         {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j), id(i + 1, j + 1), id(i, j + 1)});

    SimplicialMesh mesh = SimplicialMesh::from_cells(2, std::move(verts), std::move(cells));

    std::vector<int> regions(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const double x = mesh.cell_centroid(c).x();
        regions[c] = x < b1 ? 0 : x < b2 ? 1 : x < b3 ? 2 : x < b4 ? 3 : 0;
    }
    mesh.set_cell_regions(std::move(regions), {"matrix", "damage_left", "fault", "damage_right"});

    for (int f : mesh.boundary_faces()) {
        const Point& c = mesh.face_centroid(f);
        if (std::abs(c.x()) < kGeomTol) mesh.set_boundary_tag(f, "left");
        else if (std::abs(c.x() - 2.0) < kGeomTol) mesh.set_boundary_tag(f, "right");
        else if (std::abs(c.y()) < kGeomTol) mesh.set_boundary_tag(f, "bottom");
        else mesh.set_boundary_tag(f, "top");
    }
    return mesh;
}

}  // namespace faultflow
