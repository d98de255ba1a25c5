// Writes the 3D single-fault geometry: (0,100)^3 cut by the plane through
// (0,0,80), (100,0,20), (100,100,20), (0,100,80), with matching triangle
// layers on the plane. Each block is a structured column grid whose layers
// follow the plane; every hexahedron is split into six Kuhn tetrahedra.
//
//   make_fault3d_mesh <out.mesh> [columns=14] [layers_per_block=4]
#include "faultflow/error.hpp"
#include "faultflow/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <tuple>

using namespace faultflow;

namespace {

constexpr double kL = 100.0;

double fault_z(double x) { return 80.0 - 0.6 * x; }

std::tuple<long, long, long> key(const Point& p) {
    return {std::lround(p.x() * 1e6), std::lround(p.y() * 1e6), std::lround(p.z() * 1e6)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fault3d_mesh <out.mesh> [columns] [layers_per_block]\n";
        return 1;
    }
    const int n = argc > 2 ? std::atoi(argv[2]) : 14;
    const int layers = argc > 3 ? std::atoi(argv[3]) : 4;
    if (n < 1 || layers < 1) {
        std::cerr << "columns and layers must be positive\n";
        return 1;
    }

    // upper block (above the plane) first, lower block second
    std::vector<Point> verts;
    std::vector<int> cells;
    const int stride = n + 1;
    for (int block = 0; block < 2; ++block) {
        const int base = static_cast<int>(verts.size());
        for (int l = 0; l <= layers; ++l)
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i) {
                    const double x = kL * i / n, y = kL * j / n, zf = fault_z(x);
                    const double t = static_cast<double>(l) / layers;
                    const double z = block == 0 ? zf + (kL - zf) * t : zf * t;
                    verts.emplace_back(x, y, z);
                }
        auto vid = [&](int i, int j, int l) { return base + (l * stride + j) * stride + i; };
        static const std::array<std::array<int, 3>, 6> perms{
            {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
        for (int l = 0; l < layers; ++l)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    for (const auto& p : perms) {
                        std::array<int, 3> c{i, j, l};
                        cells.push_back(vid(c[0], c[1], c[2]));
                        for (int step = 0; step < 3; ++step) {
                            ++c[p[step]];
                            cells.push_back(vid(c[0], c[1], c[2]));
                        }
                    }
    }

    MixedDimGeometry geo;
    try {
        geo.omega = SimplicialMesh::from_cells(3, std::move(verts), std::move(cells));

        // the plane, split along the same diagonal as the Kuhn faces
        std::vector<Point> pv;
        std::vector<int> tri;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) pv.emplace_back(kL * i / n, kL * j / n, fault_z(kL * i / n));
        auto pid = [&](int i, int j) { return j * stride + i; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                tri.insert(tri.end(), {pid(i, j), pid(i + 1, j), pid(i + 1, j + 1)});
                tri.insert(tri.end(), {pid(i, j), pid(i, j + 1), pid(i + 1, j + 1)});
            }
        geo.gamma = SimplicialMesh::from_cells(2, pv, tri);
        geo.mu_left = SimplicialMesh::from_cells(2, pv, tri);
        geo.mu_right = SimplicialMesh::from_cells(2, pv, tri);

        std::map<std::tuple<long, long, long>, int> layer_cell;
        for (int c = 0; c < geo.gamma.num_cells(); ++c) layer_cell[key(geo.gamma.cell_centroid(c))] = c;

        constexpr double tol = 1e-9;
        for (int f : geo.omega.boundary_faces()) {
            const Point& c = geo.omega.face_centroid(f);
            std::string tag;
            if (std::abs(c.x()) < tol) tag = "xmin";
            else if (std::abs(c.x() - kL) < tol) tag = "xmax";
            else if (std::abs(c.y()) < tol) tag = "ymin";
            else if (std::abs(c.y() - kL) < tol) tag = "ymax";
            else if (std::abs(c.z()) < tol) tag = "zmin";
            else if (std::abs(c.z() - kL) < tol) tag = "zmax";
            if (!tag.empty()) {
                geo.omega.set_boundary_tag(f, tag);
                continue;
            }
            const auto it = layer_cell.find(key(c));
            if (it == layer_cell.end()) throw TopologyError("boundary face " + std::to_string(f) + " is not on the fault");
            const int owner = geo.omega.face_cells(f)[0];
            const bool upper = geo.omega.cell_centroid(owner).z() > fault_z(geo.omega.cell_centroid(owner).x());
            const Side side = upper ? Side::left : Side::right;
            geo.omega.set_boundary_tag(f, interface_tag(side));
            geo.m(side).pairs.push_back({f, it->second, 1});
        }
        for (Side s : kSides) {
            auto& pairs = geo.m(s).pairs;
            std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.lower < b.lower; });
            for (int c = 0; c < geo.gamma.num_cells(); ++c) geo.g(s).pairs.push_back({c, c, 1});
        }
        geo.validate();
        export_mesh(argv[1], geo);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cout << "wrote " << argv[1] << ": " << geo.omega.num_cells() << " tetrahedra, " << geo.gamma.num_cells()
              << " fault triangles, " << 2 * geo.gamma.num_cells() << " damage-layer triangles\n";
    return 0;
}
