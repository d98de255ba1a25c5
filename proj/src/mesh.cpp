#include "faultflow/mesh.hpp"

#include "faultflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace faultflow {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// k-dimensional measure of the simplex spanned by `pts`.
double simplex_measure(std::span<const Point> pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    if (k <= 0) return 1.0;
    Eigen::Matrix<double, 3, Eigen::Dynamic> edges(3, k);
    for (int j = 0; j < k; ++j) edges.col(j) = pts[j + 1] - pts[0];
    const double gram = (edges.transpose() * edges).determinant();
    return std::sqrt(std::max(gram, 0.0)) / factorial(k);
}

struct FaceKey {
    std::array<int, 3> v{-1, -1, -1};
    bool operator==(const FaceKey&) const = default;
};

struct FaceKeyHash {
    std::size_t operator()(const FaceKey& k) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int x : k.v) {
            h ^= static_cast<std::size_t>(x + 1);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

const std::string kEmpty;

}  // namespace

double CellGeometry::measure() const {
    return simplex_measure(std::span<const Point>(vertices.data(), dim + 1));
}

double CellGeometry::diameter() const {
    double d = 0.0;
    for (int i = 0; i <= dim; ++i)
        for (int j = i + 1; j <= dim; ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
    return d;
}

Point CellGeometry::centroid() const {
    Point c = Point::Zero();
    for (int i = 0; i <= dim; ++i) c += vertices[i];
    return c / (dim + 1);
}

double CellGeometry::face_measure(int i) const {
    std::array<Point, 3> pts;
    int n = 0;
    for (int k = 0; k <= dim; ++k)
        if (k != i) pts[n++] = vertices[k];
    return simplex_measure(std::span<const Point>(pts.data(), n));
}

Point CellGeometry::outward_normal(int i) const {
    std::array<Point, 3> face;
    int n = 0;
    for (int k = 0; k <= dim; ++k)
        if (k != i) face[n++] = vertices[k];
    Point w = face[0] - vertices[i];
    if (n > 1) {
        Eigen::Matrix<double, 3, Eigen::Dynamic> t(3, n - 1);
        for (int j = 1; j < n; ++j) t.col(j - 1) = face[j] - face[0];
        const Eigen::VectorXd coef = (t.transpose() * t).ldlt().solve(t.transpose() * w);
        w -= t * coef;
    }
    return w.normalized();
}

SimplicialMesh SimplicialMesh::from_cells(int dim, std::vector<Point> vertices,
                                          std::vector<int> cell_vertices) {
    if (dim < 1 || dim > 3) throw TopologyError("mesh dimension must be 1, 2 or 3");
    const int nv = dim + 1;
    if (cell_vertices.size() % nv != 0)
        throw TopologyError("cell connectivity length is not a multiple of dim+1");

    SimplicialMesh mesh;
    mesh.dim_ = dim;
    mesh.vertices_ = std::move(vertices);
    mesh.cells_ = std::move(cell_vertices);
    const int num_cells = static_cast<int>(mesh.cells_.size() / nv);
    const int num_vertices = mesh.num_vertices();

    for (std::size_t k = 0; k < mesh.cells_.size(); ++k) {
        const int v = mesh.cells_[k];
        if (v < 0 || v >= num_vertices)
            throw TopologyError("cell " + std::to_string(k / nv) + " references vertex " +
                                std::to_string(v) + " out of range");
    }

    mesh.cell_faces_.resize(mesh.cells_.size());
    mesh.cell_face_signs_.resize(mesh.cells_.size());
    mesh.cell_measures_.resize(num_cells);
    mesh.cell_centroids_.resize(num_cells);

    std::unordered_map<FaceKey, int, FaceKeyHash> lookup;
    lookup.reserve(static_cast<std::size_t>(num_cells) * nv);

    for (int c = 0; c < num_cells; ++c) {
        const CellGeometry geo = [&] {
            CellGeometry g;
            g.dim = dim;
            for (int i = 0; i < nv; ++i) g.vertices[i] = mesh.vertices_[mesh.cells_[c * nv + i]];
            return g;
        }();
        const double vol = geo.measure();
        const double diam = geo.diameter();
        if (!(vol > 1e-14 * std::pow(diam, dim)))
            throw TopologyError("cell " + std::to_string(c) + " is degenerate");
        mesh.cell_measures_[c] = vol;
        mesh.cell_centroids_[c] = geo.centroid();

        for (int i = 0; i < nv; ++i) {
            FaceKey key;
            std::array<int, 3> ordered{-1, -1, -1};
            int n = 0;
            for (int k = 0; k < nv; ++k)
                if (k != i) ordered[n++] = mesh.cells_[c * nv + k];
            key.v = ordered;
            std::sort(key.v.begin(), key.v.begin() + n);
            auto [it, inserted] = lookup.try_emplace(key, mesh.num_faces());
            const int f = it->second;
            if (inserted) {
                for (int k = 0; k < n; ++k) mesh.faces_.push_back(ordered[k]);
                mesh.face_cells_.push_back({c, -1});
                mesh.face_measures_.push_back(geo.face_measure(i));
                mesh.face_normals_.push_back(geo.outward_normal(i));
                Point fc = Point::Zero();
                for (int k = 0; k < n; ++k) fc += mesh.vertices_[ordered[k]];
                mesh.face_centroids_.push_back(fc / n);
                mesh.cell_face_signs_[c * nv + i] = 1;
            } else {
                auto& fc = mesh.face_cells_[f];
                if (fc[1] >= 0 || fc[0] == c)
                    throw TopologyError("face " + std::to_string(f) +
                                        " is shared by more than two cells (cell " +
                                        std::to_string(c) + ")");
                fc[1] = c;
                mesh.cell_face_signs_[c * nv + i] = -1;
            }
            mesh.cell_faces_[c * nv + i] = f;
        }
    }
    return mesh;
}

std::vector<int> SimplicialMesh::boundary_faces() const {
    std::vector<int> out;
    for (int f = 0; f < num_faces(); ++f)
        if (is_boundary_face(f)) out.push_back(f);
    return out;
}

CellGeometry SimplicialMesh::cell_geometry(int c) const {
    CellGeometry g;
    g.dim = dim_;
    const auto verts = cell(c);
    const auto signs = cell_face_signs(c);
    for (int i = 0; i <= dim_; ++i) {
        g.vertices[i] = vertices_[verts[i]];
        g.signs[i] = signs[i];
    }
    return g;
}

double SimplicialMesh::total_measure() const {
    return std::accumulate(cell_measures_.begin(), cell_measures_.end(), 0.0);
}

double SimplicialMesh::max_cell_diameter() const {
    double d = 0.0;
    for (int c = 0; c < num_cells(); ++c) d = std::max(d, cell_geometry(c).diameter());
    return d;
}

double SimplicialMesh::length_scale() const {
    if (vertices_.empty()) return 1.0;
    Point lo = vertices_.front(), hi = vertices_.front();
    for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return std::max(1.0, (hi - lo).norm());
}

void SimplicialMesh::set_boundary_tag(int f, std::string label) {
    if (f < 0 || f >= num_faces()) throw TopologyError("tag on face " + std::to_string(f) + " out of range");
    if (!is_boundary_face(f))
        throw TopologyError("tag '" + label + "' on interior face " + std::to_string(f));
    boundary_tags_[f] = std::move(label);
}

const std::string& SimplicialMesh::boundary_tag(int f) const {
    auto it = boundary_tags_.find(f);
    return it == boundary_tags_.end() ? kEmpty : it->second;
}

std::vector<int> SimplicialMesh::faces_with_tag(const std::string& label) const {
    std::vector<int> out;
    for (const auto& [f, tag] : boundary_tags_)
        if (tag == label) out.push_back(f);
    return out;
}

void SimplicialMesh::set_cell_regions(std::vector<int> regions, std::vector<std::string> names) {
    if (static_cast<int>(regions.size()) != num_cells())
        throw TopologyError("region list length does not match cell count");
    for (int r : regions)
        if (r < 0 || r >= static_cast<int>(names.size())) throw TopologyError("region index out of range");
    cell_regions_ = std::move(regions);
    region_names_ = std::move(names);
}

int SimplicialMesh::region_index(const std::string& name) const {
    auto it = std::find(region_names_.begin(), region_names_.end(), name);
    return it == region_names_.end() ? -1 : static_cast<int>(it - region_names_.begin());
}

void SimplicialMesh::validate() const {
    const double tol = 1e-12 * length_scale();
    for (int f = 0; f < num_faces(); ++f) {
        if (std::abs(face_normals_[f].norm() - 1.0) > 1e-12)
            throw TopologyError("face " + std::to_string(f) + " has a non-unit normal");
        const auto [a, b] = face_cells_[f];
        int sa = 0, sb = 0;
        for (int i = 0; i <= dim_; ++i) {
            if (cell_faces(a)[i] == f) sa = cell_face_signs(a)[i];
            if (b >= 0 && cell_faces(b)[i] == f) sb = cell_face_signs(b)[i];
        }
        if (sa != 1 || (b >= 0 && sb != -1))
            throw TopologyError("face " + std::to_string(f) + " has inconsistent orientation");
    }
    for (int c = 0; c < num_cells(); ++c) {
        if (!(cell_measures_[c] > 0.0)) throw TopologyError("cell " + std::to_string(c) + " has no volume");
        Point sum = Point::Zero();
        double scale = 0.0;
        for (int i = 0; i <= dim_; ++i) {
            const int f = cell_faces(c)[i];
            sum += cell_face_signs(c)[i] * face_measures_[f] * face_normals_[f];
            scale = std::max(scale, face_measures_[f]);
        }
        if (sum.norm() > tol * std::max(1.0, scale))
            throw TopologyError("cell " + std::to_string(c) + " violates the closed-polytope identity");
    }
}

const char* to_string(Side side) { return side == Side::left ? "left" : "right"; }

std::string interface_tag(Side side) { return std::string("interface_") + to_string(side); }

void MixedDimGeometry::validate() const {
    omega.validate();
    mu_left.validate();
    mu_right.validate();
    gamma.validate();

    const int d = omega.dim();
    for (const SimplicialMesh* layer : {&mu_left, &mu_right, &gamma})
        if (layer->dim() != d - 1) throw TopologyError("layer meshes must have dimension omega.dim - 1");
    const int n = gamma.num_cells();
    if (mu_left.num_cells() != n || mu_right.num_cells() != n)
        throw TopologyError("mu_left, mu_right and gamma must have identical cell counts");

    const double tol = 1e-12 * omega.length_scale();
    auto coincident = [&](double m1, double m2, const Point& c1, const Point& c2) {
        return std::abs(m1 - m2) <= 1e-12 * std::max(1.0, std::abs(m1)) && (c1 - c2).norm() <= tol;
    };

    std::vector<int> omega_used(omega.num_faces(), 0);
    for (Side s : kSides) {
        const InterfaceMap& mm = m(s);
        const SimplicialMesh& layer = mu(s);
        const std::string name = std::string("m_") + to_string(s);
        if (mm.side != s) throw TopologyError(name + ": side label mismatch");
        std::vector<int> hit(layer.num_cells(), 0);
        for (const auto& p : mm.pairs) {
            if (p.higher < 0 || p.higher >= omega.num_faces())
                throw TopologyError(name + ": omega face " + std::to_string(p.higher) + " out of range");
            if (p.lower < 0 || p.lower >= layer.num_cells())
                throw TopologyError(name + ": damage cell " + std::to_string(p.lower) + " out of range");
            if (p.orientation != 1 && p.orientation != -1)
                throw TopologyError(name + ": orientation must be +1 or -1");
            if (!omega.is_boundary_face(p.higher))
                throw TopologyError(name + ": omega face " + std::to_string(p.higher) + " is interior");
            if (omega_used[p.higher]++)
                throw TopologyError(name + ": omega face " + std::to_string(p.higher) + " paired twice");
            if (hit[p.lower]++)
                throw TopologyError(name + ": damage cell " + std::to_string(p.lower) + " paired twice");
            if (omega.boundary_tag(p.higher) != interface_tag(s))
                throw TopologyError(name + ": omega face " + std::to_string(p.higher) +
                                    " lacks the internal-boundary tag");
            if (!coincident(omega.face_measure(p.higher), layer.cell_measure(p.lower),
                            omega.face_centroid(p.higher), layer.cell_centroid(p.lower)))
                throw TopologyError(name + ": omega face " + std::to_string(p.higher) +
                                    " does not coincide with damage cell " + std::to_string(p.lower));
        }
        for (int c = 0; c < layer.num_cells(); ++c)
            if (!hit[c]) throw TopologyError(name + ": damage cell " + std::to_string(c) + " is unmatched");

        const InterfaceMap& gm = g(s);
        const std::string gname = std::string("g_") + to_string(s);
        if (gm.side != s) throw TopologyError(gname + ": side label mismatch");
        std::vector<int> hit_mu(layer.num_cells(), 0), hit_gamma(gamma.num_cells(), 0);
        for (const auto& p : gm.pairs) {
            if (p.higher < 0 || p.higher >= layer.num_cells())
                throw TopologyError(gname + ": damage cell " + std::to_string(p.higher) + " out of range");
            if (p.lower < 0 || p.lower >= gamma.num_cells())
                throw TopologyError(gname + ": fault cell " + std::to_string(p.lower) + " out of range");
            if (p.orientation != 1 && p.orientation != -1)
                throw TopologyError(gname + ": orientation must be +1 or -1");
            if (hit_mu[p.higher]++)
                throw TopologyError(gname + ": damage cell " + std::to_string(p.higher) + " paired twice");
            if (hit_gamma[p.lower]++)
                throw TopologyError(gname + ": fault cell " + std::to_string(p.lower) + " paired twice");
            if (!coincident(layer.cell_measure(p.higher), gamma.cell_measure(p.lower),
                            layer.cell_centroid(p.higher), gamma.cell_centroid(p.lower)))
                throw TopologyError(gname + ": damage cell " + std::to_string(p.higher) +
                                    " does not coincide with fault cell " + std::to_string(p.lower));
        }
        for (int c = 0; c < gamma.num_cells(); ++c)
            if (!hit_gamma[c]) throw TopologyError(gname + ": fault cell " + std::to_string(c) + " is unmatched");
        for (int c = 0; c < layer.num_cells(); ++c)
            if (!hit_mu[c]) throw TopologyError(gname + ": damage cell " + std::to_string(c) + " is unmatched");
    }
    for (const auto& [f, tag] : omega.boundary_tags())
        if ((tag == interface_tag(Side::left) || tag == interface_tag(Side::right)) && !omega_used[f])
            throw TopologyError("omega face " + std::to_string(f) + " has an interface tag but no pair");
}

}  // namespace faultflow
