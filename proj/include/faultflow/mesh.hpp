#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace faultflow {

using Point = Eigen::Vector3d;

/// Vertices and orientation data of one simplex, detached from its mesh.
///
/// Local face `i` is the facet opposite local vertex `i`; `signs[i]` is +1 when
/// the global orientation of that face points out of this cell.
struct CellGeometry {
    int dim = 0;
    std::array<Point, 4> vertices{};
    std::array<int, 4> signs{1, 1, 1, 1};

    double measure() const;
    double diameter() const;
    Point centroid() const;
    /// Measure of local face `i` (1 for point faces of an interval).
    double face_measure(int i) const;
    /// Unit normal of local face `i`, outward from this cell, in the cell's affine hull.
    Point outward_normal(int i) const;
};

/// Conforming simplicial mesh of dimension 1, 2 or 3 embedded in R^3.
///
/// Faces are enumerated in order of first appearance while cells are scanned in
/// order and, within a cell, local faces 0..dim. The first cell that sees a face
/// owns it: the face normal points out of the owner, which gets sign +1 and the
/// neighbour -1. Boundary faces therefore always carry outward normals.
class SimplicialMesh {
public:
    SimplicialMesh() = default;

    /// Builds faces, orientations and geometric quantities.
    /// `cell_vertices` is flat with stride `dim + 1`. Throws TopologyError for
    /// bad indices, degenerate cells or faces shared by more than two cells.
    static SimplicialMesh from_cells(int dim, std::vector<Point> vertices,
                                     std::vector<int> cell_vertices);

    int dim() const noexcept { return dim_; }
    int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    int num_cells() const noexcept { return static_cast<int>(cell_measures_.size()); }
    int num_faces() const noexcept { return static_cast<int>(face_measures_.size()); }

    const Point& vertex(int v) const { return vertices_[v]; }
    const std::vector<Point>& vertices() const noexcept { return vertices_; }

    std::span<const int> cell(int c) const {
        return {cells_.data() + static_cast<std::size_t>(c) * (dim_ + 1),
                static_cast<std::size_t>(dim_ + 1)};
    }
    std::span<const int> face(int f) const {
        return {faces_.data() + static_cast<std::size_t>(f) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const int> cell_faces(int c) const {
        return {cell_faces_.data() + static_cast<std::size_t>(c) * (dim_ + 1),
                static_cast<std::size_t>(dim_ + 1)};
    }
    std::span<const int> cell_face_signs(int c) const {
        return {cell_face_signs_.data() + static_cast<std::size_t>(c) * (dim_ + 1),
                static_cast<std::size_t>(dim_ + 1)};
    }
    /// Owner and neighbour of a face; the neighbour is -1 on the boundary.
    std::array<int, 2> face_cells(int f) const { return face_cells_[f]; }
    bool is_boundary_face(int f) const { return face_cells_[f][1] < 0; }
    std::vector<int> boundary_faces() const;

    double cell_measure(int c) const { return cell_measures_[c]; }
    double face_measure(int f) const { return face_measures_[f]; }
    const Point& cell_centroid(int c) const { return cell_centroids_[c]; }
    const Point& face_centroid(int f) const { return face_centroids_[f]; }
    const Point& face_normal(int f) const { return face_normals_[f]; }
    const std::vector<double>& cell_measures() const noexcept { return cell_measures_; }
    const std::vector<double>& face_measures() const noexcept { return face_measures_; }

    CellGeometry cell_geometry(int c) const;
    double total_measure() const;
    /// Largest edge length over all cells.
    double max_cell_diameter() const;
    /// Length of the bounding-box diagonal (at least 1), used to scale tolerances.
    double length_scale() const;

    void set_boundary_tag(int f, std::string label);
    const std::map<int, std::string>& boundary_tags() const noexcept { return boundary_tags_; }
    /// Empty string when the face is untagged.
    const std::string& boundary_tag(int f) const;
    std::vector<int> faces_with_tag(const std::string& label) const;

    void set_cell_regions(std::vector<int> regions, std::vector<std::string> names);
    bool has_regions() const noexcept { return !cell_regions_.empty(); }
    int cell_region(int c) const { return cell_regions_.at(c); }
    const std::vector<std::string>& region_names() const noexcept { return region_names_; }
    int region_index(const std::string& name) const;

    /// Re-checks the structural invariants; throws TopologyError.
    void validate() const;

private:
    int dim_ = 0;
    std::vector<Point> vertices_;
    std::vector<int> cells_;
    std::vector<int> faces_;
    std::vector<int> cell_faces_;
    std::vector<int> cell_face_signs_;
    std::vector<std::array<int, 2>> face_cells_;
    std::vector<double> cell_measures_;
    std::vector<double> face_measures_;
    std::vector<Point> cell_centroids_;
    std::vector<Point> face_centroids_;
    std::vector<Point> face_normals_;
    std::map<int, std::string> boundary_tags_;
    std::vector<int> cell_regions_;
    std::vector<std::string> region_names_;
};

enum class Side { left = 0, right = 1 };

inline constexpr std::array<Side, 2> kSides{Side::left, Side::right};

const char* to_string(Side side);

struct InterfacePair {
    int higher = 0;  ///< Omega face (M maps) or damage-layer cell (Gamma maps)
    int lower = 0;   ///< damage-layer cell (M maps) or fault cell (Gamma maps)
    int orientation = 1;
};

struct InterfaceMap {
    Side side = Side::left;
    std::vector<InterfacePair> pairs;
};

/// Matrix, the two damage layers, the fault, and the maps gluing them.
struct MixedDimGeometry {
    SimplicialMesh omega;
    SimplicialMesh mu_left;
    SimplicialMesh mu_right;
    SimplicialMesh gamma;
    InterfaceMap m_left{Side::left, {}};
    InterfaceMap m_right{Side::right, {}};
    InterfaceMap g_left{Side::left, {}};
    InterfaceMap g_right{Side::right, {}};

    const SimplicialMesh& mu(Side s) const { return s == Side::left ? mu_left : mu_right; }
    SimplicialMesh& mu(Side s) { return s == Side::left ? mu_left : mu_right; }
    const InterfaceMap& m(Side s) const { return s == Side::left ? m_left : m_right; }
    InterfaceMap& m(Side s) { return s == Side::left ? m_left : m_right; }
    const InterfaceMap& g(Side s) const { return s == Side::left ? g_left : g_right; }
    InterfaceMap& g(Side s) { return s == Side::left ? g_left : g_right; }

    /// Throws TopologyError naming the first offending entity.
    void validate() const;
};

/// Boundary tag carried by Omega faces glued to the damage layer on `side`.
std::string interface_tag(Side side);

/// Two unit squares (0,1)x(0,1) and (1,2)x(0,1), not connected through x = 1,
/// with three overlapping layers on {1}x(0,1) discretised by `ny` segments.
/// The left square splits each quad along its lower-left/upper-right diagonal;
/// the right square is its mirror image.
MixedDimGeometry build_two_block_geometry(int nx, int ny);

struct LayeredMeshOptions {
    int ny = 160;                   ///< rows in y (uniform)
    double matrix_size = 1.0 / 160; ///< target cell width in x away from the strips
    double grading = 1.2;           ///< growth ratio of cell widths leaving the strips
};

/// Equi-dimensional mesh of (0,2)x(0,1) resolving the damage strips and the
/// fault strip centred on x = 1. Cells carry regions
/// {matrix, damage_left, fault, damage_right}; outer faces are tagged
/// left/right/bottom/top. Throws ResolutionError if `eta > eps_gamma`.
SimplicialMesh build_layered_equidim_mesh(double eps_mu, double eps_gamma, double eta,
                                          const LayeredMeshOptions& options = {});

/// Text mesh format: `[domain <name> dim=<d>]` sections with `v x y z`,
/// `c i0 i1 ...` and optional `b face label` lines, then
/// `[interface <name> from=<domain> to=<domain> side=<left|right>]` sections
/// with `p higher lower` lines. Domains are omega, mu_left, mu_right, gamma.
void write_geometry(std::ostream& out, const MixedDimGeometry& geometry);
MixedDimGeometry read_geometry(std::istream& in);
MixedDimGeometry import_mesh(const std::string& path);
void export_mesh(const std::string& path, const MixedDimGeometry& geometry);

}  // namespace faultflow
