#include "faultflow/fem.hpp"

#include "faultflow/error.hpp"

#include <cmath>

namespace faultflow {

namespace {

void check_cell(const CellGeometry& cell) {
    if (cell.dim < 1 || cell.dim > 3) throw InputError("cell dimension must be 1, 2 or 3");
    const double vol = cell.measure();
    if (!(vol > 1e-14 * std::pow(cell.diameter(), cell.dim))) throw InputError("degenerate cell");
}

}  // namespace

void check_weight(const CellGeometry& cell, const Tensor& weight) {
    const double scale = weight.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !weight.allFinite()) throw InputError("weight tensor must be nonzero and finite");
    if ((weight - weight.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InputError("weight tensor is not symmetric");
    Eigen::Matrix<double, 3, Eigen::Dynamic> edges(3, cell.dim);
    for (int j = 0; j < cell.dim; ++j) edges.col(j) = cell.vertices[j + 1] - cell.vertices[0];
    const Eigen::MatrixXd tangent = edges.transpose() * weight * edges;
    Eigen::LLT<Eigen::MatrixXd> llt(tangent);
    if (llt.info() != Eigen::Success) throw InputError("weight tensor is not positive definite");
    for (int j = 0; j < cell.dim; ++j)
        if (!(llt.matrixL()(j, j) > 1e-14 * std::sqrt(scale) * edges.col(j).norm()))
            throw InputError("weight tensor is not positive definite");
}

LocalMatrix rt0_local_mass(const CellGeometry& cell, const Tensor& weight) {
    check_cell(cell);
    check_weight(cell, weight);
    const int d = cell.dim;
    const int n = d + 1;
    const double vol = cell.measure();

    // int_K a.W b for affine a, b: |K| / ((d+1)(d+2)) [sum_k a_k.W b_k + (sum a_k).W(sum b_k)].
    Eigen::Vector3d vsum = Eigen::Vector3d::Zero();
    for (int k = 0; k < n; ++k) vsum += cell.vertices[k];

    LocalMatrix out;
    out.values.resize(n, n);
    const double scale = vol / (static_cast<double>(n) * (n + 1)) / (d * vol) / (d * vol);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += (cell.vertices[k] - cell.vertices[i]).dot(weight * (cell.vertices[k] - cell.vertices[j]));
            const Eigen::Vector3d si = vsum - n * cell.vertices[i];
            const Eigen::Vector3d sj = vsum - n * cell.vertices[j];
            acc += si.dot(weight * sj);
            const double v = cell.signs[i] * cell.signs[j] * scale * acc;
            out.values(i, j) = v;
            out.values(j, i) = v;
        }
    }
    return out;
}

LocalMatrix rt0_local_div(const CellGeometry& cell) {
    check_cell(cell);
    LocalMatrix out;
    out.row_kind = DofKind::cell_pressure;
    out.col_kind = DofKind::face_flux;
    out.values.resize(1, cell.dim + 1);
    for (int j = 0; j <= cell.dim; ++j) out.values(0, j) = cell.signs[j];
    return out;
}

LocalMatrix trace_term_local(double face_measure, double alpha_M_sq) {
    if (!(face_measure > 0.0)) throw InputError("interface face must have positive measure");
    if (alpha_M_sq < 0.0) throw InputError("alpha_M^2 must be non-negative");
    LocalMatrix out;
    out.values.resize(1, 1);
    out.values(0, 0) = alpha_M_sq / face_measure;
    return out;
}

LocalMatrix trace_term_local(const MixedDimGeometry& geometry, Side side, int omega_face,
                             double alpha_M_sq) {
    for (const auto& p : geometry.m(side).pairs)
        if (p.higher == omega_face) return trace_term_local(geometry.omega.face_measure(omega_face), alpha_M_sq);
    throw InputError("omega face " + std::to_string(omega_face) + " is not on the " + to_string(side) +
                     " interface M");
}

Point rt0_evaluate(const CellGeometry& cell, std::span<const double> dofs, const Point& x) {
    const double denom = cell.dim * cell.measure();
    Point v = Point::Zero();
    for (int i = 0; i <= cell.dim; ++i) v += dofs[i] * cell.signs[i] * (x - cell.vertices[i]);
    return v / denom;
}

Eigen::VectorXd rt0_interpolate_constant(const SimplicialMesh& mesh, const Point& v) {
    Eigen::VectorXd out(mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) out[f] = mesh.face_measure(f) * v.dot(mesh.face_normal(f));
    return out;
}

std::vector<Point> rt0_cell_velocities(const SimplicialMesh& mesh, const Eigen::VectorXd& face_fluxes) {
    std::vector<Point> out(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellGeometry geo = mesh.cell_geometry(c);
        std::array<double, 4> dofs{};
        for (int i = 0; i <= mesh.dim(); ++i) dofs[i] = face_fluxes[mesh.cell_faces(c)[i]];
        out[c] = rt0_evaluate(geo, std::span<const double>(dofs.data(), mesh.dim() + 1), mesh.cell_centroid(c));
    }
    return out;
}

}  // namespace faultflow
