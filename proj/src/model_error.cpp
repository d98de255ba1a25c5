#include "faultflow/model_error.hpp"

#include "faultflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace faultflow {

PointLocator::PointLocator(const SimplicialMesh& mesh) : mesh_(&mesh), dim_(mesh.dim()) {
    if (dim_ < 2 || mesh.num_cells() == 0) throw InputError("point location needs a 2D or 3D mesh with cells");
    Eigen::Vector3d hi;
    lo_.setConstant(1e300);
    hi.setConstant(-1e300);
    for (const Point& v : mesh.vertices()) {
        lo_ = lo_.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    tol_ = 1e-12 * mesh.length_scale();
    // about two cells per bucket
    const double per_axis = std::pow(std::max(1.0, mesh.num_cells() / 2.0), 1.0 / dim_);
    const Eigen::Vector3d extent = (hi - lo_).cwiseMax(1e-300);
    const double cell = std::pow(extent.head(dim_).prod() / std::pow(per_axis, dim_), 1.0 / dim_);
    for (int a = 0; a < 3; ++a) {
        n_[a] = a < dim_ ? std::clamp(static_cast<int>(std::ceil(extent[a] / cell)), 1, 4096) : 1;
        step_[a] = a < dim_ ? extent[a] / n_[a] : 1.0;
    }

    auto bucket_range = [&](int c, std::array<int, 3>& b0, std::array<int, 3>& b1) {
        Eigen::Vector3d clo = Eigen::Vector3d::Constant(1e300), chi = Eigen::Vector3d::Constant(-1e300);
        for (int v : mesh.cell(c)) {
            clo = clo.cwiseMin(mesh.vertex(v));
            chi = chi.cwiseMax(mesh.vertex(v));
        }
        for (int a = 0; a < 3; ++a) {
            if (a >= dim_) {
                b0[a] = b1[a] = 0;
                continue;
            }
            b0[a] = std::clamp(static_cast<int>(std::floor((clo[a] - tol_ - lo_[a]) / step_[a])), 0, n_[a] - 1);
            b1[a] = std::clamp(static_cast<int>(std::floor((chi[a] + tol_ - lo_[a]) / step_[a])), 0, n_[a] - 1);
        }
    };
    const long nb = static_cast<long>(n_[0]) * n_[1] * n_[2];
    std::vector<int> count(nb + 1, 0);
    std::array<int, 3> b0{}, b1{};
    auto index = [&](int i, int j, int k) { return (static_cast<long>(k) * n_[1] + j) * n_[0] + i; };
    for (int c = 0; c < mesh.num_cells(); ++c) {
        bucket_range(c, b0, b1);
        for (int k = b0[2]; k <= b1[2]; ++k)
            for (int j = b0[1]; j <= b1[1]; ++j)
                for (int i = b0[0]; i <= b1[0]; ++i) ++count[index(i, j, k) + 1];
    }
    for (long b = 0; b < nb; ++b) count[b + 1] += count[b];
    start_ = count;
    items_.resize(count[nb]);
    std::vector<int> fill(count.begin(), count.end() - 1);
    // cells are visited in increasing order, so every bucket list is sorted
    for (int c = 0; c < mesh.num_cells(); ++c) {
        bucket_range(c, b0, b1);
        for (int k = b0[2]; k <= b1[2]; ++k)
            for (int j = b0[1]; j <= b1[1]; ++j)
                for (int i = b0[0]; i <= b1[0]; ++i) items_[fill[index(i, j, k)]++] = c;
    }
}

bool PointLocator::contains(int cell, const Point& x) const {
    const auto v = mesh_->cell(cell);
    const Point& x0 = mesh_->vertex(v[0]);
    Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
    for (int j = 0; j < dim_; ++j) J.col(j) = mesh_->vertex(v[j + 1]) - x0;
    const Eigen::VectorXd l = J.topLeftCorner(dim_, dim_).partialPivLu().solve((x - x0).head(dim_));
    // barycentric tolerance scaled so that it is a distance of about tol_
    const double slack = tol_ / std::max(mesh_->cell_geometry(cell).diameter(), 1e-300) * 4.0 + 1e-12;
    double sum = 0.0;
    for (int j = 0; j < dim_; ++j) {
        if (l[j] < -slack) return false;
        sum += l[j];
    }
    return sum <= 1.0 + slack;
}

int PointLocator::locate(const Point& x) const {
    std::array<int, 3> b{};
    for (int a = 0; a < 3; ++a) {
        if (a >= dim_) continue;
        const double t = (x[a] - lo_[a]) / step_[a];
        if (t < -1e-9 || t > n_[a] + 1e-9) return -1;
        b[a] = std::clamp(static_cast<int>(std::floor(t)), 0, n_[a] - 1);
    }
    const long id = (static_cast<long>(b[2]) * n_[1] + b[1]) * n_[0] + b[0];
    for (int k = start_[id]; k < start_[id + 1]; ++k)
        if (contains(items_[k], x)) return items_[k];
    return -1;
}

Eigen::VectorXd inject_p0(const SimplicialMesh& coarse, const Eigen::VectorXd& values, const SimplicialMesh& fine) {
    if (values.size() != coarse.num_cells()) throw InputError("injected values do not match the coarse mesh");
    const PointLocator locator(coarse);
    Eigen::VectorXd out(fine.num_cells());
    for (int c = 0; c < fine.num_cells(); ++c) {
        const int host = locator.locate(fine.cell_centroid(c));
        if (host < 0) throw InputError("fine cell " + std::to_string(c) + " lies outside the coarse mesh");
        out[c] = values[host];
    }
    return out;
}

double l2_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const SimplicialMesh& mesh) {
    if (a.size() != b.size() || a.size() != mesh.num_cells())
        throw InputError("l2_error: vectors and mesh have different lengths");
    double s = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) s += mesh.cell_measure(c) * (a[c] - b[c]) * (a[c] - b[c]);
    return std::sqrt(s);
}

ErrorReport bound_report(const SimplicialMesh& reference, const Eigen::VectorXd& p_reference,
                         const Eigen::VectorXd& injected_h, const Eigen::VectorXd& injected_h2) {
    ErrorReport r;
    r.e_tilde = l2_error(injected_h, p_reference, reference);
    r.delta_p = l2_error(injected_h2, injected_h, reference);
    r.lower = std::max(r.e_tilde - r.delta_p, 0.0);
    r.upper = r.e_tilde + r.delta_p;
    return r;
}

void write_error_csv(std::ostream& out, const std::vector<ErrorReport>& reports) {
    out << "eps,case,e_tilde,delta_p,lower,upper,h,h2,eta\n";
    char buf[512];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%.6g,%s,%.6e,%.6e,%.6e,%.6e,%.6g,%.6g,%.6g\n", r.eps, r.label.c_str(),
                      r.e_tilde, r.delta_p, r.lower, r.upper, r.h, r.h2, r.eta);
        out << buf;
    }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("slope needs at least two matching samples");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("log-log slope needs positive samples");
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace faultflow
