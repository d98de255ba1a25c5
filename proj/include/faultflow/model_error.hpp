#pragma once

#include "faultflow/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace faultflow {

/// Uniform bucket grid over the cells of a full-dimensional mesh (dim 2 in the
/// xy-plane, or dim 3) answering "which cell contains this point".
class PointLocator {
public:
    explicit PointLocator(const SimplicialMesh& mesh);

    /// Lowest-index cell containing `x` up to a relative tolerance of 1e-12,
    /// or -1 when no cell does.
    int locate(const Point& x) const;

private:
    bool contains(int cell, const Point& x) const;

    const SimplicialMesh* mesh_;
    int dim_;
    Eigen::Vector3d lo_, step_;
    std::array<int, 3> n_{1, 1, 1};
    std::vector<int> start_;  // CSR over buckets
    std::vector<int> items_;
    double tol_;
};

/// Piecewise-constant injection: each fine cell takes the value of the coarse
/// cell containing its centroid. Throws InputError naming the first fine cell
/// whose centroid lies outside the coarse mesh.
Eigen::VectorXd inject_p0(const SimplicialMesh& coarse, const Eigen::VectorXd& values, const SimplicialMesh& fine);

/// sqrt(sum_K |K| (a_K - b_K)^2). Throws InputError on a length mismatch.
double l2_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const SimplicialMesh& mesh);

struct ErrorReport {
    std::string label;
    double eps = 0.0;
    double e_tilde = 0.0;
    double delta_p = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double h = 0.0;
    double h2 = 0.0;
    double eta = 0.0;
};

/// Builds the report from matrix pressures already injected on the reference
/// mesh: e_tilde = |I(p_h) - p_ref|, delta_p = |I(p_h2) - I(p_h)|,
/// bounds max(e_tilde - delta_p, 0) and e_tilde + delta_p.
ErrorReport bound_report(const SimplicialMesh& reference, const Eigen::VectorXd& p_reference,
                         const Eigen::VectorXd& injected_h, const Eigen::VectorXd& injected_h2);

/// Columns: eps,case,e_tilde,delta_p,lower,upper,h,h2,eta.
void write_error_csv(std::ostream& out, const std::vector<ErrorReport>& reports);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace faultflow
