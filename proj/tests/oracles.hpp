#pragma once

// Reference computations that share no numerics with the library: Gauss
// quadrature on collapsed coordinates, closed-form 1D integrals, and dense
// hand assembly of the coupled system.

#include "faultflow/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::Vector3d;

struct GaussRule {
    std::vector<double> x, w;  // on [0,1]
};

// Gauss-Legendre nodes by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x.push_back(0.5 * (1.0 - z));
        r.w.push_back(1.0 / ((1.0 - z * z) * dp * dp));
    }
    return r;
}

// Integral over the simplex with the given vertices (1 to 3 dims) using a
// Duffy-collapsed tensor Gauss rule.
inline double integrate(const std::vector<Vec>& v, const std::function<double(const Vec&)>& f, int n = 8) {
    const GaussRule g = gauss_legendre(n);
    const int d = static_cast<int>(v.size()) - 1;
    Eigen::MatrixXd E(3, d);
    for (int j = 0; j < d; ++j) E.col(j) = v[j + 1] - v[0];
    const double jac = std::sqrt((E.transpose() * E).determinant());
    double sum = 0.0;
    if (d == 1) {
        for (int a = 0; a < n; ++a) sum += g.w[a] * f(v[0] + g.x[a] * E.col(0));
        return sum * jac;
    }
    if (d == 2) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double s = g.x[a], t = g.x[b] * (1.0 - g.x[a]);
                sum += g.w[a] * g.w[b] * (1.0 - g.x[a]) * f(v[0] + s * E.col(0) + t * E.col(1));
            }
        return sum * jac;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double s = g.x[a];
                const double t = g.x[b] * (1.0 - s);
                const double u = g.x[c] * (1.0 - s - t);
                const double wgt = g.w[a] * g.w[b] * g.w[c] * (1.0 - s) * (1.0 - s - t);
                sum += wgt * f(v[0] + s * E.col(0) + t * E.col(1) + u * E.col(2));
            }
    return sum * jac;
}

inline double simplex_measure(const std::vector<Vec>& v) {
    return integrate(v, [](const Vec&) { return 1.0; }, 2);
}

// RT0 field with unit outward flux through the facet opposite vertex i.
inline Vec rt0_basis(const std::vector<Vec>& v, int i, const Vec& x) {
    const int d = static_cast<int>(v.size()) - 1;
    return (x - v[i]) / (d * simplex_measure(v));
}

// Local mass by quadrature, outward-normalised basis (all signs +1).
inline Eigen::MatrixXd rt0_mass(const std::vector<Vec>& v, const Eigen::Matrix3d& W) {
    const int n = static_cast<int>(v.size());
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = integrate(v, [&](const Vec& x) { return rt0_basis(v, i, x).dot(W * rt0_basis(v, j, x)); });
    return M;
}

// Closed form on an interval of length L with weight w.
inline Eigen::Matrix2d interval_mass(double L, double w) {
    Eigen::Matrix2d M;
    M << L / 3.0, -L / 6.0, -L / 6.0, L / 3.0;
    return w * M;
}

// Dense system for uniform coefficients assembled straight from the weak form,
// unknown order (u_O, p_O, u_m, p_m, u_g, p_g, u_G) with layers left then right.
struct DenseSystem {
    Eigen::MatrixXd M;
    std::vector<int> off;  // 8 entries
};

inline DenseSystem hand_assemble(const faultflow::MixedDimGeometry& g, double aO, double amu, double aM, double ag,
                                 double aG) {
    using faultflow::Side;
    const auto& O = g.omega;
    const int nfO = O.num_faces(), ncO = O.num_cells();
    const int nfm = g.mu_left.num_faces() + g.mu_right.num_faces();
    const int ncm = g.mu_left.num_cells() + g.mu_right.num_cells();
    const int nfg = g.gamma.num_faces(), ncg = g.gamma.num_cells();
    const int nG = static_cast<int>(g.g_left.pairs.size() + g.g_right.pairs.size());
    DenseSystem s;
    s.off = {0, nfO, nfO + ncO, nfO + ncO + nfm, nfO + ncO + nfm + ncm, nfO + ncO + nfm + ncm + nfg,
             nfO + ncO + nfm + ncm + nfg + ncg, nfO + ncO + nfm + ncm + nfg + ncg + nG};
    s.M = Eigen::MatrixXd::Zero(s.off[7], s.off[7]);

    // Mass and divergence of one mesh; the global orientation of face f is its
    // stored normal, and the local basis flips when the cell normal disagrees.
    auto domain = [&](const faultflow::SimplicialMesh& m, int uoff, int poff, double w) {
        for (int c = 0; c < m.num_cells(); ++c) {
            std::vector<Vec> v;
            for (int k : m.cell(c)) v.push_back(m.vertex(k));
            const Eigen::MatrixXd loc = rt0_mass(v, w * Eigen::Matrix3d::Identity());
            const int n = static_cast<int>(v.size());
            std::vector<double> sgn(n);
            std::vector<int> face(n);
            const Vec cen = m.cell_centroid(c);
            for (int i = 0; i < n; ++i) {
                face[i] = m.cell_faces(c)[i];
                // outward iff the face normal points away from the centroid
                sgn[i] = m.face_normal(face[i]).dot(m.face_centroid(face[i]) - cen) > 0 ? 1.0 : -1.0;
            }
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) s.M(uoff + face[i], uoff + face[j]) += sgn[i] * sgn[j] * loc(i, j);
                // -(p, div v): div of the global basis is sgn / |K|, integrated gives sgn
                s.M(uoff + face[i], poff + c) -= sgn[i];
                s.M(poff + c, uoff + face[i]) -= sgn[i];
            }
        }
    };
    domain(O, s.off[0], s.off[1], aO);
    domain(g.mu_left, s.off[2], s.off[3], amu);
    domain(g.mu_right, s.off[2] + g.mu_left.num_faces(), s.off[3] + g.mu_left.num_cells(), amu);
    domain(g.gamma, s.off[4], s.off[5], ag);

    // M coupling: trace term and +(p_mu, v.n) with n from Omega into the layer.
    for (Side side : faultflow::kSides) {
        const int co = side == Side::left ? 0 : g.mu_left.num_cells();
        for (const auto& p : g.m(side).pairs) {
            const double area = O.face_measure(p.higher);
            s.M(s.off[0] + p.higher, s.off[0] + p.higher) += aM * area / (area * area);
            s.M(s.off[0] + p.higher, s.off[3] + co + p.lower) += 1.0;
            s.M(s.off[3] + co + p.lower, s.off[0] + p.higher) += 1.0;
        }
        const int go = side == Side::left ? 0 : static_cast<int>(g.g_left.pairs.size());
        for (std::size_t k = 0; k < g.g(side).pairs.size(); ++k) {
            const auto& p = g.g(side).pairs[k];
            const double area = g.gamma.cell_measure(p.lower);
            const int r = s.off[6] + go + static_cast<int>(k);
            s.M(r, r) += aG * area;
            s.M(r, s.off[3] + co + p.higher) -= area;
            s.M(s.off[3] + co + p.higher, r) -= area;
            s.M(r, s.off[5] + p.lower) += area;
            s.M(s.off[5] + p.lower, r) += area;
        }
    }
    return s;
}

}  // namespace oracle
