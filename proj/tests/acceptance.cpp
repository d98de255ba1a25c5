// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "fixtures.hpp"
#include "oracles.hpp"

#include "faultflow/error.hpp"
#include "faultflow/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace faultflow;

namespace {

const std::string kRoot = FAULTFLOW_SOURCE_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double n = b.norm();
    return n > 0 ? (a - b).norm() / n : (a - b).norm();
}

Scenario scenario(const std::string& name) { return load_scenario(kRoot + "/scenarios/" + name + ".cfg"); }

Outcome patch_test() {
    const auto t0 = Clock::now();
    const auto g = build_two_block_geometry(53, 40);
    const auto coeff = CoefficientSet::uniform(g, 1, 1, 1, 1, 1);
    const auto bc = fixture::pressure_everywhere(g, [](const Point& x) { return x.y(); });
    const auto sol = solve_saddle(assemble(g, coeff, bc, {}));
    const double elapsed = seconds(t0);
    double err = 0.0, uG = 0.0;
    for (int c = 0; c < g.omega.num_cells(); ++c) err = std::max(err, std::abs(sol.p_omega[c] - g.omega.cell_centroid(c).y()));
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        for (int c = 0; c < g.mu(s).num_cells(); ++c)
            err = std::max(err, std::abs(sol.p_mu[k][c] - g.mu(s).cell_centroid(c).y()));
        uG = std::max(uG, sol.u_Gamma[k].cwiseAbs().maxCoeff());
    }
    for (int c = 0; c < g.gamma.num_cells(); ++c) err = std::max(err, std::abs(sol.p_gamma[c] - g.gamma.cell_centroid(c).y()));
    return {err <= 1e-10 && uG <= 1e-10 && elapsed < 1.0,
            fmt("max |p - y| %.2e, max |u_Gamma| %.2e, %.3f s", err, uG, elapsed)};
}

Outcome series_resistance() {
    const auto g = build_two_block_geometry(53, 40);
    double worst = 0.0;
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{10.0, 0.1}, std::pair{1e4, 1e4}}) {
        const auto sol = solve_saddle(assemble(g, fixture::series(g, a, b), fixture::cross_flow(g, 0.0, 1.0), {}));
        const double U = 1.0 / (2.0 + 2.0 * a + 2.0 * b);
        for (const auto& v : rt0_cell_velocities(g.omega, sol.u_omega))
            worst = std::max(worst, std::max(std::abs(v.x() + U), std::abs(v.y())) / U);
        for (int i = 0; i < sol.u_Gamma[1].size(); ++i)
            worst = std::max(worst, std::max(std::abs(sol.u_Gamma[0][i] + U), std::abs(sol.u_Gamma[1][i] - U)) / U);
    }
    return {worst <= 1e-8, fmt("max relative flux deviation %.2e over (1,1), (10,0.1), (1e4,1e4)", worst)};
}

struct Bundled {
    std::string name;
    Scenario sc;
    RunResult run;
};

std::vector<Bundled>& bundled() {
    static std::vector<Bundled> runs = [] {
        std::vector<Bundled> out;
        for (const char* n : {"case_i", "case_ii", "case_iii", "fault3d"}) {
            Scenario sc = scenario(n);
            RunResult r = solve_scenario(sc);
            out.push_back({n, std::move(sc), std::move(r)});
        }
        return out;
    }();
    return runs;
}

Outcome conservation() {
    double p0 = 0.0, bal = 0.0;
    for (const auto& b : bundled()) {
        p0 = std::max(p0, b.run.diagnostics.p0_residual);
        bal = std::max(bal, b.run.diagnostics.balance);
    }
    return {p0 <= 1e-10 && bal <= 1e-9, fmt("max P0 row residual %.2e, max balance %.2e (4 scenarios)", p0, bal)};
}

Outcome interface_laws() {
    double m = 0.0, gl = 0.0;
    for (const auto& b : bundled()) {
        m = std::max(m, b.run.diagnostics.m_law);
        gl = std::max(gl, b.run.diagnostics.gamma_law);
    }
    return {m <= 1e-9 && gl <= 1e-9, fmt("max M law %.2e, max Gamma law %.2e (4 scenarios)", m, gl)};
}

Outcome solve_paths() {
    double worst = 0.0;
    bool spd = true;
    for (int i = 0; i < 3; ++i) {
        const auto& b = bundled()[i];
        const auto& direct = b.run.solution;
        const PressureSchur schur = build_pressure_schur(b.run.system);
        const auto sol = reconstruct_velocity(schur, solve_schur(schur));
        worst = std::max(worst, rel(sol.p_omega, direct.p_omega));
        worst = std::max(worst, rel(sol.p_gamma, direct.p_gamma));
        for (int k = 0; k < 2; ++k) worst = std::max(worst, rel(sol.p_mu[k], direct.p_mu[k]));
        spd = spd && check_schur_spd(b.run.system).all();
    }
    return {worst <= 1e-8 && spd, fmt("max relative pressure difference %.2e; S blocks SPD: ", worst) +
                                      (spd ? "yes" : "no")};
}

Outcome fault_symmetry() {
    const auto& b = bundled()[1];
    const auto& p = b.run.solution.p_gamma;
    const double mean = p.mean();
    const double sd = std::sqrt((p.array() - mean).square().mean());
    const double range = jump_profile(b.run).range();
    return {sd <= 1e-8 * range, fmt("std(p_gamma) %.2e, pressure range %.3f", sd, range)};
}

double max_in(const std::vector<PairJump>& v, bool inside) {
    double m = 0.0;
    for (const auto& j : v) {
        const double y = j.at.y();
        if ((y >= 0.25 && y <= 0.75) == inside) m = std::max(m, std::abs(j.value));
    }
    return m;
}

double max_all(const std::vector<PairJump>& v) { return std::max(max_in(v, true), max_in(v, false)); }

Outcome qualitative() {
    const auto t0 = Clock::now();
    std::vector<JumpProfile> jp;
    for (const char* n : {"case_i", "case_ii", "case_iii"}) jp.push_back(jump_profile(solve_scenario(scenario(n))));
    const double elapsed = seconds(t0);

    const double c1 = max_all(jp[0].across) / jp[0].range();
    double contrast = 1e300;
    for (const auto* v : {&jp[1].m[0], &jp[1].gamma[0], &jp[1].gamma[1], &jp[1].m[1]}) {
        const double out = max_in(*v, false);
        contrast = std::min(contrast, out > 0 ? max_in(*v, true) / out : 1e300);
    }
    const double low = max_all(jp[2].m[0]) / jp[2].range();
    const double high = max_all(jp[2].m[1]) / jp[2].range();
    const bool pass = c1 <= 0.05 && contrast >= 10.0 && low > 0.05 && high < 0.05 && elapsed < 30.0;
    return {pass, fmt("(i) jump %.2e of range; (ii) min inside/outside %.1f; (iii) M jump low side %.3f, high side %.2e",
                      c1, contrast, low, high) +
                      fmt(" of range; %.2f s", elapsed)};
}

Outcome table_trend() {
    const auto t0 = Clock::now();
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    const std::vector<std::vector<double>> published{
        {1.12812e-2, 7.29157e-3, 5.7667e-3}, {9.72846e-3, 6.83495e-3, 5.24812e-3}, {8.93785e-3, 6.36322e-3, 5.21005e-3}};
    bool pass = true;
    std::string detail;
    const char* names[] = {"case_i", "case_ii", "case_iii"};
    for (int c = 0; c < 3; ++c) {
        const auto reports = model_error_sweep(scenario(names[c]), eps);
        std::vector<double> lower;
        double worst_factor = 1.0;
        bool monotone = true;
        for (int i = 0; i < 3; ++i) {
            const double r = reports[i].e_tilde / published[c][i];
            worst_factor = std::max(worst_factor, std::max(r, 1.0 / r));
            if (i > 0 && !(reports[i].e_tilde < reports[i - 1].e_tilde)) monotone = false;
            lower.push_back(reports[i].lower);
        }
        double slope = std::nan("");
        try {
            slope = loglog_slope(eps, lower);
        } catch (const InputError&) {
        }
        const bool ok = monotone && worst_factor <= 3.0 && std::abs(slope - 1.0) <= 0.35;
        pass = pass && ok;
        detail += std::string(c ? "; " : "") + names[c] +
                  fmt(" e~ %.2e %.2e %.2e", reports[0].e_tilde, reports[1].e_tilde, reports[2].e_tilde) +
                  fmt(" factor %.2f slope %.2f", worst_factor, slope);
    }
    const double elapsed = seconds(t0);
    pass = pass && elapsed < 300.0;
    return {pass, detail + fmt("; %.1f s", elapsed)};
}

Outcome three_d() {
    const auto t0 = Clock::now();
    const RunResult run = solve_scenario(scenario("fault3d"));
    const double elapsed = seconds(t0);
    const SpeedSummary s = mean_speeds(run);
    const auto& g = run.geometry;
    const double area = g.mu_left.total_measure() + g.mu_right.total_measure();
    const double damage = (s.mu[0] * g.mu_left.total_measure() + s.mu[1] * g.mu_right.total_measure()) / area;
    const bool pass = s.gamma <= 1e-3 * damage && damage >= 10.0 * s.omega && elapsed < 120.0;
    return {pass, fmt("fault/damage speed %.2e, damage/matrix speed %.1f", s.gamma / damage, damage / s.omega) +
                      ", " + std::to_string(g.omega.num_cells()) + fmt(" tets, %.2f s", elapsed)};
}

Outcome oracle_match() {
    const auto g = build_two_block_geometry(1, 1);
    const double aO = 1.7, amu = 0.6, aM = 2.5, ag = 3.1, aG = 0.8;
    const auto sys = assemble(g, CoefficientSet::uniform(g, aO, amu, aM, ag, aG),
                              fixture::pressure_everywhere(g, [](const Point&) { return 0.0; }), {});
    const auto ref = oracle::hand_assemble(g, aO, amu, aM, ag, aG);
    const Eigen::MatrixXd lib = Eigen::MatrixXd(sys.global_matrix());
    const double dm = lib.rows() == ref.M.rows() ? (lib - ref.M).cwiseAbs().maxCoeff() : 1e300;

    // Schur blocks from the dense oracle matrix
    auto blk = [&](int r, int c) {
        return ref.M.block(ref.off[r], ref.off[c], ref.off[r + 1] - ref.off[r], ref.off[c + 1] - ref.off[c]).eval();
    };
    auto inv = [](const Eigen::MatrixXd& a) { return a.inverse().eval(); };
    const Eigen::MatrixXd AO = blk(0, 0), BO = blk(0, 1), GO = blk(0, 3), Am = blk(2, 2), Bm = blk(2, 3);
    const Eigen::MatrixXd Ag = blk(4, 4), Bg = blk(4, 5), Gm = blk(3, 6), Gg = blk(5, 6), AG = blk(6, 6);
    const auto blocks = build_pressure_schur(sys).dense_blocks();
    double ds = 0.0;
    auto cmp = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        ds = std::max(ds, a.rows() == b.rows() && a.cols() == b.cols() ? (a - b).cwiseAbs().maxCoeff() : 1e300);
    };
    cmp(blocks.S_omega, BO.transpose() * inv(AO) * BO);
    cmp(blocks.S_mu, Bm.transpose() * inv(Am) * Bm + GO.transpose() * inv(AO) * GO + Gm * inv(AG) * Gm.transpose());
    cmp(blocks.S_gamma, Bg.transpose() * inv(Ag) * Bg + Gg * inv(AG) * Gg.transpose());
    cmp(blocks.C_omega, BO.transpose() * inv(AO) * GO);
    cmp(blocks.C_mu, Gm * inv(AG) * Gg.transpose());
    return {dm <= 1e-12 && ds <= 1e-12, fmt("max |M - M_hand| %.2e, max Schur block difference %.2e", dm, ds)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"patch test", patch_test},
        {"series-resistance cross flow", series_resistance},
        {"local conservation and balance", conservation},
        {"interface-law residuals", interface_laws},
        {"saddle vs Schur, SPD blocks", solve_paths},
        {"case (ii) fault pressure symmetry", fault_symmetry},
        {"qualitative jump checks", qualitative},
        {"model-error trend", table_trend},
        {"3D fault and damage-zone speeds", three_d},
        {"dense oracle equivalence", oracle_match},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
