#include "faultflow/scenario.hpp"

#include "faultflow/error.hpp"
#include "faultflow/vtk.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace faultflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

bool parse_double(const std::string& text, double& v) {
    const char* begin = text.c_str();
    char* end = nullptr;
    v = std::strtod(begin, &end);
    return end != begin && *end == '\0' && std::isfinite(v);
}

bool parse_int(const std::string& text, int& v) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long x = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || x < -1000000000L || x > 1000000000L) return false;
    v = static_cast<int>(x);
    return true;
}

struct Lexeme {
    enum Kind { number, axis, op, conj } kind;
    std::string text;
    double value = 0.0;
};

std::vector<Lexeme> lex_predicate(const std::string& s) {
    std::vector<Lexeme> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == ',') {
            out.push_back({Lexeme::conj, ","});
            ++i;
        } else if (c == '<' || c == '>') {
            const bool eq = i + 1 < s.size() && s[i + 1] == '=';
            out.push_back({Lexeme::op, std::string(1, c) + (eq ? "=" : "")});
            i += eq ? 2 : 1;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
            const std::string w = s.substr(i, j - i);
            if (w == "and") out.push_back({Lexeme::conj, w});
            else if (w == "x" || w == "y" || w == "z") out.push_back({Lexeme::axis, w});
            else throw InputError("unknown word '" + w + "' in predicate");
            i = j;
        } else {
            const char* begin = s.c_str() + i;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) throw InputError(std::string("unexpected character '") + c + "' in predicate");
            out.push_back({Lexeme::number, std::string(begin, static_cast<std::size_t>(end - begin)), v});
            i += static_cast<std::size_t>(end - begin);
        }
    }
    return out;
}

// Applies `lhs op rhs` where exactly one side is the axis.
void apply(AxisBound& b, const Lexeme& lhs, const std::string& op, const Lexeme& rhs) {
    const bool axis_left = lhs.kind == Lexeme::axis;
    const double v = axis_left ? rhs.value : lhs.value;
    const bool less = op[0] == '<';
    const bool strict = op.size() == 1;
    // axis < v  or  v > axis  bound from above
    if (axis_left == less) {
        b.hi = v;
        b.hi_strict = strict;
    } else {
        b.lo = v;
        b.lo_strict = strict;
    }
}

}  // namespace

Predicate parse_predicate(const std::string& text) {
    const auto lex = lex_predicate(text);
    Predicate p;
    std::size_t i = 0;
    if (lex.empty()) throw InputError("empty predicate");
    while (i < lex.size()) {
        std::size_t j = i;
        while (j < lex.size() && lex[j].kind != Lexeme::conj) ++j;
        const std::vector<Lexeme> c(lex.begin() + static_cast<long>(i), lex.begin() + static_cast<long>(j));
        int axes = 0;
        for (const auto& l : c) axes += l.kind == Lexeme::axis;
        auto operand = [](const Lexeme& l) { return l.kind == Lexeme::axis || l.kind == Lexeme::number; };
        const bool shape3 = c.size() == 3 && operand(c[0]) && c[1].kind == Lexeme::op && operand(c[2]);
        const bool shape5 = c.size() == 5 && c[0].kind == Lexeme::number && c[1].kind == Lexeme::op &&
                            c[2].kind == Lexeme::axis && c[3].kind == Lexeme::op && c[4].kind == Lexeme::number;
        if (axes != 1 || !(shape3 || shape5)) throw InputError("cannot read condition '" + text + "'");
        AxisBound b;
        if (shape3) {
            const Lexeme& ax = c[0].kind == Lexeme::axis ? c[0] : c[2];
            b.axis = ax.text[0] - 'x';
            apply(b, c[0], c[1].text, c[2]);
        } else {
            if (c[1].text[0] != c[3].text[0]) throw InputError("chained condition must not change direction: '" + text + "'");
            b.axis = c[2].text[0] - 'x';
            apply(b, c[0], c[1].text, c[2]);
            apply(b, c[2], c[3].text, c[4]);
        }
        p.bounds.push_back(b);
        i = j + 1;
        if (j + 1 == lex.size()) throw InputError("predicate ends with a conjunction");
    }
    return p;
}

namespace {

const std::vector<std::string> kRegions{"omega", "mu", "mu_left", "mu_right", "gamma"};

bool known_region(const std::string& r) { return std::find(kRegions.begin(), kRegions.end(), r) != kRegions.end(); }

// Splits "value where: predicate".
std::pair<std::string, std::optional<Predicate>> split_where(const std::string& v, int line) {
    const auto pos = v.find("where:");
    if (pos == std::string::npos) return {trim(v), std::nullopt};
    try {
        return {trim(v.substr(0, pos)), parse_predicate(v.substr(pos + 6))};
    } catch (const InputError& e) {
        throw ConfigError(line, e.what());
    }
}

double number_or_throw(const std::string& text, int line, const std::string& key) {
    double v = 0.0;
    if (!parse_double(text, v)) throw ConfigError(line, key + ": expected a number, got '" + text + "'");
    return v;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& base_dir) {
    Scenario sc;
    sc.base_dir = base_dir;
    int geometry_line = 0;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (value.empty()) throw ConfigError(line, key + ": missing value");

        if (key == "name") {
            sc.name = value;
        } else if (key == "mode") {
            try {
                sc.mode = parse_mode(value);
            } catch (const InputError& e) {
                throw ConfigError(line, e.what());
            }
        } else if (key == "geometry") {
            if (geometry_line) throw ConfigError(line, "geometry already given on line " + std::to_string(geometry_line));
            geometry_line = line;
            const auto w = words(value);
            if (w.size() == 3 && w[0] == "two_block") {
                if (!parse_int(w[1], sc.nx) || !parse_int(w[2], sc.ny) || sc.nx < 1 || sc.ny < 1)
                    throw ConfigError(line, "two_block needs two positive integers");
            } else if (w.size() == 2 && w[0] == "mesh") {
                sc.mesh_path = w[1];
            } else {
                throw ConfigError(line, "geometry must be 'two_block <nx> <ny>' or 'mesh <path>'");
            }
        } else if (key == "eps" || key == "eps_mu" || key == "eps_gamma") {
            const double v = number_or_throw(value, line, key);
            if (!(v > 0.0)) throw ConfigError(line, key + " must be positive");
            if (key != "eps_gamma") sc.eps_mu = v;
            if (key != "eps_mu") sc.eps_gamma = v;
        } else if (key.rfind("k.", 0) == 0) {
            const std::string region = key.substr(2);
            if (!known_region(region)) throw ConfigError(line, "unknown region '" + region + "'");
            auto [v, where] = split_where(value, line);
            const double k = number_or_throw(v, line, key);
            if (!(k > 0.0)) throw ConfigError(line, key + " must be positive");
            sc.k[region].rules.push_back({where.value_or(Predicate{}), k});
        } else if (key.rfind("bc.", 0) == 0) {
            const auto dot = key.find('.', 3);
            if (dot == std::string::npos) throw ConfigError(line, "expected bc.<domain>.<tag>");
            BoundaryRule r;
            r.domain = key.substr(3, dot - 3);
            r.tag = key.substr(dot + 1);
            r.line = line;
            if (!known_region(r.domain)) throw ConfigError(line, "unknown domain '" + r.domain + "'");
            if (r.tag.empty()) throw ConfigError(line, "empty boundary tag");
            auto [v, where] = split_where(value, line);
            const auto w = words(v);
            if (w.size() != 2 || (w[0] != "pressure" && w[0] != "flux"))
                throw ConfigError(line, "boundary value must be 'pressure <v>' or 'flux <v>'");
            r.pressure = w[0] == "pressure";
            r.value = number_or_throw(w[1], line, key);
            r.where = where.value_or(Predicate{});
            sc.boundary.push_back(r);
        } else if (key.rfind("source.", 0) == 0) {
            SourceRule r;
            r.domain = key.substr(7);
            r.line = line;
            if (!known_region(r.domain)) throw ConfigError(line, "unknown domain '" + r.domain + "'");
            auto [v, where] = split_where(value, line);
            r.value = number_or_throw(v, line, key);
            r.where = where.value_or(Predicate{});
            sc.sources.push_back(r);
        } else if (key == "solver") {
            if (value == "saddle") sc.solver = SolverChoice::saddle;
            else if (value == "schur") sc.solver = SolverChoice::schur;
            else throw ConfigError(line, "solver must be saddle or schur");
        } else if (key == "output") {
            sc.output = value;
        } else if (key == "reference.refined") {
            const auto w = words(value);
            if (w.size() != 2 || !parse_int(w[0], sc.refined_nx) || !parse_int(w[1], sc.refined_ny) ||
                sc.refined_nx < 1 || sc.refined_ny < 1)
                throw ConfigError(line, "reference.refined needs two positive integers");
        } else if (key == "reference.eta_factor") {
            sc.eta_factor = number_or_throw(value, line, key);
            if (!(sc.eta_factor > 0.0 && sc.eta_factor <= 1.0)) throw ConfigError(line, "eta_factor must lie in (0, 1]");
        } else if (key == "reference.ny") {
            if (!parse_int(value, sc.reference_ny) || sc.reference_ny < 1)
                throw ConfigError(line, "reference.ny must be a positive integer");
        } else if (key == "reference.outer_size") {
            sc.reference_outer = number_or_throw(value, line, key);
            if (!(sc.reference_outer > 0.0)) throw ConfigError(line, "reference.outer_size must be positive");
        } else if (key == "sweep.eps") {
            std::string list = value;
            std::replace(list.begin(), list.end(), ',', ' ');
            sc.sweep_eps.clear();
            for (const auto& w : words(list)) {
                const double e = number_or_throw(w, line, key);
                if (!(e > 0.0)) throw ConfigError(line, "sweep values must be positive");
                sc.sweep_eps.push_back(e);
            }
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
    }
    if (!geometry_line) throw ConfigError(0, "no geometry given");
    if (!sc.k.count("omega")) throw ConfigError(0, "no values for k.omega");
    if (!sc.k.count("gamma")) throw ConfigError(0, "no values for k.gamma");
    for (const char* side : {"mu_left", "mu_right"})
        if (!sc.k.count(side) && !sc.k.count("mu")) throw ConfigError(0, std::string("no values for k.") + side);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open " + path);
    const auto parent = std::filesystem::path(path).parent_path();
    return parse_scenario(in, parent.empty() ? "." : parent.string());
}

MixedDimGeometry scenario_geometry(const Scenario& sc, int nx, int ny) {
    if (sc.structured()) return build_two_block_geometry(nx, ny);
    std::filesystem::path p(sc.mesh_path);
    if (p.is_relative() && !std::filesystem::exists(p)) p = std::filesystem::path(sc.base_dir) / p;
    return import_mesh(p.string());
}

MixedDimGeometry scenario_geometry(const Scenario& sc) { return scenario_geometry(sc, sc.nx, sc.ny); }

namespace {

bool domain_matches(const std::string& rule, const std::string& domain) {
    return rule == domain || (rule == "mu" && (domain == "mu_left" || domain == "mu_right"));
}

void set_face(DomainBoundary& bc, int face, const BoundaryRule& r, double value) {
    if (r.pressure) {
        bc.flux.erase(face);
        bc.pressure[face] = value;
    } else {
        bc.pressure.erase(face);
        bc.flux[face] = value;
    }
}

const std::array<const char*, 2> kLayerNames{"mu_left", "mu_right"};

}  // namespace

BoundaryConditions mixed_boundary(const Scenario& sc, const MixedDimGeometry& geometry) {
    BoundaryConditions bc;
    for (const auto& r : sc.boundary) {
        int hits = 0;
        auto apply_mesh = [&](DomainBoundary& target, const SimplicialMesh& mesh) {
            for (int f : mesh.faces_with_tag(r.tag)) {
                if (!r.where(mesh.face_centroid(f))) continue;
                set_face(target, f, r, r.value);
                ++hits;
            }
        };
        if (domain_matches(r.domain, "omega")) apply_mesh(bc.omega, geometry.omega);
        for (Side s : kSides)
            if (domain_matches(r.domain, kLayerNames[static_cast<int>(s)]))
                apply_mesh(bc.mu[static_cast<int>(s)], geometry.mu(s));
        if (domain_matches(r.domain, "gamma")) apply_mesh(bc.gamma, geometry.gamma);
        if (hits == 0) throw ConfigError(r.line, "bc." + r.domain + "." + r.tag + " selects no boundary face");
    }
    return bc;
}

SourceField mixed_sources(const Scenario& sc, const MixedDimGeometry& geometry) {
    SourceField src;
    auto fill = [&](std::vector<double>& q, const SimplicialMesh& mesh, const std::string& domain) {
        for (const auto& r : sc.sources) {
            if (!domain_matches(r.domain, domain)) continue;
            if (q.empty()) q.assign(mesh.num_cells(), 0.0);
            for (int c = 0; c < mesh.num_cells(); ++c)
                if (r.where(mesh.cell_centroid(c))) q[c] = r.value;
        }
    };
    fill(src.omega, geometry.omega, "omega");
    for (Side s : kSides) fill(src.mu[static_cast<int>(s)], geometry.mu(s), kLayerNames[static_cast<int>(s)]);
    fill(src.gamma, geometry.gamma, "gamma");
    return src;
}

CoefficientSet scenario_coefficients(const Scenario& sc, const MixedDimGeometry& geometry) {
    return coefficients_from_mode(geometry, sc.k, sc.mode, sc.eps_mu, sc.eps_gamma);
}

namespace {

// Domain name and thickness of a layered-mesh region.
std::pair<std::string, double> region_domain(const Scenario& sc, const std::string& region) {
    if (region == "matrix") return {"omega", 1.0};
    if (region == "damage_left") return {"mu_left", sc.eps_mu};
    if (region == "damage_right") return {"mu_right", sc.eps_mu};
    if (region == "fault") return {"gamma", sc.eps_gamma};
    throw InputError("unknown region '" + region + "'");
}

}  // namespace

DomainBoundary equidim_boundary(const Scenario& sc, const SimplicialMesh& layered) {
    DomainBoundary bc;
    for (const auto& r : sc.boundary) {
        int hits = 0;
        for (int f : layered.faces_with_tag(r.tag)) {
            const int cell = layered.face_cells(f)[0];
            const auto [domain, thickness] = region_domain(sc, layered.region_names()[layered.cell_region(cell)]);
            if (!domain_matches(r.domain, domain) || !r.where(layered.face_centroid(f))) continue;
            set_face(bc, f, r, r.pressure ? r.value : r.value / thickness);
            ++hits;
        }
        if (hits == 0)
            throw ConfigError(r.line, "bc." + r.domain + "." + r.tag + " selects no face of the equi-dimensional mesh");
    }
    return bc;
}

std::vector<double> equidim_sources(const Scenario& sc, const SimplicialMesh& layered) {
    std::vector<double> q;
    if (sc.sources.empty()) return q;
    q.assign(layered.num_cells(), 0.0);
    for (int c = 0; c < layered.num_cells(); ++c) {
        const auto [domain, thickness] = region_domain(sc, layered.region_names()[layered.cell_region(c)]);
        for (const auto& r : sc.sources)
            if (domain_matches(r.domain, domain) && r.where(layered.cell_centroid(c))) q[c] = r.value / thickness;
    }
    return q;
}

RunResult solve_scenario(const Scenario& sc, const MixedDimGeometry& geometry, Execution exec) {
    RunResult run;
    run.geometry = geometry;
    try {
        run.coeff = scenario_coefficients(sc, run.geometry);
    } catch (const InputError& e) {
        throw ConfigError(0, e.what());
    }
    const BoundaryConditions bc = mixed_boundary(sc, run.geometry);
    const SourceField src = mixed_sources(sc, run.geometry);
    run.system = assemble(run.geometry, run.coeff, bc, src, exec);
    if (sc.solver == SolverChoice::saddle) {
        run.solution = solve_saddle(run.system, &run.info);
    } else {
        if (const long dof = floating_pressure_dof(run.system); dof >= 0)
            throw SolverError("singular system: pressure dof " + std::to_string(dof) + " has no pressure boundary", dof,
                              to_string(run.system.block_of(dof)));
        const PressureSchur schur = build_pressure_schur(run.system);
        const Eigen::VectorXd p = solve_schur(schur, &run.info);
        run.solution = reconstruct_velocity(schur, p);
    }
    run.diagnostics = diagnose(run.geometry, run.coeff, run.system, run.solution);
    return run;
}

RunResult solve_scenario(const Scenario& sc, Execution exec) { return solve_scenario(sc, scenario_geometry(sc), exec); }

JumpProfile jump_profile(const RunResult& run) {
    const auto& g = run.geometry;
    const auto& sol = run.solution;
    JumpProfile out;
    out.pressure_min = 1e300;
    out.pressure_max = -1e300;
    auto extend = [&](const Eigen::VectorXd& p) {
        if (p.size() == 0) return;
        out.pressure_min = std::min(out.pressure_min, p.minCoeff());
        out.pressure_max = std::max(out.pressure_max, p.maxCoeff());
    };
    extend(sol.p_omega);
    extend(sol.p_mu[0]);
    extend(sol.p_mu[1]);
    extend(sol.p_gamma);

    std::array<std::vector<double>, 2> trace_by_cell;
    for (Side s : kSides) {
        const int k = static_cast<int>(s);
        trace_by_cell[k].assign(g.mu(s).num_cells(), std::nan(""));
        for (const auto& p : g.m(s).pairs) {
            const double lambda = trace_pressure(g, run.coeff, sol, p.higher);
            trace_by_cell[k][p.lower] = lambda;
            out.m[k].push_back({g.mu(s).cell_centroid(p.lower), lambda - sol.p_mu[k][p.lower]});
        }
        for (const auto& p : g.g(s).pairs)
            out.gamma[k].push_back({g.gamma.cell_centroid(p.lower), sol.p_mu[k][p.higher] - sol.p_gamma[p.lower]});
    }
    if (g.mu_left.num_cells() == g.mu_right.num_cells())
        for (int c = 0; c < g.mu_left.num_cells(); ++c)
            if (!std::isnan(trace_by_cell[0][c]) && !std::isnan(trace_by_cell[1][c]))
                out.across.push_back({g.mu_left.cell_centroid(c), trace_by_cell[0][c] - trace_by_cell[1][c]});
    return out;
}

namespace {

double mean_speed(const SimplicialMesh& mesh, const Eigen::VectorXd& u) {
    if (mesh.num_cells() == 0) return 0.0;
    const auto v = rt0_cell_velocities(mesh, u);
    double s = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) s += mesh.cell_measure(c) * v[c].norm();
    return s / mesh.total_measure();
}

}  // namespace

SpeedSummary mean_speeds(const RunResult& run) {
    SpeedSummary s;
    s.omega = mean_speed(run.geometry.omega, run.solution.u_omega);
    for (Side side : kSides) {
        const int k = static_cast<int>(side);
        s.mu[k] = mean_speed(run.geometry.mu(side), run.solution.u_mu[k]);
    }
    s.gamma = mean_speed(run.geometry.gamma, run.solution.u_gamma);
    return s;
}

std::string output_directory(const Scenario& sc) {
    if (const char* env = std::getenv("FAULTFLOW_OUTPUT_DIR"); env && *env) return env;
    return sc.output;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

double max_abs(const std::vector<PairJump>& v) {
    double m = 0.0;
    for (const auto& j : v) m = std::max(m, std::abs(j.value));
    return m;
}

}  // namespace

void write_summary(std::ostream& out, const Scenario& sc, const RunResult& run) {
    const auto& d = run.diagnostics;
    const auto jumps = jump_profile(run);
    const auto speeds = mean_speeds(run);
    out << "key,value\n";
    out << "scenario," << sc.name << '\n';
    out << "mode," << to_string(sc.mode) << '\n';
    out << "solver," << (sc.solver == SolverChoice::saddle ? "saddle" : "schur") << '\n';
    out << "omega_cells," << run.geometry.omega.num_cells() << '\n';
    out << "fault_cells," << run.geometry.gamma.num_cells() << '\n';
    out << "unknowns," << run.system.total_size() << '\n';
    out << "eps_mu," << num(sc.eps_mu) << '\n';
    out << "eps_gamma," << num(sc.eps_gamma) << '\n';
    out << "residual," << num(d.residual) << '\n';
    out << "p0_residual," << num(d.p0_residual) << '\n';
    out << "balance," << num(d.balance) << '\n';
    out << "m_law_residual," << num(d.m_law) << '\n';
    out << "gamma_law_residual," << num(d.gamma_law) << '\n';
    out << "pressure_min," << num(jumps.pressure_min) << '\n';
    out << "pressure_max," << num(jumps.pressure_max) << '\n';
    out << "max_jump_M_left," << num(max_abs(jumps.m[0])) << '\n';
    out << "max_jump_M_right," << num(max_abs(jumps.m[1])) << '\n';
    out << "max_jump_Gamma_left," << num(max_abs(jumps.gamma[0])) << '\n';
    out << "max_jump_Gamma_right," << num(max_abs(jumps.gamma[1])) << '\n';
    out << "max_jump_across," << num(max_abs(jumps.across)) << '\n';
    out << "mean_speed_omega," << num(speeds.omega) << '\n';
    out << "mean_speed_mu_left," << num(speeds.mu[0]) << '\n';
    out << "mean_speed_mu_right," << num(speeds.mu[1]) << '\n';
    out << "mean_speed_gamma," << num(speeds.gamma) << '\n';
}

std::vector<std::string> write_outputs(const Scenario& sc, const RunResult& run, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
    const auto& g = run.geometry;
    const auto& sol = run.solution;
    std::vector<std::string> paths;
    auto emit = [&](const std::string& file, const SimplicialMesh& mesh, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& u) {
        const std::string path = (std::filesystem::path(dir) / file).string();
        write_vtk(path, mesh, p, rt0_cell_velocities(mesh, u), sc.name + " " + file);
        paths.push_back(path);
    };
    emit("omega.vtk", g.omega, sol.p_omega, sol.u_omega);
    emit("mu_left.vtk", g.mu_left, sol.p_mu[0], sol.u_mu[0]);
    emit("mu_right.vtk", g.mu_right, sol.p_mu[1], sol.u_mu[1]);
    emit("gamma.vtk", g.gamma, sol.p_gamma, sol.u_gamma);
    const std::string summary = (std::filesystem::path(dir) / "summary.csv").string();
    std::ofstream out(summary);
    if (!out) throw InputError("cannot open " + summary + " for writing");
    write_summary(out, sc, run);
    paths.push_back(summary);
    return paths;
}

ErrorReport error_bounds(const Scenario& sc, double eps, int nx, int ny, int nx2, int ny2, double eta,
                         Execution exec) {
    if (!sc.structured()) throw ConfigError(0, "model error needs the structured two-block geometry");
    Scenario at = sc;
    at.eps_mu = at.eps_gamma = eps;

    const SimplicialMesh reference =
        build_layered_equidim_mesh(eps, eps, eta, {sc.reference_ny, sc.reference_outer, 1.2});
    const EquiDimCoefficients coeff = equidim_coefficients(reference, at.k, at.mode, eps, eps);
    const DomainBoundary bc = equidim_boundary(at, reference);
    const std::vector<double> q = equidim_sources(at, reference);
    const EquiDimSolution equi = solve_equidim(reference, coeff, bc, q, exec);

    const RunResult coarse = solve_scenario(at, build_two_block_geometry(nx, ny), exec);
    const Eigen::VectorXd ih = inject_p0(coarse.geometry.omega, coarse.solution.p_omega, reference);
    Eigen::VectorXd ih2 = ih;
    double h2 = coarse.geometry.omega.max_cell_diameter();
    if (nx2 != nx || ny2 != ny) {
        const RunResult fine = solve_scenario(at, build_two_block_geometry(nx2, ny2), exec);
        ih2 = inject_p0(fine.geometry.omega, fine.solution.p_omega, reference);
        h2 = fine.geometry.omega.max_cell_diameter();
    }
    ErrorReport r = bound_report(reference, equi.p, ih, ih2);
    r.label = sc.name;
    r.eps = eps;
    r.h = coarse.geometry.omega.max_cell_diameter();
    r.h2 = h2;
    r.eta = eta;
    return r;
}

std::vector<ErrorReport> model_error_sweep(const Scenario& sc, const std::vector<double>& eps, Execution exec) {
    const int nx2 = sc.refined_nx > 0 ? sc.refined_nx : sc.nx;
    const int ny2 = sc.refined_ny > 0 ? sc.refined_ny : sc.ny;
    std::vector<ErrorReport> out;
    for (double e : eps) out.push_back(error_bounds(sc, e, sc.nx, sc.ny, nx2, ny2, sc.eta_factor * e, exec));
    return out;
}

}  // namespace faultflow
