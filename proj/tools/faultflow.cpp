// faultflow command line: run a scenario, sweep the layer thickness, or check a mesh.
#include "faultflow/error.hpp"
#include "faultflow/scenario.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace faultflow;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2 };

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_run(const std::string& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = load_scenario(config);
    std::cout << "scenario " << sc.name << "  mode " << to_string(sc.mode) << "  eps_mu " << sc.eps_mu
              << "  eps_gamma " << sc.eps_gamma << '\n';
    const RunResult run = solve_scenario(sc);
    const std::string dir = output_directory(sc);
    const auto paths = write_outputs(sc, run, dir);
    const auto& d = run.diagnostics;
    const auto speeds = mean_speeds(run);
    std::printf("unknowns %ld  residual %.2e  p0 %.2e  balance %.2e  M law %.2e  Gamma law %.2e\n",
                run.system.total_size(), d.residual, d.p0_residual, d.balance, d.m_law, d.gamma_law);
    std::printf("mean speed  omega %.3e  mu_left %.3e  mu_right %.3e  gamma %.3e\n", speeds.omega, speeds.mu[0],
                speeds.mu[1], speeds.gamma);
    for (const auto& p : paths) std::cout << "wrote " << p << '\n';
    std::printf("done in %.2f s\n", seconds_since(t0));
    return kOk;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::string list = text;
    for (char& c : list)
        if (c == ',') c = ' ';
    std::istringstream in(list);
    std::vector<double> out;
    std::string w;
    while (in >> w) {
        char* end = nullptr;
        const double v = std::strtod(w.c_str(), &end);
        if (*end != '\0' || !(v > 0.0)) throw ConfigError(0, "--eps: bad value '" + w + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(0, "--eps: empty list");
    return out;
}

int cmd_sweep(const std::string& config, const std::string& eps_text) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = load_scenario(config);
    const std::vector<double> eps = eps_text.empty() ? sc.sweep_eps : parse_eps_list(eps_text);
    if (eps.empty()) throw ConfigError(0, "no thickness values: pass --eps or set sweep.eps");
    std::cout << "sweep " << sc.name << "  mode " << to_string(sc.mode) << '\n';
    const auto reports = model_error_sweep(sc, eps);
    std::printf("%10s %14s %14s %14s %14s\n", "eps", "e_tilde", "delta_p", "lower", "upper");
    for (const auto& r : reports)
        std::printf("%10.4g %14.6e %14.6e %14.6e %14.6e\n", r.eps, r.e_tilde, r.delta_p, r.lower, r.upper);
    const std::string dir = output_directory(sc);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::string path = (std::filesystem::path(dir) / "model_error.csv").string();
    std::ofstream out(path);
    if (!out) throw ConfigError(0, "cannot write " + path);
    write_error_csv(out, reports);
    std::cout << "wrote " << path << '\n';
    std::printf("done in %.2f s\n", seconds_since(t0));
    return kOk;
}

int cmd_check_mesh(const std::string& file) {
    const MixedDimGeometry g = import_mesh(file);
    std::cout << "omega: dim " << g.omega.dim() << ", " << g.omega.num_cells() << " cells, " << g.omega.num_faces()
              << " faces, measure " << g.omega.total_measure() << '\n';
    for (Side s : kSides)
        std::cout << "mu_" << to_string(s) << ": " << g.mu(s).num_cells() << " cells, M pairs "
                  << g.m(s).pairs.size() << ", Gamma pairs " << g.g(s).pairs.size() << '\n';
    std::cout << "gamma: " << g.gamma.num_cells() << " cells\nok\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darcy flow with a fault core and damage layers as overlapping interfaces"};
    app.require_subcommand(1);

    std::string config, eps, mesh;
    auto* run = app.add_subcommand("run", "solve one scenario and write VTK and summary.csv");
    run->add_option("config", config, "scenario file")->required();
    auto* sweep = app.add_subcommand("sweep", "model error against the equi-dimensional reference");
    sweep->add_option("config", config, "scenario file")->required();
    sweep->add_option("--eps", eps, "comma separated layer thicknesses");
    auto* check = app.add_subcommand("check-mesh", "import a mesh file and validate it");
    check->add_option("file", mesh, "mesh file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(config);
        if (*sweep) return cmd_sweep(config, eps);
        return cmd_check_mesh(mesh);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
}
