// Serial reference vs OpenMP assembly of the RT0-P0 operators.
#include "faultflow/kernels.hpp"
#include "faultflow/mesh.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <vector>

using namespace faultflow;

namespace {

const SimplicialMesh& mesh_for(int n) {
    static std::map<int, MixedDimGeometry> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_two_block_geometry(n, n)).first;
    return it->second.omega;
}

std::vector<Tensor> weights_for(const SimplicialMesh& mesh) {
    std::vector<Tensor> w(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) w[c] = (1.0 + 0.5 * mesh.cell_centroid(c).y()) * Tensor::Identity();
    return w;
}

void BM_assemble_serial(benchmark::State& state) {
    const auto& mesh = mesh_for(static_cast<int>(state.range(0)));
    const auto w = weights_for(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_rt0_p0_reference(mesh, w));
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}

void BM_assemble_openmp(benchmark::State& state) {
    const auto& mesh = mesh_for(static_cast<int>(state.range(0)));
    const auto w = weights_for(mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_rt0_p0(mesh, w, Execution::parallel));
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}

}  // namespace

BENCHMARK(BM_assemble_serial)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assemble_openmp)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
