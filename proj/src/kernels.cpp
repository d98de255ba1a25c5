#include "faultflow/kernels.hpp"

#include "faultflow/error.hpp"

#include <exception>
#include <vector>

namespace faultflow {

namespace {

using Triplet = Eigen::Triplet<double>;

void check_sizes(const SimplicialMesh& mesh, std::span<const Tensor> weights) {
    if (static_cast<int>(weights.size()) != mesh.num_cells())
        throw InputError("need one weight per cell: got " + std::to_string(weights.size()) + " for " +
                         std::to_string(mesh.num_cells()) + " cells");
}

DomainOperators finish(const SimplicialMesh& mesh, const std::vector<Triplet>& mass,
                       const std::vector<Triplet>& div) {
    DomainOperators out;
    out.mass.resize(mesh.num_faces(), mesh.num_faces());
    out.mass.setFromTriplets(mass.begin(), mass.end());
    out.div.resize(mesh.num_faces(), mesh.num_cells());
    out.div.setFromTriplets(div.begin(), div.end());
    return out;
}

}  // namespace

DomainOperators assemble_rt0_p0(const SimplicialMesh& mesh, std::span<const Tensor> weights, Execution exec) {
    if (exec == Execution::serial) return assemble_rt0_p0_reference(mesh, weights);
    check_sizes(mesh, weights);

    const int n = mesh.dim() + 1;
    const long cells = mesh.num_cells();
    std::vector<Triplet> mass(static_cast<std::size_t>(cells) * n * n);
    std::vector<Triplet> div(static_cast<std::size_t>(cells) * n);

    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (long c = 0; c < cells; ++c) {
        try {
            const CellGeometry geo = mesh.cell_geometry(static_cast<int>(c));
            const LocalMatrix local = rt0_local_mass(geo, weights[c]);
            const auto faces = mesh.cell_faces(static_cast<int>(c));
            const auto signs = mesh.cell_face_signs(static_cast<int>(c));
            Triplet* m = mass.data() + c * n * n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m[i * n + j] = Triplet(faces[i], faces[j], local(i, j));
            for (int i = 0; i < n; ++i) div[c * n + i] = Triplet(faces[i], static_cast<int>(c), -signs[i]);
        } catch (...) {
#pragma omp critical(faultflow_kernel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return finish(mesh, mass, div);
}

DomainOperators assemble_rt0_p0_reference(const SimplicialMesh& mesh, std::span<const Tensor> weights) {
    check_sizes(mesh, weights);
    std::vector<Triplet> mass, div;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const LocalMatrix local = rt0_local_mass(mesh.cell_geometry(c), weights[c]);
        const auto faces = mesh.cell_faces(c);
        const auto signs = mesh.cell_face_signs(c);
        for (int i = 0; i <= mesh.dim(); ++i) {
            for (int j = 0; j <= mesh.dim(); ++j) mass.emplace_back(faces[i], faces[j], local(i, j));
            div.emplace_back(faces[i], c, -signs[i]);
        }
    }
    return finish(mesh, mass, div);
}

}  // namespace faultflow
