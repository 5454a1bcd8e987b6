#include "spvide/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "spvide/analysis.hpp"
#include "spvide/errors.hpp"

namespace spvide {

namespace {

// Appends the uniform subdivision of (a, b] with spacing <= h.
void subdivide(std::vector<double>& nodes, double a, double b, double h) {
    if (!(b > a)) return;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / h - 1e-9)));
    for (std::size_t k = 1; k <= n; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(n);
        nodes.push_back(k == n ? b : a + (b - a) * u);
    }
}

}  // namespace

Mesh Mesh::refined() const {
    Mesh fine;
    fine.fine_region_end = fine_region_end;
    fine.h_fine = 0.5 * h_fine;
    fine.h_coarse = 0.5 * h_coarse;
    fine.layer_edge = layer_edge;
    fine.nodes.reserve(2 * nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        fine.nodes.push_back(nodes[i]);
        fine.nodes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    fine.nodes.push_back(nodes.back());
    return fine;
}

Mesh build_mesh(std::optional<double> epsilon, double gamma, double t_end, double h_coarse,
                double layer_factor, double fine_divisor) {
    if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");
    if (!(h_coarse > 0.0)) throw InvalidParameter("h_coarse must be positive");

    Mesh mesh;
    mesh.h_coarse = h_coarse;
    mesh.nodes.push_back(0.0);

    if (!epsilon) {
        mesh.h_fine = h_coarse;
        subdivide(mesh.nodes, 0.0, t_end, h_coarse);
        return mesh;
    }

    if (!(layer_factor > 0.0)) throw InvalidParameter("layer_factor must be positive");
    if (!(fine_divisor > 0.0)) throw InvalidParameter("fine_divisor must be positive");
    const double t0 = compute_t0(*epsilon, gamma);  // validates epsilon and gamma

    mesh.layer_edge = t0;
    mesh.fine_region_end = std::min(t_end, layer_factor * t0);
    mesh.h_fine = std::min(h_coarse, *epsilon / fine_divisor);

    const double anchor = std::min(t0, mesh.fine_region_end);
    subdivide(mesh.nodes, 0.0, anchor, mesh.h_fine);
    subdivide(mesh.nodes, anchor, mesh.fine_region_end, mesh.h_fine);
    if (t0 > mesh.fine_region_end && t0 < t_end) {
        // layer_factor < 1 leaves t0 outside the fine region; keep it a node.
        subdivide(mesh.nodes, mesh.fine_region_end, t0, h_coarse);
        subdivide(mesh.nodes, t0, t_end, h_coarse);
    } else {
        subdivide(mesh.nodes, mesh.fine_region_end, t_end, h_coarse);
    }
    return mesh;
}

}  // namespace spvide
