#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace spvide {

/// Time mesh for trajectory solves. Perturbed meshes are graded: spacing at
/// most h_fine on [0, fine_region_end] (the boundary layer, resolved at
/// epsilon/fine_divisor) and at most h_coarse beyond; the layer edge
/// t0 = (eps/gamma)|ln eps| is always placed exactly on a node. Degenerate
/// meshes are uniform with spacing at most h_coarse.
struct Mesh {
    std::vector<double> nodes;  // strictly increasing, nodes[0]=0, back()=t_end
    double fine_region_end = 0.0;
    double h_fine = 0.0;
    double h_coarse = 0.0;
    double layer_edge = 0.0;  // t0 for perturbed meshes, 0 otherwise

    std::size_t size() const noexcept { return nodes.size(); }

    /// Midpoint refinement: keeps every node and halves every spacing.
    /// Refined meshes nest, which is what Richardson comparisons need.
    Mesh refined() const;
};

/// Builds the solve mesh. epsilon == nullopt requests the uniform
/// degenerate mesh. For the perturbed mesh, fine_region_end =
/// min(t_end, layer_factor * t0) and h_fine = min(h_coarse,
/// epsilon / fine_divisor).
Mesh build_mesh(std::optional<double> epsilon, double gamma, double t_end, double h_coarse,
                double layer_factor = 3.0, double fine_divisor = 10.0);

}  // namespace spvide
