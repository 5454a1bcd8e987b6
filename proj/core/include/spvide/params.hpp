#pragma once

#include <vector>

namespace spvide {

/// Discretization parameters shared by the solvers, the fan builder and the
/// study pipeline. Defaults keep single runs at seconds scale.
struct RunParams {
    double h_coarse = 0.01;      // mesh spacing outside the layer
    double fine_divisor = 10.0;  // in-layer spacing = epsilon / fine_divisor
    double layer_factor = 3.0;   // fine region extends to layer_factor * t0
    int fan_size = 33;           // number of characteristics
    double char_step = 1e-3;     // RK4 step for characteristic tracing
};

/// Half-decade epsilon ladder used by `converge` when none is given.
inline std::vector<double> default_epsilon_ladder() {
    return {1e-2, 3.16e-3, 1e-3, 3.16e-4};
}

}  // namespace spvide
