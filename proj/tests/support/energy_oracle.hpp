#pragma once

#include <vector>

#include "aniso/grid.hpp"

namespace aniso::testing {

/// Minimizes E(U) = sum_j (1/p_j) ||d_j U||_{p_j}^{p_j} + (1/m) ||U||_m^m - <F, U> by cyclic
/// coordinate descent with a bisection line solve per node. Written against the grid geometry only.
std::vector<double> minimize_energy(const Grid& grid, const std::vector<double>& p, double m,
                                    const std::vector<double>& F, double tol = 1e-14, int max_sweeps = 500000);

}  // namespace aniso::testing
