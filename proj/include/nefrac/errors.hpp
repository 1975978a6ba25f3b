#pragma once

#include <stdexcept>
#include <string>

namespace nefrac {

// A configuration that fails the nested-fractal axioms (too few essential
// fixed points, disconnected level-1 cells, broken symmetry, ...).
struct invalid_fractal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vertex identification hit the ambiguity band: some pairwise distance fell
// between eps_id and 4*eps_id, so coincidence cannot be decided safely.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature level too coarse for the requested radius (rho^m > r/4).
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The traced energy is not representable in any supported form family.
struct model_mismatch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inner minimization failed to reach the optimality tolerance in the
// iteration budget.
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nefrac
