#pragma once

#include "serrin/coeffs.hpp"
#include "serrin/types.hpp"
#include "serrin/grid.hpp"

#include <Eigen/Core>

namespace serrin {

struct OutOfStripError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The harmonic function omega on a grid, built column-by-column by
/// integrating the capillary x-ODE 2 omega_x = -alpha e^{-omega} -
/// beta e^{omega} from the shared profile at x = 0. Integration is carried
/// in Z = e^{-omega} (or its reciprocal where Z grows) to avoid exponential
/// stiffness near the strip ends.
struct OmegaField {
    GridSpec grid;
    Eigen::MatrixXd omega;   // (ny, nx)
    Eigen::MatrixXd omega_y; // exact from the propagated Z_y
    double vartheta = 0;
};

OmegaField omega_field(const ModelParams& p, const CoeffPair& coeffs, const GridSpec& grid);

/// Row samples of g and g' obtained by integrating g'' = 2 omega_z g'
/// along x together with the (Z, Z_y) state; the test oracle for the
/// closed-form developing maps.
struct OdeMapSamples {
    GridSpec grid;
    Eigen::MatrixXcd G, Gp;
};

OdeMapSamples developing_map_ode(const ModelParams& p, const CoeffPair& coeffs,
                                 const GridSpec& grid);

} // namespace serrin
