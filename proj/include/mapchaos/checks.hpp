// Invariant suite behind `mapchaos check`: analytic derivatives against
// finite differences, the adiabatic surface against a 2x2 eigensolver, and
// conservation / reversibility along trajectories.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mapchaos/dynamics.hpp"
#include "mapchaos/model.hpp"

namespace mapchaos {

struct CheckResult {
    std::string name;
    double value = 0.0;     // worst observed error
    double threshold = 0.0; // pass iff value < threshold
    bool passed = false;
    std::string detail;
};

struct CheckOptions {
    ModelParams model;              // theta and J are overridden per check where stated
    IntegratorConfig integrator;    // dt and horizon for the trajectory checks
    std::size_t random_points = 200;
    std::size_t trajectories = 40;  // ensemble initial conditions per trajectory check
    std::uint64_t seed = 7;
};

std::vector<CheckResult> run_invariant_suite(const CheckOptions& options);

/// Central finite difference of a scalar function along one coordinate.
template <class F>
double central_difference(F&& f, double h) {
    return (f(h) - f(-h)) / (2.0 * h);
}

} // namespace mapchaos
