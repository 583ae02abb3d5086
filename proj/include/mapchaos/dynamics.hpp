// Fixed-step RK4 propagation with energy monitoring.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mapchaos/errors.hpp"
#include "mapchaos/model.hpp"

namespace mapchaos {

struct IntegratorConfig {
    double dt = 5e-5;
    double t_final = 24.0;
    double energy_tol = 1e-6;      // relative drift, see relative_drift()
    std::size_t record_stride = 0; // 0 records the endpoints only

    void validate() const;
};

/// Number of full steps of size dt that fit in a horizon, and the length of
/// the trailing partial step (0 when the horizon is a whole multiple of dt).
struct StepPlan {
    std::size_t full_steps = 0;
    double last_dt = 0.0;
    bool partial() const { return last_dt > 0.0; }
};

StepPlan plan_steps(double horizon, double dt);

/// |E - E0| / max(1, |E0|).
inline double relative_drift(double energy, double initial_energy) {
    return std::abs(energy - initial_energy) / std::max(1.0, std::abs(initial_energy));
}

template <std::size_t N>
bool all_finite(const std::array<double, N>& v) {
    for (double c : v)
        if (!std::isfinite(c)) return false;
    return true;
}

/// Classical fourth-order Runge-Kutta step for dy/dt = field(y).
template <std::size_t N, class Field>
std::array<double, N> rk4_step(const std::array<double, N>& y, double dt, Field&& field) {
    using Vec = std::array<double, N>;
    auto axpy = [](const Vec& base, double h, const Vec& k) {
        Vec out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + h * k[i];
        return out;
    };
    const Vec k1 = field(y);
    const Vec k2 = field(axpy(y, 0.5 * dt, k1));
    const Vec k3 = field(axpy(y, 0.5 * dt, k2));
    const Vec k4 = field(axpy(y, dt, k3));
    Vec out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Step of the mapped or adiabatic equations of motion. Throws
/// DynamicsError(divergence) when the result has a non-finite component.
MappingState rk4_step(const MappingState& s, double dt, const TmtsModel& model);
AdiabaticState rk4_step(const AdiabaticState& s, double dt, const TmtsModel& model);

inline double energy_of(const MappingState& s, const TmtsModel& m) { return m.mapping_energy(s); }
inline double energy_of(const AdiabaticState& s, const TmtsModel& m) { return m.adiabatic_energy(s); }

template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double max_energy_drift = 0.0;
    bool partial_last_step = false;
};

/// Propagates from t = 0 to config.t_final. Throws DynamicsError on energy
/// drift above config.energy_tol, on a non-finite state, or (adiabatic) at a
/// degenerate point.
Trajectory<MappingState> integrate(const MappingState& initial, const TmtsModel& model,
                                   const IntegratorConfig& config);
Trajectory<AdiabaticState> integrate(const AdiabaticState& initial, const TmtsModel& model,
                                     const IntegratorConfig& config);

} // namespace mapchaos
