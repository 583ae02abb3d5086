#include "mapchaos/dynamics.hpp"

#include <cmath>
#include <string>

namespace mapchaos {

const char* to_string(FailureKind kind) {
    switch (kind) {
    case FailureKind::energy_drift: return "energy_drift";
    case FailureKind::divergence: return "divergence";
    case FailureKind::singularity: return "singularity";
    }
    return "unknown";
}

void IntegratorConfig::validate() const {
    if (!(dt > 0)) throw std::invalid_argument("integrator: dt must be > 0");
    if (!(t_final > 0)) throw std::invalid_argument("integrator: t_final must be > 0");
    if (!(energy_tol > 0)) throw std::invalid_argument("integrator: energy_tol must be > 0");
}

StepPlan plan_steps(double horizon, double dt) {
    const double ratio = horizon / dt;
    const double nearest = std::round(ratio);
    StepPlan plan;
    // horizons within a few ulps of a whole multiple of dt count as exact
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        plan.full_steps = static_cast<std::size_t>(nearest);
        return plan;
    }
    plan.full_steps = static_cast<std::size_t>(std::floor(ratio));
    plan.last_dt = horizon - static_cast<double>(plan.full_steps) * dt;
    return plan;
}

namespace {

template <class State>
State checked(const State& next, double dt) {
    if (!all_finite(next.as_array()))
        throw DynamicsError(FailureKind::divergence, "non-finite state after step of size " + std::to_string(dt));
    return next;
}

template <class State>
Trajectory<State> integrate_impl(const State& initial, const TmtsModel& model, const IntegratorConfig& config) {
    config.validate();
    const StepPlan plan = plan_steps(config.t_final, config.dt);

    Trajectory<State> traj;
    traj.partial_last_step = plan.partial();
    traj.initial_energy = energy_of(initial, model);
    traj.times.push_back(0.0);
    traj.states.push_back(initial);

    State s = initial;
    const std::size_t total = plan.full_steps + (plan.partial() ? 1 : 0);
    for (std::size_t k = 0; k < total; ++k) {
        const bool last = (k + 1 == total);
        const double h = (k < plan.full_steps) ? config.dt : plan.last_dt;
        const double t = (k < plan.full_steps) ? static_cast<double>(k + 1) * config.dt : config.t_final;
        try {
            s = rk4_step(s, h, model);
        } catch (DynamicsError& e) {
            throw DynamicsError(e.kind(), std::string(e.what()) + " at t=" + std::to_string(t), t);
        }
        const double drift = relative_drift(energy_of(s, model), traj.initial_energy);
        traj.max_energy_drift = std::max(traj.max_energy_drift, drift);
        if (!(drift <= config.energy_tol)) {
            throw DynamicsError(FailureKind::energy_drift,
                                "relative energy drift " + std::to_string(drift) + " exceeds tolerance at t=" +
                                    std::to_string(t),
                                t);
        }
        if (last || (config.record_stride > 0 && (k + 1) % config.record_stride == 0)) {
            traj.times.push_back(last ? config.t_final : t);
            traj.states.push_back(s);
        }
    }
    traj.final_energy = energy_of(s, model);
    return traj;
}

} // namespace

MappingState rk4_step(const MappingState& s, double dt, const TmtsModel& model) {
    auto field = [&model](const std::array<double, 8>& v) {
        return model.mapping_vector_field(MappingState::from_array(v)).as_array();
    };
    return checked(MappingState::from_array(rk4_step(s.as_array(), dt, field)), dt);
}

AdiabaticState rk4_step(const AdiabaticState& s, double dt, const TmtsModel& model) {
    auto field = [&model](const std::array<double, 4>& v) {
        return model.adiabatic_vector_field(AdiabaticState::from_array(v)).as_array();
    };
    return checked(AdiabaticState::from_array(rk4_step(s.as_array(), dt, field)), dt);
}

Trajectory<MappingState> integrate(const MappingState& initial, const TmtsModel& model,
                                   const IntegratorConfig& config) {
    return integrate_impl(initial, model, config);
}

Trajectory<AdiabaticState> integrate(const AdiabaticState& initial, const TmtsModel& model,
                                     const IntegratorConfig& config) {
    return integrate_impl(initial, model, config);
}

} // namespace mapchaos
