#include "mapchaos/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "mapchaos/ensemble.hpp"
#include "mapchaos/lyapunov.hpp"
#include "mapchaos/random.hpp"

namespace mapchaos {

namespace {

constexpr double fd_step = 1e-6;

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

CheckResult verdict(std::string name, double value, double threshold, std::string detail) {
    return {std::move(name), value, threshold, value < threshold, std::move(detail)};
}

// |analytic - fd| / max(1, |fd|), worst component
double gradient_error(Vec2 analytic, Vec2 fd) {
    return std::max(std::abs(analytic.x - fd.x) / std::max(1.0, std::abs(fd.x)),
                    std::abs(analytic.y - fd.y) / std::max(1.0, std::abs(fd.y)));
}

template <class V>
Vec2 fd_gradient(V&& v, double x, double y) {
    return {central_difference([&](double h) { return v(x + h, y); }, fd_step),
            central_difference([&](double h) { return v(x, y + h); }, fd_step)};
}

ModelParams with(ModelParams p, double J, double theta) {
    p.J = J;
    p.theta = theta;
    return p;
}

std::vector<MappingState> ensemble_states(const ModelParams& p, std::size_t n) {
    SamplingSpec spec;
    spec.n_samples = n;
    const TmtsModel model(p);
    std::vector<MappingState> out;
    for (const auto& s : sample_nuclear(spec, model)) out.push_back(init_mapping_state(s, p, spec));
    return out;
}

CheckResult potential_gradients(const CheckOptions& o, std::mt19937_64& rng) {
    double worst = 0.0;
    for (std::size_t i = 0; i < o.random_points; ++i) {
        const TmtsModel m(with(o.model, uniform(rng, 0.1, 8.0), uniform(rng, 0.0, 1.5)));
        const double x = uniform(rng, -8, 8), y = uniform(rng, -8, 8);
        worst = std::max(worst, gradient_error(m.grad_potential_a(x, y),
                                               fd_gradient([&](double u, double v) { return m.potential_a(u, v); }, x, y)));
        worst = std::max(worst, gradient_error(m.grad_potential_b(x, y),
                                               fd_gradient([&](double u, double v) { return m.potential_b(u, v); }, x, y)));
    }
    return verdict("grad V_A, V_B vs finite differences", worst, 1e-6, std::to_string(o.random_points) + " points");
}

CheckResult adiabatic_gradient(const CheckOptions& o, std::mt19937_64& rng) {
    double worst = 0.0;
    for (std::size_t i = 0; i < o.random_points; ++i) {
        const TmtsModel m(with(o.model, uniform(rng, 0.1, 8.0), uniform(rng, 0.0, 1.5)));
        const double x = uniform(rng, -8, 8), y = uniform(rng, -8, 8);
        const Vec2 fd = fd_gradient([&](double u, double v) { return m.adiabatic_lower_potential(u, v); }, x, y);
        worst = std::max(worst, gradient_error(m.grad_adiabatic_lower_potential(x, y), fd));
    }
    return verdict("grad V_ad^- vs finite differences", worst, 1e-6, std::to_string(o.random_points) + " points");
}

CheckResult mapping_hamiltonian_field(const CheckOptions& o, std::mt19937_64& rng) {
    double worst = 0.0;
    for (std::size_t i = 0; i < o.random_points; ++i) {
        const TmtsModel m(with(o.model, uniform(rng, 0.1, 8.0), uniform(rng, 0.0, 1.5)));
        std::array<double, 8> z;
        for (std::size_t c = 0; c < 4; ++c) z[c] = uniform(rng, -6, 6);
        for (std::size_t c = 4; c < 8; ++c) z[c] = uniform(rng, -2, 2);
        const auto f = m.mapping_vector_field(MappingState::from_array(z)).as_array();
        auto dH = [&](std::size_t c) {
            return central_difference(
                [&](double h) {
                    auto w = z;
                    w[c] += h;
                    return m.mapping_energy(MappingState::from_array(w));
                },
                fd_step);
        };
        // (q, p) pairs: (x, px), (y, py), (xa, pa), (xb, pb); dq/dt = dH/dp, dp/dt = -dH/dq
        constexpr std::array<std::pair<std::size_t, std::size_t>, 4> pairs{{{0, 2}, {1, 3}, {4, 5}, {6, 7}}};
        for (auto [q, p] : pairs) {
            const double dq = dH(p), dp = -dH(q);
            worst = std::max(worst, std::abs(f[q] - dq) / std::max(1.0, std::abs(dq)));
            worst = std::max(worst, std::abs(f[p] - dp) / std::max(1.0, std::abs(dp)));
        }
    }
    return verdict("mapping field vs symplectic gradient of H_map", worst, 1e-6,
                   std::to_string(o.random_points) + " states");
}

CheckResult adiabatic_eigenvalue(const CheckOptions& o, std::mt19937_64& rng) {
    double worst = 0.0;
    for (std::size_t i = 0; i < o.random_points; ++i) {
        const TmtsModel m(with(o.model, uniform(rng, -8.0, 8.0), uniform(rng, 0.0, 1.5)));
        const double x = uniform(rng, -8, 8), y = uniform(rng, -8, 8);
        Eigen::Matrix2d h;
        h << m.potential_a(x, y), m.params().J, m.params().J, m.potential_b(x, y);
        const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
        const double v = m.adiabatic_lower_potential(x, y);
        worst = std::max(worst, std::abs(v - lowest) / std::max(1.0, std::abs(lowest)));
    }
    return verdict("V_ad^- vs lowest eigenvalue of [[V_A, J], [J, V_B]]", worst, 1e-12,
                   std::to_string(o.random_points) + " points");
}

// Population and energy drift along T-horizon trajectories of the default
// ensemble for each J of the sweep.
std::vector<CheckResult> conservation(const CheckOptions& o) {
    IntegratorConfig cfg = o.integrator;
    cfg.energy_tol = 1e300; // measured, not enforced
    cfg.record_stride = 10;
    double pop = 0.0, energy = 0.0;
    std::size_t count = 0;
    for (double J : {0.3, 1.5, 7.5}) {
        const ModelParams p = with(o.model, J, std::numbers::pi / 3);
        const TmtsModel m(p);
        for (const auto& s0 : ensemble_states(p, o.trajectories)) {
            const auto traj = integrate(s0, m, cfg);
            const double n0 = occupation(s0.xa, s0.pa, p.gamma) + occupation(s0.xb, s0.pb, p.gamma);
            for (const auto& s : traj.states)
                pop = std::max(pop, std::abs(occupation(s.xa, s.pa, p.gamma) + occupation(s.xb, s.pb, p.gamma) - n0));
            energy = std::max(energy, traj.max_energy_drift);
            ++count;
        }
    }
    const std::string detail = std::to_string(count) + " trajectories, T=" + std::to_string(o.integrator.t_final) +
                               ", dt=" + std::to_string(o.integrator.dt);
    return {verdict("N_A + N_B drift", pop, 1e-9, detail), verdict("relative energy drift", energy, 1e-6, detail)};
}

// Forward T, reverse momenta, forward T, reverse again; compared in the tilde metric.
CheckResult reversibility(const CheckOptions& o) {
    IntegratorConfig cfg = o.integrator;
    cfg.energy_tol = 1e300;
    const ModelParams p = with(o.model, 0.0, std::numbers::pi / 3);
    const TmtsModel m(p);
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& s0 : ensemble_states(p, std::min<std::size_t>(o.trajectories, 8))) {
        const MappingState fwd = integrate(s0, m, cfg).states.back();
        const MappingState back = reverse_momenta(integrate(reverse_momenta(fwd), m, cfg).states.back());
        const TildeMetric metric(p, m.mapping_energy(s0));
        const auto d = metric.apply(back.as_array());
        const auto r = metric.apply(s0.as_array());
        for (std::size_t c = 0; c < 8; ++c) worst = std::max(worst, std::abs(d[c] - r[c]));
        ++count;
    }
    return verdict("forward-backward reversibility (J=0)", worst, 1e-6,
                   std::to_string(count) + " trajectories, per tilde component");
}

CheckResult x_mode_at_theta0(const CheckOptions& o) {
    IntegratorConfig cfg = o.integrator;
    cfg.energy_tol = 1e300;
    cfg.record_stride = 10;
    const ModelParams p = with(o.model, 1.5, 0.0);
    const TmtsModel m(p);
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& s0 : ensemble_states(p, o.trajectories)) {
        const auto traj = integrate(s0, m, cfg);
        const double e0 = x_mode_energy(s0.x, s0.px, p);
        const double scale = std::max(1.0, std::abs(traj.initial_energy));
        for (const auto& s : traj.states) worst = std::max(worst, std::abs(x_mode_energy(s.x, s.px, p) - e0) / scale);
        ++count;
    }
    return verdict("theta=0 x-mode energy drift (J=1.5)", worst, 1e-6, std::to_string(count) + " trajectories");
}

} // namespace

std::vector<CheckResult> run_invariant_suite(const CheckOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::vector<CheckResult> out;
    out.push_back(potential_gradients(options, rng));
    out.push_back(adiabatic_gradient(options, rng));
    out.push_back(mapping_hamiltonian_field(options, rng));
    out.push_back(adiabatic_eigenvalue(options, rng));
    for (auto& r : conservation(options)) out.push_back(std::move(r));
    out.push_back(reversibility(options));
    out.push_back(x_mode_at_theta0(options));
    return out;
}

} // namespace mapchaos
