#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mapchaos/dynamics.hpp"
#include "mapchaos/ensemble.hpp"
#include "mapchaos/lyapunov.hpp"

using namespace mapchaos;
using doctest::Approx;

namespace {

using Vec2d = std::array<double, 2>;

Vec2d oscillator(const Vec2d& v) { return {v[1], -v[0]}; }

// exact flow of x' = p, p' = -x
Vec2d oscillator_exact(const Vec2d& v, double t) {
    return {v[0] * std::cos(t) + v[1] * std::sin(t), -v[0] * std::sin(t) + v[1] * std::cos(t)};
}

MappingState ensemble_state(const ModelParams& p, std::size_t index) {
    SamplingSpec spec;
    const auto pts = sample_nuclear(spec, TmtsModel(p));
    return init_mapping_state(pts.at(index), p, spec);
}

} // namespace

TEST_CASE("rk4 step basics") {
    const Vec2d z{0.3, -1.2};
    CHECK(rk4_step(z, 0.1, [](const Vec2d&) { return Vec2d{0, 0}; }) == z);

    SUBCASE("one oscillator period returns to the start") {
        Vec2d v{1.0, 0.0};
        const StepPlan plan = plan_steps(2 * std::numbers::pi, 1e-3);
        for (std::size_t i = 0; i < plan.full_steps; ++i) v = rk4_step(v, 1e-3, oscillator);
        v = rk4_step(v, plan.last_dt, oscillator);
        CHECK(std::abs(v[0] - 1.0) < 1e-10);
        CHECK(std::abs(v[1]) < 1e-10);
    }
    SUBCASE("local error is fifth order") {
        const std::array<double, 3> steps{1e-2, 5e-3, 2.5e-3};
        std::array<double, 3> errs;
        for (std::size_t i = 0; i < 3; ++i) {
            const Vec2d a = rk4_step(Vec2d{0.8, 0.6}, steps[i], oscillator);
            const Vec2d e = oscillator_exact({0.8, 0.6}, steps[i]);
            errs[i] = std::hypot(a[0] - e[0], a[1] - e[1]);
        }
        // least-squares slope of log err vs log dt
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            mx += std::log(steps[i]) / 3;
            my += std::log(errs[i]) / 3;
        }
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            sxy += (std::log(steps[i]) - mx) * (std::log(errs[i]) - my);
            sxx += (std::log(steps[i]) - mx) * (std::log(steps[i]) - mx);
        }
        CHECK(sxy / sxx == Approx(5.0).epsilon(0.04));
    }
}

TEST_CASE("step planning") {
    CHECK(plan_steps(24.0, 5e-5).full_steps == 480000);
    CHECK_FALSE(plan_steps(24.0, 5e-5).partial());
    CHECK(plan_steps(24.0, 1e-3).full_steps == 24000);
    const StepPlan odd = plan_steps(1.0, 0.3);
    CHECK(odd.full_steps == 3);
    CHECK(odd.last_dt == Approx(0.1));
    CHECK(odd.partial());
}

TEST_CASE("integrator configuration") {
    IntegratorConfig c;
    CHECK(c.dt == 5e-5);
    c.dt = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.t_final = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("trajectory recording") {
    ModelParams p;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 0.01;
    c.dt = 1e-3;
    auto t = integrate(ensemble_state(p, 0), m, c);
    CHECK(t.times.size() == 2);
    CHECK(t.times.back() == 0.01);
    c.record_stride = 3;
    t = integrate(ensemble_state(p, 0), m, c);
    CHECK(t.states.size() == t.times.size());
    CHECK(t.times.size() == 5); // 0, 3, 6, 9, 10
    for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
    CHECK(t.max_energy_drift <= c.energy_tol);

    c.t_final = 0.0105;
    t = integrate(ensemble_state(p, 0), m, c);
    CHECK(t.partial_last_step);
    CHECK(t.times.back() == 0.0105);
}

TEST_CASE("J = 0 keeps N_A = 1") {
    ModelParams p;
    p.J = 0.0;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 24.0;
    const MappingState s0 = ensemble_state(p, 5);
    const MappingState s = integrate(s0, m, c).states.back();
    CHECK(std::abs(occupation(s.xa, s.pa, p.gamma) - 1.0) < 1e-9);
    CHECK(std::abs(occupation(s.xb, s.pb, p.gamma)) < 1e-9);
}

TEST_CASE("time reversal on the integrable system") {
    ModelParams p;
    p.J = 0.0;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 24.0;
    const MappingState s0 = ensemble_state(p, 11);
    const MappingState fwd = integrate(s0, m, c).states.back();
    const MappingState back = reverse_momenta(integrate(reverse_momenta(fwd), m, c).states.back());
    const TildeMetric metric(p, m.mapping_energy(s0));
    const auto a = metric.apply(back.as_array()), b = metric.apply(s0.as_array());
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
}

TEST_CASE("theta = 0 conserves the x-mode energy") {
    ModelParams p;
    p.theta = 0.0;
    p.J = 1.5;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 24.0;
    c.record_stride = 100;
    const MappingState s0 = ensemble_state(p, 3);
    const auto t = integrate(s0, m, c);
    const double e0 = x_mode_energy(s0.x, s0.px, p);
    for (const auto& s : t.states) CHECK(std::abs(x_mode_energy(s.x, s.px, p) - e0) < 1e-6);
    CHECK(t.max_energy_drift < 1e-6);
}

TEST_CASE("determinism") {
    ModelParams p;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 2.0;
    c.record_stride = 1000;
    const auto a = integrate(ensemble_state(p, 7), m, c);
    const auto b = integrate(ensemble_state(p, 7), m, c);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i].as_array() == b.states[i].as_array());
}

TEST_CASE("failure reporting") {
    ModelParams p;
    const TmtsModel m(p);
    IntegratorConfig c;
    c.t_final = 1.0;

    SUBCASE("non-finite state") {
        MappingState s = ensemble_state(p, 0);
        s.px = std::numeric_limits<double>::infinity();
        try {
            integrate(s, m, c);
            FAIL("expected divergence");
        } catch (const DynamicsError& e) {
            CHECK(e.kind() == FailureKind::divergence);
        }
    }
    SUBCASE("energy drift above tolerance") {
        c.dt = 1e-2;
        c.energy_tol = 1e-12;
        try {
            integrate(ensemble_state(p, 0), m, c);
            FAIL("expected energy drift");
        } catch (const DynamicsError& e) {
            CHECK(e.kind() == FailureKind::energy_drift);
            CHECK(e.time() > 0);
        }
    }
    SUBCASE("adiabatic degenerate point") {
        ModelParams q;
        q.J = 0.0;
        q.theta = 0.0;
        q.eps_b = 0.0;
        try {
            integrate(AdiabaticState{0.7, 2.0, 0.0, 0.0}, TmtsModel(q), c);
            FAIL("expected singularity");
        } catch (const DynamicsError& e) {
            CHECK(e.kind() == FailureKind::singularity);
        }
    }
}

TEST_CASE("adiabatic energy conservation") {
    ModelParams p;
    p.J = 1.5;
    const TmtsModel m(p);
    SamplingSpec spec;
    const auto pts = sample_nuclear(spec, m);
    IntegratorConfig c;
    c.t_final = 24.0;
    for (std::size_t i : {0u, 13u, 27u}) {
        const auto t = integrate(init_adiabatic_state(pts[i]), m, c);
        CHECK(t.max_energy_drift < 1e-6);
        CHECK(t.initial_energy <= spec.e0);
    }
}

TEST_CASE("default step conserves energy to 1e-8, halved step does no worse") {
    for (double J : {0.3, 1.5, 7.5}) {
        ModelParams p;
        p.J = J;
        const TmtsModel m(p);
        const auto pts = sample_nuclear(SamplingSpec{}, m);
        IntegratorConfig c;
        IntegratorConfig half = c;
        half.dt = c.dt / 2;
        for (std::size_t i : {3u, 21u}) {
            const auto map = integrate(init_mapping_state(pts[i], p, SamplingSpec{}), m, c);
            const auto ad = integrate(init_adiabatic_state(pts[i]), m, c);
            CHECK(map.max_energy_drift < 1e-8);
            CHECK(ad.max_energy_drift < 1e-8);
            const auto map_half = integrate(init_mapping_state(pts[i], p, SamplingSpec{}), m, half);
            CHECK(map_half.max_energy_drift <= map.max_energy_drift);
        }
    }
}
