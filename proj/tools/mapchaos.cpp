// mapchaos: finite-time Lyapunov exponent distributions of the TMTS mapping
// system and its lower adiabatic reference.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mapchaos/checks.hpp"
#include "mapchaos/experiments.hpp"

using namespace mapchaos;

namespace {

struct RunFlags {
    std::string preset;
    std::string system;
    std::vector<double> couplings;
    std::vector<double> thetas;
    double energy = 0, segment_time = 0, dt = 0, d0 = 0, gamma = 0, energy_tol = 0;
    double omega_x = 0, omega_y = 0, well_distance = 0, depsilon = 0, bins = 0, renorm = 0;
    std::size_t samples = 0, segments = 0, workers = 1;
    std::uint64_t seed = 0;
    std::string range, metric, averaging, phase_mode;
    std::string out = "mapchaos_out";
};

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected low:high, got '" + text + "'");
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

RunSpec build_spec(const CLI::App& cmd, const RunFlags& f) {
    RunSpec spec = f.preset.empty() ? RunSpec{} : preset(f.preset);
    auto given = [&](const char* name) { return cmd.count(name) > 0; };

    if (given("--system")) spec.system = system_kind_from_string(f.system);
    if (given("--coupling")) spec.couplings = f.couplings;
    if (given("--theta")) spec.thetas = f.thetas;
    if (given("--energy")) spec.sampling.e0 = f.energy;
    if (given("--samples")) spec.sampling.n_samples = f.samples;
    if (given("--phase-mode")) spec.sampling.phase_mode = phase_mode_from_string(f.phase_mode);
    if (given("--segment-time")) spec.lyapunov.segment_time = f.segment_time;
    if (given("--segments")) spec.lyapunov.n_segments = f.segments;
    if (given("--d0")) spec.lyapunov.d0 = f.d0;
    if (given("--renorm-interval")) spec.lyapunov.renormalization_interval = f.renorm;
    if (given("--metric")) spec.lyapunov.metric = metric_mode_from_string(f.metric);
    if (given("--averaging")) spec.lyapunov.averaging = averaging_mode_from_string(f.averaging);
    if (given("--dt")) spec.integrator.dt = f.dt;
    if (given("--energy-tol")) spec.integrator.energy_tol = f.energy_tol;
    if (given("--seed")) {
        spec.sampling.seed = f.seed;
        spec.lyapunov.seed = f.seed;
    }
    if (given("--gamma")) spec.model.gamma = f.gamma;
    if (given("--omega-x")) spec.model.omega_x = f.omega_x;
    if (given("--omega-y")) spec.model.omega_y = f.omega_y;
    if (given("--well-distance")) spec.model.a = f.well_distance;
    if (given("--depsilon")) spec.model.eps_b = spec.model.eps_a + f.depsilon;
    if (given("--bins")) spec.histogram.width = f.bins;
    if (given("--range")) std::tie(spec.histogram.low, spec.histogram.high) = parse_range(f.range);
    spec.workers = f.workers;
    spec.output_path = f.out;
    // single-valued sweeps also set the base model so summaries stay consistent
    if (spec.couplings.size() == 1) spec.model.J = spec.couplings.front();
    if (spec.thetas.size() == 1) spec.model.theta = spec.thetas.front();
    spec.validate();
    return spec;
}

int run_command(const CLI::App& cmd, const RunFlags& flags) {
    const RunSpec spec = build_spec(cmd, flags);
    const auto cells = run_experiment(spec);
    write_outputs(cells, spec.output_path);
    for (const auto& c : cells) {
        const Summary& s = c.summary;
        std::printf("%-9s J=%-6g theta=%-8.5f ok=%zu failed=%zu median=%.4f IQR=%.4f mode=[%.2f,%.2f)\n",
                    to_string(c.system), c.J, c.theta, s.n_ok, s.failed, s.median, s.iqr, s.mode_left,
                    s.mode_right);
    }
    std::printf("wrote %s/{records.csv,histogram.csv,summary.json}\n", spec.output_path.string().c_str());
    return 0;
}

int check_command(double dt, std::size_t trajectories) {
    CheckOptions options;
    options.integrator.dt = dt;
    options.trajectories = trajectories;
    bool all = true;
    for (const auto& r : run_invariant_suite(options)) {
        std::printf("[%s] %-52s %.3e < %.0e  (%s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value,
                    r.threshold, r.detail.c_str());
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-time Lyapunov exponents of the two-mode-two-state mapping system"};
    app.require_subcommand(1);

    RunFlags f;
    CLI::App* run = app.add_subcommand("run", "Run a parameter sweep and write CSV/JSON results");
    app.set_config("--config", "", "TOML/INI file; options for `run` go under a [run] section (flags override it)");
    run->fallthrough();
    run->add_option("--preset", f.preset, "fig2 | fig3 | fig4")->check(CLI::IsMember(preset_names()));
    run->add_option("--system", f.system, "mapping | adiabatic")->check(CLI::IsMember({"mapping", "adiabatic"}));
    run->add_option("--coupling", f.couplings, "J values (comma separated)")->delimiter(',');
    run->add_option("--theta", f.thetas, "Duschinsky angles in radians (comma separated)")->delimiter(',');
    run->add_option("--energy", f.energy, "sampling energy E0 (default 28)");
    run->add_option("--samples", f.samples, "initial conditions per cell (default 40)");
    run->add_option("--phase-mode", f.phase_mode, "zero | random electronic phases")
        ->check(CLI::IsMember({"zero", "random"}));
    run->add_option("--segment-time", f.segment_time, "Benettin segment length T (default 24)");
    run->add_option("--segments", f.segments, "number of segments averaged (default 10)");
    run->add_option("--renorm-interval", f.renorm, "rescaling interval inside a segment (default 1; 0 = once)");
    run->add_option("--metric", f.metric, "corrected | literal")->check(CLI::IsMember({"corrected", "literal"}));
    run->add_option("--averaging", f.averaging, "consecutive | restarts")
        ->check(CLI::IsMember({"consecutive", "restarts"}));
    run->add_option("--dt", f.dt, "RK4 step (default 5e-5)");
    run->add_option("--energy-tol", f.energy_tol, "relative energy drift abort threshold (default 1e-6)");
    run->add_option("--d0", f.d0, "initial tilde separation (default 1e-7)");
    run->add_option("--seed", f.seed, "seed for electronic phases and perturbation directions");
    run->add_option("--gamma", f.gamma, "mapping zero-point parameter (default 0.5)");
    run->add_option("--omega-x", f.omega_x, "frequency along x (default 1)");
    run->add_option("--omega-y", f.omega_y, "frequency along y (default sqrt 2)");
    run->add_option("--well-distance", f.well_distance, "half-distance a between the minima (default 2)");
    run->add_option("--depsilon", f.depsilon, "eps_B - eps_A (default 0.173)");
    run->add_option("--bins", f.bins, "histogram bin width (default 0.05)");
    run->add_option("--range", f.range, "histogram range low:high (default -0.2:2.0)");
    run->add_option("--workers", f.workers, "parallel workers")->check(CLI::PositiveNumber);
    run->add_option("--out", f.out, "output directory");

    double check_dt = IntegratorConfig{}.dt;
    std::size_t check_trajectories = 40;
    CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
    check->add_option("--dt", check_dt, "RK4 step for the trajectory checks");
    check->add_option("--trajectories", check_trajectories, "initial conditions per trajectory check");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return run_command(*run, f);
        return check_command(check_dt, check_trajectories);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mapchaos: %s\n", e.what());
        return 2;
    }
}
