#include "mapchaos/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mapchaos/random.hpp"

namespace mapchaos {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::uint64_t phase_stream_tag = 0x5048415345ULL; // "PHASE"
}

PhaseMode phase_mode_from_string(const std::string& name) {
    if (name == "zero") return PhaseMode::zero;
    if (name == "random") return PhaseMode::random;
    throw std::invalid_argument("unknown phase mode '" + name + "' (expected zero|random)");
}

const char* to_string(PhaseMode mode) { return mode == PhaseMode::zero ? "zero" : "random"; }

AdmissibleArc admissible_arc(const SamplingSpec& spec, const TmtsModel& model) {
    const ModelParams& p = model.params();
    if (!(spec.e0 > p.eps_a))
        throw SamplingError(SamplingError::Kind::invalid_energy,
                            "sampling energy " + std::to_string(spec.e0) + " must exceed eps_a = " +
                                std::to_string(p.eps_a));
    const double r = std::sqrt(2.0 * (spec.e0 - p.eps_a));
    const double rx = r / p.omega_x, ry = r / p.omega_y;

    // y - x tan(theta) = ry sin(phi) - tan(theta) rx cos(phi) = R sin(phi - delta)
    const double t = std::tan(p.theta);
    const double amp = std::hypot(ry, t * rx);
    const double delta = std::atan2(t * rx, ry);
    const double c = p.a / std::cos(p.theta);

    if (c > amp) return {0.0, two_pi, true};
    if (c <= -amp)
        throw SamplingError(SamplingError::Kind::empty_arc, "no point of the V_A = E0 curve lies below the seam");
    // R sin(psi) < c  <=>  psi in (pi - asin(c/R), 2 pi + asin(c/R))
    const double s = std::asin(c / amp);
    const double begin = delta + std::numbers::pi - s;
    const double length = std::numbers::pi + 2.0 * s;
    if (!(length > 0.0))
        throw SamplingError(SamplingError::Kind::empty_arc, "no point of the V_A = E0 curve lies below the seam");
    return {std::fmod(begin, two_pi), length, false};
}

std::vector<NuclearSample> sample_nuclear(const SamplingSpec& spec, const TmtsModel& model) {
    if (spec.n_samples < 1) throw SamplingError(SamplingError::Kind::invalid_spec, "n_samples must be >= 1");
    const AdmissibleArc arc = admissible_arc(spec, model);
    const ModelParams& p = model.params();
    const double r = std::sqrt(2.0 * (spec.e0 - p.eps_a));
    const double rx = r / p.omega_x, ry = r / p.omega_y;
    const double n = static_cast<double>(spec.n_samples);

    std::vector<NuclearSample> out;
    out.reserve(spec.n_samples);
    for (std::size_t k = 0; k < spec.n_samples; ++k) {
        const double offset = arc.full ? static_cast<double>(k) : static_cast<double>(k) + 0.5;
        const double phi = std::fmod(arc.begin + arc.length * offset / n, two_pi);
        NuclearSample sample{k, phi, rx * std::cos(phi), ry * std::sin(phi)};
        if (!model.below_seam(sample.x, sample.y))
            throw SamplingError(SamplingError::Kind::empty_arc,
                                "sample " + std::to_string(k) + " is not strictly below the seam");
        out.push_back(sample);
    }
    return out;
}

MappingState init_mapping_state(const NuclearSample& sample, const ModelParams& params, const SamplingSpec& spec) {
    const double ra = std::sqrt(2.0 + 2.0 * params.gamma);
    const double rb = std::sqrt(2.0 * params.gamma);
    double phase_a = 0.0, phase_b = 0.0;
    if (spec.phase_mode == PhaseMode::random) {
        std::mt19937_64 rng(mix_seed(spec.seed ^ phase_stream_tag, sample.index));
        phase_a = two_pi * uniform01(rng);
        phase_b = two_pi * uniform01(rng);
    }
    MappingState s;
    s.x = sample.x;
    s.y = sample.y;
    s.xa = ra * std::cos(phase_a);
    s.pa = ra * std::sin(phase_a);
    s.xb = rb * std::cos(phase_b);
    s.pb = rb * std::sin(phase_b);
    return s;
}

AdiabaticState init_adiabatic_state(const NuclearSample& sample) { return {sample.x, sample.y, 0.0, 0.0}; }

} // namespace mapchaos
