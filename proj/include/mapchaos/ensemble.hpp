// Initial conditions on the equi-energy curve V_A(x, y) = E0 below the
// crossing seam.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapchaos/model.hpp"

namespace mapchaos {

enum class PhaseMode { zero, random };

PhaseMode phase_mode_from_string(const std::string& name);
const char* to_string(PhaseMode mode);

struct SamplingSpec {
    double e0 = 28.0;
    std::size_t n_samples = 40;
    std::uint64_t seed = 20030101;
    PhaseMode phase_mode = PhaseMode::random;
};

class SamplingError : public std::runtime_error {
public:
    enum class Kind { empty_arc, invalid_energy, invalid_spec };
    SamplingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Point of the ellipse x = r_x cos(phi), y = r_y sin(phi) with zero momenta.
struct NuclearSample {
    std::size_t index = 0;
    double phi = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Admissible arc of the ellipse parameter, (begin, begin + length). A full
/// ellipse has length 2*pi and full == true.
struct AdmissibleArc {
    double begin = 0.0;
    double length = 0.0;
    bool full = false;
};

AdmissibleArc admissible_arc(const SamplingSpec& spec, const TmtsModel& model);

/// n_samples points equally spaced in phi over the admissible arc. A full
/// ellipse uses phi_k = 2*pi*k/n; a partial arc uses cell midpoints so every
/// point lies strictly inside it.
std::vector<NuclearSample> sample_nuclear(const SamplingSpec& spec, const TmtsModel& model);

/// Places the electronic oscillators on the N_A = 1, N_B = 0 shells. Random
/// phases are drawn from a stream keyed by (spec.seed, sample.index).
MappingState init_mapping_state(const NuclearSample& sample, const ModelParams& params, const SamplingSpec& spec);

AdiabaticState init_adiabatic_state(const NuclearSample& sample);

} // namespace mapchaos
