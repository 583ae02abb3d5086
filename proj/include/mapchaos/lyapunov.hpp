// Finite-time maximum Lyapunov exponent by two-trajectory Benettin
// renormalization in the tilde-normalized phase-space metric.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapchaos/dynamics.hpp"
#include "mapchaos/errors.hpp"
#include "mapchaos/model.hpp"

namespace mapchaos {

/// corrected: B-oscillator components scaled by 1/sqrt(2 gamma).
/// literal: the B slots reuse the A coordinates (x_A/sqrt(2 gamma),
/// p_A/sqrt(2 gamma)), so the B oscillator never enters the distance.
enum class MetricMode { corrected, literal };

/// consecutive: each segment continues from where the previous one ended.
/// restarts: every segment restarts from the initial condition with a fresh
/// perturbation direction.
enum class AveragingMode { consecutive, restarts };

MetricMode metric_mode_from_string(const std::string& name);
AveragingMode averaging_mode_from_string(const std::string& name);
const char* to_string(MetricMode mode);
const char* to_string(AveragingMode mode);

struct LyapunovConfig {
    double segment_time = 24.0;
    std::size_t n_segments = 10;
    double d0 = 1e-7;
    /// Time between rescalings inside a segment. The segment exponent is the
    /// summed log growth over the segment divided by segment_time; 0 (or any
    /// value >= segment_time) rescales once per segment.
    double renormalization_interval = 1.0;
    std::uint64_t seed = 1;
    /// Energy in the nuclear tilde normalization. Unset: the total energy of
    /// the reference trajectory at t = 0.
    std::optional<double> metric_energy;
    MetricMode metric = MetricMode::corrected;
    AveragingMode averaging = AveragingMode::consecutive;

    void validate() const;
};

struct LyapunovRecord {
    std::vector<double> segment_exponents;
    double lambda_max = 0.0;   // total log growth / total time
    double energy_drift = 0.0; // max relative drift over all segments and both trajectories
    std::size_t sample_index = 0;
    /// max |E_x(t) - E_x(0)| / max(1, |E(0)|) along the reference trajectory,
    /// with E_x = (p_x^2 + omega_x^2 x^2) / 2.
    double x_mode_drift = 0.0;
    /// max |norm(aux - ref) - d0| right after a rescale.
    double rescale_error = 0.0;

    double mean_segment_exponent() const;
};

/// Linear map from raw phase coordinates to tilde coordinates.
class TildeMetric {
public:
    TildeMetric(const ModelParams& params, double energy, MetricMode mode = MetricMode::corrected);

    std::array<double, 8> apply(const std::array<double, 8>& mapping) const;
    std::array<double, 4> apply(const std::array<double, 4>& nuclear) const;

    template <std::size_t N>
    double norm(const std::array<double, N>& delta) const {
        const auto t = apply(delta);
        double sum = 0.0;
        for (double c : t) sum += c * c;
        return std::sqrt(sum);
    }

    /// Raw-coordinate vector whose corrected-metric tilde image is `tilde`.
    std::array<double, 8> unapply(const std::array<double, 8>& tilde) const;
    std::array<double, 4> unapply(const std::array<double, 4>& tilde) const;

    /// Scale factors for (x, y, px, py, xa, pa, xb, pb) in the corrected metric.
    std::array<double, 8> scales() const;

private:
    MetricMode mode_;
    double sa_, sb_, sx_, sy_, sp_;
};

double normalized_distance(const MappingState& s1, const MappingState& s2, const ModelParams& params, double energy,
                           MetricMode mode = MetricMode::corrected);
double normalized_distance(const AdiabaticState& s1, const AdiabaticState& s2, const ModelParams& params,
                           double energy);

/// Auxiliary initial state at tilde distance d0 along a pseudo-random
/// isotropic direction of the tilde space. Deterministic in seed.
MappingState perturb(const MappingState& initial, double d0, std::uint64_t seed, const ModelParams& params,
                     double energy, MetricMode mode = MetricMode::corrected);
AdiabaticState perturb(const AdiabaticState& initial, double d0, std::uint64_t seed, const ModelParams& params,
                       double energy);

/// Steps between rescalings for a given config.
std::size_t renormalization_stride(const IntegratorConfig& int_config, const LyapunovConfig& config);

/// Generic renormalization loop behind benettin_lambda. `step` advances a
/// phase point by dt, `norm` measures a displacement, `energy` returns the
/// conserved quantity, `offset(k)` gives the initial displacement of segment
/// k (only k == 0 in consecutive mode) and `observe(ref)` sees the reference
/// point after every step.
template <std::size_t N, class Step, class Norm, class Energy, class Offset, class Observe>
LyapunovRecord benettin_run(const std::array<double, N>& initial, Step&& step, Norm&& norm, Energy&& energy,
                            Offset&& offset, Observe&& observe, const IntegratorConfig& int_config,
                            const LyapunovConfig& config) {
    using Vec = std::array<double, N>;
    int_config.validate();
    config.validate();
    const StepPlan plan = plan_steps(config.segment_time, int_config.dt);
    const std::size_t total_steps = plan.full_steps + (plan.partial() ? 1 : 0);
    const std::size_t stride = renormalization_stride(int_config, config);

    LyapunovRecord rec;
    rec.segment_exponents.reserve(config.n_segments);
    double log_growth = 0.0;

    const double e_initial = energy(initial);
    Vec ref = initial;
    Vec aux{};
    for (std::size_t k = 0; k < config.n_segments; ++k) {
        const int segment = static_cast<int>(k);
        if (k == 0 || config.averaging == AveragingMode::restarts) {
            ref = initial;
            const Vec d = offset(k);
            for (std::size_t i = 0; i < N; ++i) aux[i] = ref[i] + d[i];
        }
        double e_aux = energy(aux);
        double segment_log = 0.0;
        for (std::size_t n = 0; n < total_steps; ++n) {
            const double h = n < plan.full_steps ? int_config.dt : plan.last_dt;
            const double t = static_cast<double>(k) * config.segment_time + static_cast<double>(n + 1) * int_config.dt;
            try {
                ref = step(ref, h);
                aux = step(aux, h);
            } catch (DynamicsError& e) {
                e.set_segment(segment);
                throw;
            }
            if (!all_finite(ref) || !all_finite(aux))
                throw DynamicsError(FailureKind::divergence,
                                    "non-finite state in segment " + std::to_string(k) + " at t=" + std::to_string(t),
                                    t, segment);
            observe(ref);
            const double drift = std::max(relative_drift(energy(ref), e_initial), relative_drift(energy(aux), e_aux));
            rec.energy_drift = std::max(rec.energy_drift, drift);
            if (!(drift <= int_config.energy_tol))
                throw DynamicsError(FailureKind::energy_drift,
                                    "relative energy drift " + std::to_string(drift) + " in segment " +
                                        std::to_string(k) + " at t=" + std::to_string(t),
                                    t, segment);

            if ((n + 1) % stride != 0 && n + 1 != total_steps) continue;
            Vec delta;
            for (std::size_t i = 0; i < N; ++i) delta[i] = aux[i] - ref[i];
            const double dist = norm(delta);
            if (!(dist > 0.0) || !std::isfinite(dist))
                throw DynamicsError(FailureKind::divergence,
                                    "separation " + std::to_string(dist) + " in segment " + std::to_string(k) +
                                        " at t=" + std::to_string(t),
                                    t, segment);
            segment_log += std::log(dist / config.d0);
            const double shrink = config.d0 / dist;
            for (std::size_t i = 0; i < N; ++i) aux[i] = ref[i] + delta[i] * shrink;
            for (std::size_t i = 0; i < N; ++i) delta[i] = aux[i] - ref[i];
            rec.rescale_error = std::max(rec.rescale_error, std::abs(norm(delta) - config.d0));
            e_aux = energy(aux);
        }
        log_growth += segment_log;
        rec.segment_exponents.push_back(segment_log / config.segment_time);
    }
    rec.lambda_max = log_growth / (config.segment_time * static_cast<double>(config.n_segments));
    return rec;
}

LyapunovRecord benettin_lambda(const MappingState& initial, const TmtsModel& model, const IntegratorConfig& int_config,
                               const LyapunovConfig& config, std::size_t sample_index = 0);
LyapunovRecord benettin_lambda(const AdiabaticState& initial, const TmtsModel& model,
                               const IntegratorConfig& int_config, const LyapunovConfig& config,
                               std::size_t sample_index = 0);

} // namespace mapchaos
