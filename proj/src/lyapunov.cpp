#include "mapchaos/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mapchaos/random.hpp"

namespace mapchaos {

MetricMode metric_mode_from_string(const std::string& name) {
    if (name == "corrected") return MetricMode::corrected;
    if (name == "literal") return MetricMode::literal;
    throw std::invalid_argument("unknown metric '" + name + "' (expected corrected|literal)");
}

AveragingMode averaging_mode_from_string(const std::string& name) {
    if (name == "consecutive") return AveragingMode::consecutive;
    if (name == "restarts") return AveragingMode::restarts;
    throw std::invalid_argument("unknown averaging '" + name + "' (expected consecutive|restarts)");
}

const char* to_string(MetricMode mode) { return mode == MetricMode::corrected ? "corrected" : "literal"; }
const char* to_string(AveragingMode mode) { return mode == AveragingMode::consecutive ? "consecutive" : "restarts"; }

void LyapunovConfig::validate() const {
    if (!(segment_time > 0)) throw std::invalid_argument("lyapunov: segment_time must be > 0");
    if (n_segments < 1) throw std::invalid_argument("lyapunov: n_segments must be >= 1");
    if (!(d0 > 0 && d0 < 1e-2)) throw std::invalid_argument("lyapunov: d0 must lie in (0, 1e-2)");
    if (!(renormalization_interval >= 0)) throw std::invalid_argument("lyapunov: renormalization interval must be >= 0");
    if (metric_energy && !(*metric_energy > 0)) throw std::invalid_argument("lyapunov: metric energy must be > 0");
}

double LyapunovRecord::mean_segment_exponent() const {
    if (segment_exponents.empty()) return 0.0;
    return std::accumulate(segment_exponents.begin(), segment_exponents.end(), 0.0) /
           static_cast<double>(segment_exponents.size());
}

TildeMetric::TildeMetric(const ModelParams& params, double energy, MetricMode mode) : mode_(mode) {
    if (!(energy > 0))
        throw std::invalid_argument("tilde metric needs a positive energy, got " + std::to_string(energy));
    if (!(params.gamma > 0)) throw std::invalid_argument("tilde metric needs gamma > 0");
    sa_ = 1.0 / std::sqrt(2.0 + 2.0 * params.gamma);
    sb_ = 1.0 / std::sqrt(2.0 * params.gamma);
    sp_ = 1.0 / std::sqrt(2.0 * energy);
    sx_ = params.omega_x * sp_;
    sy_ = params.omega_y * sp_;
}

std::array<double, 8> TildeMetric::scales() const { return {sx_, sy_, sp_, sp_, sa_, sa_, sb_, sb_}; }

std::array<double, 8> TildeMetric::apply(const std::array<double, 8>& v) const {
    const bool literal = mode_ == MetricMode::literal;
    return {sx_ * v[0], sy_ * v[1], sp_ * v[2], sp_ * v[3], sa_ * v[4], sa_ * v[5],
            sb_ * (literal ? v[4] : v[6]), sb_ * (literal ? v[5] : v[7])};
}

std::array<double, 4> TildeMetric::apply(const std::array<double, 4>& v) const {
    return {sx_ * v[0], sy_ * v[1], sp_ * v[2], sp_ * v[3]};
}

std::array<double, 8> TildeMetric::unapply(const std::array<double, 8>& t) const {
    return {t[0] / sx_, t[1] / sy_, t[2] / sp_, t[3] / sp_, t[4] / sa_, t[5] / sa_, t[6] / sb_, t[7] / sb_};
}

std::array<double, 4> TildeMetric::unapply(const std::array<double, 4>& t) const {
    return {t[0] / sx_, t[1] / sy_, t[2] / sp_, t[3] / sp_};
}

namespace {

template <std::size_t N>
std::array<double, N> difference(const std::array<double, N>& a, const std::array<double, N>& b) {
    std::array<double, N> d;
    for (std::size_t i = 0; i < N; ++i) d[i] = a[i] - b[i];
    return d;
}

// Isotropic direction in the corrected tilde space, mapped to raw
// coordinates and scaled so that its norm in `metric` is exactly d0.
template <std::size_t N>
std::array<double, N> random_offset(double d0, std::uint64_t seed, const TildeMetric& corrected,
                                    const TildeMetric& metric) {
    std::mt19937_64 rng(mix_seed(seed, 0x4C59415055ULL)); // "LYAPU"
    std::array<double, N> dir;
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& c : dir) {
            c = standard_normal(rng);
            n2 += c * c;
        }
    } while (n2 == 0.0);
    std::array<double, N> raw = corrected.unapply(dir);
    const double n = metric.norm(raw);
    if (!(n > 0.0)) throw std::runtime_error("perturbation has zero length in the chosen metric");
    for (auto& c : raw) c *= d0 / n;
    return raw;
}

template <class State>
State add(const State& s, const std::array<double, State::dim>& d) {
    auto v = s.as_array();
    for (std::size_t i = 0; i < State::dim; ++i) v[i] += d[i];
    return State::from_array(v);
}

} // namespace

double normalized_distance(const MappingState& s1, const MappingState& s2, const ModelParams& params, double energy,
                           MetricMode mode) {
    return TildeMetric(params, energy, mode).norm(difference(s1.as_array(), s2.as_array()));
}

double normalized_distance(const AdiabaticState& s1, const AdiabaticState& s2, const ModelParams& params,
                           double energy) {
    return TildeMetric(params, energy).norm(difference(s1.as_array(), s2.as_array()));
}

MappingState perturb(const MappingState& initial, double d0, std::uint64_t seed, const ModelParams& params,
                     double energy, MetricMode mode) {
    if (!(d0 > 0)) throw std::invalid_argument("perturb: d0 must be > 0");
    const TildeMetric corrected(params, energy);
    const TildeMetric metric(params, energy, mode);
    return add(initial, random_offset<8>(d0, seed, corrected, metric));
}

AdiabaticState perturb(const AdiabaticState& initial, double d0, std::uint64_t seed, const ModelParams& params,
                       double energy) {
    if (!(d0 > 0)) throw std::invalid_argument("perturb: d0 must be > 0");
    const TildeMetric metric(params, energy);
    return add(initial, random_offset<4>(d0, seed, metric, metric));
}

std::size_t renormalization_stride(const IntegratorConfig& int_config, const LyapunovConfig& config) {
    const StepPlan segment = plan_steps(config.segment_time, int_config.dt);
    const std::size_t total = segment.full_steps + (segment.partial() ? 1 : 0);
    if (config.renormalization_interval <= 0.0 || config.renormalization_interval >= config.segment_time) return total;
    const auto stride = static_cast<std::size_t>(std::llround(config.renormalization_interval / int_config.dt));
    return std::clamp<std::size_t>(stride, 1, total);
}

namespace {

std::uint64_t segment_seed(const LyapunovConfig& config, std::size_t k) {
    return k == 0 ? config.seed : mix_seed(config.seed, k);
}

} // namespace

LyapunovRecord benettin_lambda(const MappingState& initial, const TmtsModel& model, const IntegratorConfig& int_config,
                               const LyapunovConfig& config, std::size_t sample_index) {
    config.validate();
    const double energy = config.metric_energy.value_or(model.mapping_energy(initial));
    const TildeMetric corrected(model.params(), energy);
    const TildeMetric metric(model.params(), energy, config.metric);

    auto field = [&model](const std::array<double, 8>& v) {
        return model.mapping_vector_field(MappingState::from_array(v)).as_array();
    };
    auto step = [&field](const std::array<double, 8>& v, double h) { return rk4_step(v, h, field); };
    auto norm = [&metric](const std::array<double, 8>& d) { return metric.norm(d); };
    auto h = [&model](const std::array<double, 8>& v) { return model.mapping_energy(MappingState::from_array(v)); };
    auto offset = [&](std::size_t k) {
        return random_offset<8>(config.d0, segment_seed(config, k), corrected, metric);
    };
    const double ex0 = x_mode_energy(initial.x, initial.px, model.params());
    const double escale = std::max(1.0, std::abs(model.mapping_energy(initial)));
    double x_drift = 0.0;
    auto observe = [&](const std::array<double, 8>& v) {
        x_drift = std::max(x_drift, std::abs(x_mode_energy(v[0], v[2], model.params()) - ex0) / escale);
    };
    LyapunovRecord rec = benettin_run(initial.as_array(), step, norm, h, offset, observe, int_config, config);
    rec.sample_index = sample_index;
    rec.x_mode_drift = x_drift;
    return rec;
}

LyapunovRecord benettin_lambda(const AdiabaticState& initial, const TmtsModel& model,
                               const IntegratorConfig& int_config, const LyapunovConfig& config,
                               std::size_t sample_index) {
    config.validate();
    const double energy = config.metric_energy.value_or(model.adiabatic_energy(initial));
    const TildeMetric metric(model.params(), energy);

    auto field = [&model](const std::array<double, 4>& v) {
        return model.adiabatic_vector_field(AdiabaticState::from_array(v)).as_array();
    };
    auto step = [&field](const std::array<double, 4>& v, double h) { return rk4_step(v, h, field); };
    auto norm = [&metric](const std::array<double, 4>& d) { return metric.norm(d); };
    auto h = [&model](const std::array<double, 4>& v) { return model.adiabatic_energy(AdiabaticState::from_array(v)); };
    auto offset = [&](std::size_t k) { return random_offset<4>(config.d0, segment_seed(config, k), metric, metric); };
    const double ex0 = x_mode_energy(initial.x, initial.px, model.params());
    const double escale = std::max(1.0, std::abs(model.adiabatic_energy(initial)));
    double x_drift = 0.0;
    auto observe = [&](const std::array<double, 4>& v) {
        x_drift = std::max(x_drift, std::abs(x_mode_energy(v[0], v[2], model.params()) - ex0) / escale);
    };
    LyapunovRecord rec = benettin_run(initial.as_array(), step, norm, h, offset, observe, int_config, config);
    rec.sample_index = sample_index;
    rec.x_mode_drift = x_drift;
    return rec;
}

} // namespace mapchaos
