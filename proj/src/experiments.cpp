#include "mapchaos/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "mapchaos/random.hpp"

namespace mapchaos {

std::size_t HistogramSpec::bin_count() const {
    return static_cast<std::size_t>(std::llround((high - low) / width));
}

void HistogramSpec::validate() const {
    if (!(width > 0)) throw std::invalid_argument("histogram: bin width must be > 0");
    if (!(low < high)) throw std::invalid_argument("histogram: range low must be < high");
    if (bin_count() < 1) throw std::invalid_argument("histogram: range narrower than one bin");
}

Histogram build_histogram(const std::vector<double>& values, const HistogramSpec& spec) {
    spec.validate();
    const std::size_t nbins = spec.bin_count();
    Histogram h;
    h.bin_edges.resize(nbins + 1);
    // With width = 1/n and low a multiple of width, k/n is correctly rounded,
    // so edges print as 0.95 rather than 0.9500000000000002.
    const double per_unit = std::round(1.0 / spec.width);
    const double low_units = std::round(spec.low * per_unit);
    const bool exact_grid = std::abs(1.0 / spec.width - per_unit) < 1e-9 * per_unit &&
                            std::abs(spec.low * per_unit - low_units) < 1e-9 * std::max(1.0, std::abs(low_units));
    for (std::size_t i = 0; i <= nbins; ++i) {
        h.bin_edges[i] = exact_grid ? (low_units + static_cast<double>(i)) / per_unit
                                    : spec.low + static_cast<double>(i) * spec.width;
    }
    h.counts.assign(nbins, 0);
    for (double v : values) {
        ++h.n_total;
        if (v < h.bin_edges.front()) {
            ++h.underflow;
            continue;
        }
        if (v >= h.bin_edges.back()) {
            ++h.overflow;
            continue;
        }
        auto idx = static_cast<std::size_t>(std::floor((v - spec.low) / spec.width));
        idx = std::min(idx, nbins - 1);
        // floor() can land one bin off near an edge; settle against the stored edges
        while (idx > 0 && v < h.bin_edges[idx]) --idx;
        while (idx + 1 < nbins && v >= h.bin_edges[idx + 1]) ++idx;
        ++h.counts[idx];
    }
    return h;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(const std::vector<double>& values, std::size_t failed, const Histogram& histogram) {
    Summary s;
    s.n_ok = values.size();
    s.failed = failed;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (values.empty()) {
        s.mean = s.median = s.q1 = s.q3 = s.iqr = s.mode_left = s.mode_right = nan;
        return s;
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    s.median = quantile_sorted(sorted, 0.5);
    s.q1 = quantile_sorted(sorted, 0.25);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.iqr = s.q3 - s.q1;
    const auto it = std::max_element(histogram.counts.begin(), histogram.counts.end());
    if (it == histogram.counts.end() || *it == 0) {
        s.mode_left = s.mode_right = nan;
    } else {
        const auto k = static_cast<std::size_t>(it - histogram.counts.begin());
        s.mode_left = histogram.bin_edges[k];
        s.mode_right = histogram.bin_edges[k + 1];
        s.mode_count = *it;
    }
    return s;
}

void RunSpec::validate() const {
    model.validate();
    integrator.validate();
    lyapunov.validate();
    histogram.validate();
    if (sampling.n_samples < 1) throw std::invalid_argument("run: at least one sample required");
    if (workers < 1) throw std::invalid_argument("run: workers must be >= 1");
    for (double th : thetas)
        if (!(th >= 0 && th < std::numbers::pi / 2)) throw std::invalid_argument("run: theta must lie in [0, pi/2)");
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

RunSpec preset(const std::string& name) {
    RunSpec spec;
    const double pi = std::numbers::pi;
    if (name == "fig2" || name == "fig3") {
        spec.system = name == "fig2" ? SystemKind::mapping : SystemKind::adiabatic;
        spec.model.theta = pi / 3;
        spec.couplings = {0.3, 1.5, 7.5};
        spec.thetas = {pi / 3};
    } else if (name == "fig4") {
        spec.system = SystemKind::mapping;
        spec.model.J = 1.5;
        spec.couplings = {1.5};
        spec.thetas = {0.0, pi / 6, pi / 3};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "' (expected fig2|fig3|fig4)");
    }
    return spec;
}

std::vector<double> CellResult::lambdas() const {
    std::vector<double> out;
    for (const auto& s : samples)
        if (s.ok) out.push_back(s.record.lambda_max);
    return out;
}

SampleResult run_sample(const NuclearSample& sample, const TmtsModel& model, const RunSpec& spec) {
    SampleResult result;
    result.sample = sample;
    LyapunovConfig lyap = spec.lyapunov;
    lyap.seed = mix_seed(spec.lyapunov.seed, sample.index);
    try {
        if (spec.system == SystemKind::mapping) {
            const MappingState s0 = init_mapping_state(sample, model.params(), spec.sampling);
            result.record = benettin_lambda(s0, model, spec.integrator, lyap, sample.index);
        } else {
            const AdiabaticState s0 = init_adiabatic_state(sample);
            result.record = benettin_lambda(s0, model, spec.integrator, lyap, sample.index);
        }
    } catch (const DynamicsError& e) {
        result.ok = false;
        result.status = to_string(e.kind());
        if (e.segment() >= 0) result.status += "@segment" + std::to_string(e.segment());
        result.message = e.what();
        result.record.sample_index = sample.index;
        result.record.lambda_max = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

std::vector<CellResult> run_experiment(const RunSpec& spec) {
    spec.validate();
    const std::vector<double> couplings = spec.couplings.empty() ? std::vector<double>{spec.model.J} : spec.couplings;
    const std::vector<double> thetas = spec.thetas.empty() ? std::vector<double>{spec.model.theta} : spec.thetas;

    struct Cell {
        TmtsModel model;
        std::vector<NuclearSample> samples;
    };
    std::vector<Cell> cells;
    std::vector<CellResult> results;
    for (double J : couplings) {
        for (double theta : thetas) {
            ModelParams p = spec.model;
            p.J = J;
            p.theta = theta;
            TmtsModel model(p);
            cells.push_back({model, sample_nuclear(spec.sampling, model)});
            CellResult r;
            r.system = spec.system;
            r.J = J;
            r.theta = theta;
            r.samples.resize(cells.back().samples.size());
            results.push_back(std::move(r));
        }
    }

    // work item = (cell, sample); every slot is written by exactly one worker
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t k = 0; k < cells[c].samples.size(); ++k) items.emplace_back(c, k);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
            const auto [c, k] = items[i];
            results[c].samples[k] = run_sample(cells[c].samples[k], cells[c].model, spec);
        }
    };
    const std::size_t n_threads = std::min(spec.workers, std::max<std::size_t>(items.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    for (auto& r : results) {
        const std::vector<double> values = r.lambdas();
        r.histogram = build_histogram(values, spec.histogram);
        r.summary = summarize(values, r.samples.size() - values.size(), r.histogram);
    }
    return results;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

} // namespace

void write_records_csv(const std::vector<CellResult>& cells, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "system,J,theta,sample_index,phi,x0,y0,lambda_max,seg_lambdas_mean,energy_drift,status\n";
    for (const auto& cell : cells) {
        for (const auto& s : cell.samples) {
            const double seg_mean =
                s.ok ? s.record.mean_segment_exponent() : std::numeric_limits<double>::quiet_NaN();
            out << to_string(cell.system) << ',' << format_double(cell.J) << ',' << format_double(cell.theta) << ','
                << s.sample.index << ',' << format_double(s.sample.phi) << ',' << format_double(s.sample.x) << ','
                << format_double(s.sample.y) << ',' << format_double(s.record.lambda_max) << ','
                << format_double(seg_mean) << ',' << format_double(s.record.energy_drift) << ',' << s.status
                << '\n';
        }
    }
    finish(out, path);
}

void write_histogram_csv(const std::vector<CellResult>& cells, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "system,J,theta,bin_left,bin_right,count\n";
    for (const auto& cell : cells) {
        const Histogram& h = cell.histogram;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            out << to_string(cell.system) << ',' << format_double(cell.J) << ',' << format_double(cell.theta) << ','
                << format_double(h.bin_edges[i]) << ',' << format_double(h.bin_edges[i + 1]) << ',' << h.counts[i]
                << '\n';
        }
    }
    finish(out, path);
}

void write_summary_json(const std::vector<CellResult>& cells, const std::filesystem::path& path) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc = json::array();
    for (const auto& cell : cells) {
        const Summary& s = cell.summary;
        doc.push_back({
            {"system", to_string(cell.system)},
            {"J", cell.J},
            {"theta", cell.theta},
            {"n_samples", cell.samples.size()},
            {"n_ok", s.n_ok},
            {"failed", s.failed},
            {"mean", num(s.mean)},
            {"median", num(s.median)},
            {"q1", num(s.q1)},
            {"q3", num(s.q3)},
            {"iqr", num(s.iqr)},
            {"mode_bin", {{"left", num(s.mode_left)}, {"right", num(s.mode_right)}, {"count", s.mode_count}}},
            {"underflow", cell.histogram.underflow},
            {"overflow", cell.histogram.overflow},
        });
    }
    std::ofstream out = open_output(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

void write_outputs(const std::vector<CellResult>& cells, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    write_records_csv(cells, dir / "records.csv");
    write_histogram_csv(cells, dir / "histogram.csv");
    write_summary_json(cells, dir / "summary.json");
}

} // namespace mapchaos
