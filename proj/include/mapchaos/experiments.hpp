// Parameter sweeps over (J, theta) for one system kind, run in parallel
// over (cell, sample) work items and merged in sample order.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mapchaos/dynamics.hpp"
#include "mapchaos/ensemble.hpp"
#include "mapchaos/lyapunov.hpp"
#include "mapchaos/model.hpp"

namespace mapchaos {

struct HistogramSpec {
    double width = 0.05;
    double low = -0.2;
    double high = 2.0;

    std::size_t bin_count() const;
    void validate() const;
};

struct Histogram {
    std::vector<double> bin_edges; // bin_count() + 1 strictly increasing edges
    std::vector<std::size_t> counts;
    std::size_t n_total = 0;
    std::size_t underflow = 0;
    std::size_t overflow = 0;
};

/// Bins are half-open [left, right); values >= high count as overflow.
Histogram build_histogram(const std::vector<double>& values, const HistogramSpec& spec);

struct Summary {
    std::size_t n_ok = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    // lowest bin among those with the largest count
    double mode_left = 0.0;
    double mode_right = 0.0;
    std::size_t mode_count = 0;
};

/// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

Summary summarize(const std::vector<double>& values, std::size_t failed, const Histogram& histogram);

struct RunSpec {
    ModelParams model;
    IntegratorConfig integrator;
    LyapunovConfig lyapunov;
    SamplingSpec sampling;
    SystemKind system = SystemKind::mapping;
    /// Sweep lists; an empty list means the single value in `model`.
    std::vector<double> couplings;
    std::vector<double> thetas;
    std::filesystem::path output_path;
    HistogramSpec histogram;
    std::size_t workers = 1;

    void validate() const;
};

/// Named reproduction presets: fig2 (mapping, theta = pi/3, J sweep), fig3
/// (adiabatic, theta = pi/3, J sweep), fig4 (mapping, J = 1.5, theta sweep).
RunSpec preset(const std::string& name);
std::vector<std::string> preset_names();

struct SampleResult {
    NuclearSample sample;
    LyapunovRecord record;
    bool ok = true;
    std::string status = "ok"; // failure kind, with "@segment<k>" when known
    std::string message;
};

struct CellResult {
    SystemKind system = SystemKind::mapping;
    double J = 0.0;
    double theta = 0.0;
    std::vector<SampleResult> samples; // sample-index order
    Histogram histogram;
    Summary summary;

    std::vector<double> lambdas() const; // successful samples only
};

/// Runs every sweep cell. Per-trajectory failures are recorded, never thrown.
/// Results do not depend on spec.workers.
std::vector<CellResult> run_experiment(const RunSpec& spec);

/// One trajectory of a cell; exposed for tests and the invariant suite.
SampleResult run_sample(const NuclearSample& sample, const TmtsModel& model, const RunSpec& spec);

void write_records_csv(const std::vector<CellResult>& cells, const std::filesystem::path& path);
void write_histogram_csv(const std::vector<CellResult>& cells, const std::filesystem::path& path);
void write_summary_json(const std::vector<CellResult>& cells, const std::filesystem::path& path);

/// records.csv, histogram.csv and summary.json inside `dir` (created if needed).
void write_outputs(const std::vector<CellResult>& cells, const std::filesystem::path& dir);

/// Shortest-exact (%.17g) decimal form used in every output file.
std::string format_double(double value);

} // namespace mapchaos
