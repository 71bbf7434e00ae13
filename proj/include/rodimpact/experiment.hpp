#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rodimpact/config.hpp"
#include "rodimpact/csv_io.hpp"
#include "rodimpact/metrics.hpp"
#include "rodimpact/rods.hpp"

namespace rodimpact {

// Accuracy of one quantity of interest against the closed-form benchmark
// solution, accumulated over every controller stop of the run.
struct QoiStats {
    double total_pct = 0.0;  // 100 * ||numeric - exact||_2 / ||exact||_2
    double mean = 0.0;       // signed mean of (numeric - exact)
    double std_dev = 0.0;    // population std deviation of (numeric - exact)
};

// Everything one run produces. The series holds one sample per controller
// stop regardless of method (conventional methods are downsampled from their
// per-step resolution), so rows align across methods; all scalar summaries
// are derived from that series plus the run's event bookkeeping.
struct RunReport {
    ExperimentConfig config;  // resolved single-run config (sweep block cleared)
    std::string label;

    TimeSeries series;
    TimeSeries substeps;  // per-step resolution; populated only under debug_substeps

    // Start of the first interval/step committed with active contact and end
    // of the last one; NaN when the rods never touch.
    double t_impact = std::numeric_limits<double>::quiet_NaN();
    double t_release = std::numeric_limits<double>::quiet_NaN();

    // Contact-point and energy accuracy. Position/velocity follow the left
    // rod's contact node; force is the interface force; the energies are
    // system totals (both rods).
    QoiStats position, velocity, force, potential_energy, kinetic_energy, total_energy;
    // Largest instantaneous total-energy error over the run, in percent of
    // the conserved exact value.
    double max_total_energy_error_pct = 0.0;

    // Largest interpenetration and contact-velocity mismatch over the stops
    // committed with active contact (coupling iterations > 0, or force > 0
    // for the monolithic methods); 0 when contact never happens.
    double max_active_interpenetration = 0.0;
    double max_active_velocity_mismatch = 0.0;
    // Largest |p(t) - p(t0)| over the run (kg m/s).
    double momentum_drift = 0.0;

    int max_iterations = 0;
    double avg_iterations = 0.0;
    // True when the iteration columns mean coupling iterations (Schwarz);
    // the monolithic methods leave them blank in summary tables.
    bool coupling_iterations = false;

    double wall_seconds = 0.0;
};

// Runs the single experiment the config describes (ignoring any sweep block)
// and computes the full report. Performs no file I/O. Solver errors propagate.
RunReport run_experiment(const ExperimentConfig& config);

// Expands the sweep block (see expand_sweep) and runs every entry,
// preserving config order in the result. Independent entries may execute
// concurrently; failures surface in config order. Throws ValidationError
// when no sweep block is present.
std::vector<RunReport> run_sweep(const ExperimentConfig& config);

// Least-squares slope of log(kinetic-energy error) vs log(1/n_elements)
// across reports; meaningful for element-count sweeps.
double kinetic_energy_convergence_rate(const std::vector<RunReport>& reports);

// One row per report: label, the six accuracy percentages, and the coupling
// iteration statistics (blank for monolithic methods). When a convergence
// rate is supplied it is appended as an extra row carrying the rate in the
// kinetic-energy column. Rendered both ways from the same cells.
struct SummaryTable {
    CsvTable csv;
    std::string text;
};
SummaryTable emit_summary_table(const std::vector<RunReport>& reports,
                                std::optional<double> ke_convergence_rate = std::nullopt);

// The controller-stop time series with the closed-form reference and the
// pointwise errors alongside (fixed 31-column schema, identical for every
// method).
CsvTable series_table(const RunReport& report);

// Writes <prefix>_series.csv (plus <prefix>_substeps.csv under the debug
// flag) into `dir`, creating it if needed, and returns the paths written.
std::vector<std::filesystem::path> write_report_files(const RunReport& report,
                                                      const std::filesystem::path& dir);

// Writes <prefix>_summary.csv for a batch of reports.
std::filesystem::path write_summary_file(const SummaryTable& table,
                                         const std::filesystem::path& dir,
                                         const std::string& prefix);

// Human-oriented one-paragraph digest of a run (events, accuracy, iteration
// counts, wall time). Not a stable machine interface.
std::string describe_run(const RunReport& report);

}  // namespace rodimpact
