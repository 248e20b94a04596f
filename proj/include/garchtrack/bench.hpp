#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "garchtrack/scenarios.hpp"
#include "garchtrack/tracking_filter.hpp"

namespace garchtrack {

using FilterFactory =
    std::function<std::unique_ptr<TrackingFilter>(std::uint64_t seed)>;

/// One (scenario, filter) Monte Carlo experiment. Run r derives its truth
/// seed and filter seed from base_seed + r on the disjoint truth/filter
/// streams, so results are reproducible and filters never share draws.
struct RunSpec {
    std::string scenario_id;
    std::string filter_id;
    Scenario scenario;
    FilterFactory factory;
    int n_runs = 100;
    std::uint64_t base_seed = 1;
    int burn_in = 0;  ///< steps excluded from the metrics (0: all included)
};

/// Pooled error metrics. RMSE_q = sqrt(mean over runs, steps and both axes
/// of squared estimate error in quantity q). Divergent runs (non-finite
/// estimates) are excluded and counted; a report with more than 10% of its
/// runs excluded is flagged invalid.
struct MetricReport {
    std::string scenario_id;
    std::string filter_id;
    int n_runs = 0;
    int excluded_runs = 0;
    bool valid = true;
    double rmse_position = 0.0;
    double rmse_velocity = 0.0;
    double rmse_acceleration = 0.0;
    std::vector<double> mse_position_steps;
    std::vector<double> mse_velocity_steps;
    std::vector<double> mse_acceleration_steps;
    /// per-run pooled RMSE values (standard-error margins across runs)
    std::vector<double> run_rmse_position;
    std::vector<double> run_rmse_velocity;
    std::vector<double> run_rmse_acceleration;
    long degeneracy_count = 0;
    double mean_step_seconds = 0.0;
};

/// Runs one spec. Runs execute in parallel up to the GARCHTRACK_THREADS cap
/// (hardware concurrency by default); results are identical to sequential
/// execution.
MetricReport run_spec(const RunSpec& spec);

std::vector<MetricReport> run_grid(std::span<const RunSpec> specs);

struct SweepRow {
    int n_s;
    double mse_position;
    double mse_velocity;
    double mse_acceleration;
};

/// Re-runs the spec for each particle count with identical seeds; the
/// factory receives (n_s, seed).
std::vector<SweepRow> particle_sweep(
    const RunSpec& spec,
    const std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>& factory,
    std::span<const int> ns_list);

struct TimingRow {
    int n_s;
    double mean_step_seconds;
};

/// Mean wall time of one filter step at each particle count, measured on a
/// fixed generated trajectory.
std::vector<TimingRow> timing_scaling(
    const std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>& factory,
    std::span<const int> ns_list, const Scenario& scn, std::uint64_t seed);

struct LinearFit {
    double slope;
    double intercept;
    double r2;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Paired margin between two per-run metric samples (same truth seeds):
/// mean(b - a) measured in standard errors of the difference.
struct PairedMargin {
    double mean_diff;      ///< mean of (b_r - a_r)
    double standard_error; ///< std of the differences / sqrt(runs)
    [[nodiscard]] double sigmas() const {
        return standard_error > 0.0 ? mean_diff / standard_error : 0.0;
    }
};

PairedMargin paired_margin(std::span<const double> a, std::span<const double> b);

/// CSV with one row per report:
/// filter,scenario,n_runs,rmse_position,rmse_velocity,rmse_acceleration,excluded_runs
void write_report_csv(std::ostream& os, std::span<const MetricReport> reports);

/// Aligned human-readable table of the same rows.
void write_report_table(std::ostream& os, std::span<const MetricReport> reports);

/// Per-step MSE series: k,t,mse_position,mse_velocity,mse_acceleration.
void write_mse_series_csv(std::ostream& os, const MetricReport& report, double T);

/// Sweep table: n_s,mse_position,mse_velocity,mse_acceleration.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

/// Worker cap from GARCHTRACK_THREADS (>= 1), or hardware concurrency.
int worker_count();

}  // namespace garchtrack
