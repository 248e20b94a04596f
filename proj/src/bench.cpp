#include "garchtrack/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "garchtrack/csv.hpp"
#include "garchtrack/particle_filter.hpp"
#include "garchtrack/rng.hpp"

namespace garchtrack {

namespace {

struct RunResult {
    bool excluded = false;
    // per-step squared errors already averaged over the two axes
    std::vector<double> se_position;
    std::vector<double> se_velocity;
    std::vector<double> se_acceleration;
    long degeneracy = 0;
    double step_seconds = 0.0;
};

RunResult execute_run(const RunSpec& spec, int run_index) {
    const std::uint64_t run_seed = spec.base_seed + static_cast<std::uint64_t>(run_index);
    const TruthRecord truth =
        generate(spec.scenario, derive_seed(run_seed, seed_stream::truth));
    auto filter = spec.factory(derive_seed(run_seed, seed_stream::filter));

    RunResult result;
    const auto n = truth.samples.size();
    result.se_position.reserve(n);
    result.se_velocity.reserve(n);
    result.se_acceleration.reserve(n);

    filter->init(truth.samples.front().measurement);
    const auto start = std::chrono::steady_clock::now();
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate est = filter->step(sample.measurement);
        if (!est.kin.allFinite()) {
            result.excluded = true;
            break;
        }
        const Vec6 err = est.kin - sample.state;
        using namespace state_index;
        result.se_position.push_back(0.5 * (err(x) * err(x) + err(y) * err(y)));
        result.se_velocity.push_back(0.5 * (err(vx) * err(vx) + err(vy) * err(vy)));
        result.se_acceleration.push_back(0.5 * (err(ax) * err(ax) + err(ay) * err(ay)));
    }
    const auto stop = std::chrono::steady_clock::now();
    result.step_seconds =
        std::chrono::duration<double>(stop - start).count() / static_cast<double>(n);

    if (const auto* pf = dynamic_cast<const PfGarchFilter*>(filter.get())) {
        result.degeneracy = pf->degeneracy_count();
    } else if (const auto* plain = dynamic_cast<const PlainPfFilter*>(filter.get())) {
        result.degeneracy = plain->degeneracy_count();
    }
    return result;
}

void parallel_for(int n_jobs, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n_jobs);
    if (workers <= 1) {
        for (int i = 0; i < n_jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= n_jobs) break;
                body(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

double mean_tail(std::span<const double> v, int burn_in) {
    const auto start = static_cast<std::size_t>(std::min<std::size_t>(
        static_cast<std::size_t>(std::max(burn_in, 0)), v.size()));
    double acc = 0.0;
    for (std::size_t i = start; i < v.size(); ++i) acc += v[i];
    const auto count = v.size() - start;
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("GARCHTRACK_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

MetricReport run_spec(const RunSpec& spec) {
    if (spec.n_runs < 1) throw std::invalid_argument("run_spec: requires n_runs >= 1");
    std::vector<RunResult> results(static_cast<std::size_t>(spec.n_runs));
    parallel_for(spec.n_runs,
                 [&](int r) { results[static_cast<std::size_t>(r)] = execute_run(spec, r); });

    MetricReport report;
    report.scenario_id = spec.scenario_id;
    report.filter_id = spec.filter_id;
    report.n_runs = spec.n_runs;

    const auto n_steps = static_cast<std::size_t>(spec.scenario.n_steps);
    report.mse_position_steps.assign(n_steps, 0.0);
    report.mse_velocity_steps.assign(n_steps, 0.0);
    report.mse_acceleration_steps.assign(n_steps, 0.0);

    int included = 0;
    double time_acc = 0.0;
    for (const RunResult& run : results) {
        report.degeneracy_count += run.degeneracy;
        if (run.excluded) {
            ++report.excluded_runs;
            continue;
        }
        ++included;
        time_acc += run.step_seconds;
        for (std::size_t k = 0; k < n_steps; ++k) {
            report.mse_position_steps[k] += run.se_position[k];
            report.mse_velocity_steps[k] += run.se_velocity[k];
            report.mse_acceleration_steps[k] += run.se_acceleration[k];
        }
        report.run_rmse_position.push_back(
            std::sqrt(mean_tail(run.se_position, spec.burn_in)));
        report.run_rmse_velocity.push_back(
            std::sqrt(mean_tail(run.se_velocity, spec.burn_in)));
        report.run_rmse_acceleration.push_back(
            std::sqrt(mean_tail(run.se_acceleration, spec.burn_in)));
    }
    if (included == 0) {
        report.valid = false;
        return report;
    }
    for (std::size_t k = 0; k < n_steps; ++k) {
        report.mse_position_steps[k] /= included;
        report.mse_velocity_steps[k] /= included;
        report.mse_acceleration_steps[k] /= included;
    }
    report.rmse_position =
        std::sqrt(mean_tail(report.mse_position_steps, spec.burn_in));
    report.rmse_velocity =
        std::sqrt(mean_tail(report.mse_velocity_steps, spec.burn_in));
    report.rmse_acceleration =
        std::sqrt(mean_tail(report.mse_acceleration_steps, spec.burn_in));
    report.mean_step_seconds = time_acc / included;
    report.valid = report.excluded_runs * 10 <= spec.n_runs;
    return report;
}

std::vector<MetricReport> run_grid(std::span<const RunSpec> specs) {
    std::vector<MetricReport> reports;
    reports.reserve(specs.size());
    for (const RunSpec& spec : specs) reports.push_back(run_spec(spec));
    return reports;
}

std::vector<SweepRow> particle_sweep(
    const RunSpec& spec,
    const std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>& factory,
    std::span<const int> ns_list) {
    std::vector<SweepRow> rows;
    rows.reserve(ns_list.size());
    for (const int n_s : ns_list) {
        RunSpec sized = spec;
        sized.factory = [&factory, n_s](std::uint64_t seed) {
            return factory(n_s, seed);
        };
        const MetricReport report = run_spec(sized);
        rows.push_back(SweepRow{n_s,
                                report.rmse_position * report.rmse_position,
                                report.rmse_velocity * report.rmse_velocity,
                                report.rmse_acceleration * report.rmse_acceleration});
    }
    return rows;
}

std::vector<TimingRow> timing_scaling(
    const std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>& factory,
    std::span<const int> ns_list, const Scenario& scn, std::uint64_t seed) {
    const TruthRecord truth = generate(scn, derive_seed(seed, seed_stream::truth));
    std::vector<TimingRow> rows;
    rows.reserve(ns_list.size());
    for (const int n_s : ns_list) {
        auto filter = factory(n_s, derive_seed(seed, seed_stream::filter));
        filter->init(truth.samples.front().measurement);
        // one warm pass, then the measured pass
        for (const TruthSample& sample : truth.samples) filter->step(sample.measurement);
        const auto start = std::chrono::steady_clock::now();
        for (const TruthSample& sample : truth.samples) filter->step(sample.measurement);
        const auto stop = std::chrono::steady_clock::now();
        rows.push_back(TimingRow{
            n_s, std::chrono::duration<double>(stop - start).count() /
                     static_cast<double>(truth.samples.size())});
    }
    return rows;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line: need matching samples, n >= 2");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

PairedMargin paired_margin(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("paired_margin: need matching samples, n >= 2");
    }
    const auto n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += b[i] - a[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (b[i] - a[i]) - mean;
        var += d * d;
    }
    var /= (n - 1.0);
    return PairedMargin{mean, std::sqrt(var / n)};
}

void write_report_csv(std::ostream& os, std::span<const MetricReport> reports) {
    os << "filter,scenario,n_runs,rmse_position,rmse_velocity,rmse_acceleration,"
          "excluded_runs\n";
    for (const MetricReport& r : reports) {
        os << r.filter_id << ',' << r.scenario_id << ',' << r.n_runs << ','
           << csv_double(r.rmse_position) << ',' << csv_double(r.rmse_velocity)
           << ',' << csv_double(r.rmse_acceleration) << ',' << r.excluded_runs
           << '\n';
    }
}

void write_report_table(std::ostream& os, std::span<const MetricReport> reports) {
    os << std::left << std::setw(12) << "filter" << std::setw(10) << "scenario"
       << std::right << std::setw(8) << "runs" << std::setw(14) << "rmse_pos"
       << std::setw(14) << "rmse_vel" << std::setw(14) << "rmse_acc"
       << std::setw(10) << "excluded" << '\n';
    for (const MetricReport& r : reports) {
        std::ostringstream pos;
        pos << std::fixed << std::setprecision(4) << r.rmse_position;
        std::ostringstream vel;
        vel << std::fixed << std::setprecision(4) << r.rmse_velocity;
        std::ostringstream acc;
        acc << std::fixed << std::setprecision(4) << r.rmse_acceleration;
        os << std::left << std::setw(12) << r.filter_id << std::setw(10)
           << r.scenario_id << std::right << std::setw(8) << r.n_runs
           << std::setw(14) << pos.str() << std::setw(14) << vel.str()
           << std::setw(14) << acc.str() << std::setw(10) << r.excluded_runs
           << (r.valid ? "" : "  INVALID") << '\n';
    }
    os << "rmse pools squared errors over runs, steps and both axes before "
          "the square root\n";
}

void write_mse_series_csv(std::ostream& os, const MetricReport& report, double T) {
    os << "k,t,mse_position,mse_velocity,mse_acceleration\n";
    for (std::size_t k = 0; k < report.mse_position_steps.size(); ++k) {
        os << (k + 1) << ',' << csv_double(static_cast<double>(k + 1) * T) << ','
           << csv_double(report.mse_position_steps[k]) << ','
           << csv_double(report.mse_velocity_steps[k]) << ','
           << csv_double(report.mse_acceleration_steps[k]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << "n_s,mse_position,mse_velocity,mse_acceleration\n";
    for (const SweepRow& row : rows) {
        os << row.n_s << ',' << csv_double(row.mse_position) << ','
           << csv_double(row.mse_velocity) << ',' << csv_double(row.mse_acceleration)
           << '\n';
    }
}

}  // namespace garchtrack
