#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "garchtrack/bench.hpp"
#include "garchtrack/config.hpp"
#include "garchtrack/csv.hpp"
#include "garchtrack/particle_filter.hpp"
#include "garchtrack/rng.hpp"
#include "garchtrack/scenarios.hpp"
#include "garchtrack/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace garchtrack;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidReport = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

Config load_with_overrides(const CommonOpts& opts) {
    Config cfg = load_config(opts.config_path);
    if (opts.seed_set) cfg.bench.base_seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.output.directory = opts.out_dir;
    if (!opts.format.empty()) cfg.output.formats = {opts.format};
    return cfg;
}

bool wants(const Config& cfg, const std::string& format) {
    for (const std::string& f : cfg.output.formats) {
        if (f == format) return true;
    }
    return false;
}

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

int cmd_simulate(const CommonOpts& opts) {
    const Config cfg = load_with_overrides(opts);
    const std::uint64_t truth_seed =
        derive_seed(cfg.bench.base_seed, seed_stream::truth);
    const TruthRecord truth = generate(cfg.scenario, truth_seed);
    const fs::path path =
        fs::path(cfg.output.directory) / ("truth_" + cfg.scenario.name + ".csv");
    auto os = open_out(path);
    write_truth_csv(os, truth);
    std::cout << "wrote " << path.string() << " (" << truth.samples.size()
              << " samples)\n";
    return kExitOk;
}

int cmd_track(const CommonOpts& opts, const std::string& truth_path,
              const std::string& filter_id) {
    const Config cfg = load_with_overrides(opts);
    std::ifstream in(truth_path);
    if (!in) {
        std::cerr << "garchtrack: cannot open truth file '" << truth_path << "'\n";
        return kExitUsage;
    }
    const TruthRecord truth = read_truth_csv(in);
    if (truth.samples.empty()) {
        std::cerr << "garchtrack: truth file has no samples\n";
        return kExitUsage;
    }

    const FilterFactory factory = make_filter_factory(cfg, filter_id);
    auto filter =
        factory(derive_seed(cfg.bench.base_seed, seed_stream::filter));
    filter->init(truth.samples.front().measurement);

    const bool pf_family = filter_id == "pf_garch" || filter_id == "pf";
    const fs::path path = fs::path(cfg.output.directory) /
                          ("track_" + cfg.scenario.name + "_" + filter_id + ".csv");
    auto os = open_out(path);
    os << "k,t,x_hat,y_hat,vx_hat,vy_hat,ax_hat,ay_hat";
    if (pf_family) os << ",hx_hat,hy_hat,ess,resampled";
    os << '\n';
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate est = filter->step(sample.measurement);
        os << sample.k << ',' << csv_double(sample.t);
        for (int i = 0; i < 6; ++i) os << ',' << csv_double(est.kin(i));
        if (pf_family) {
            const Vec2 vol = est.vol.value_or(Vec2::Zero());
            os << ',' << csv_double(vol(0)) << ',' << csv_double(vol(1)) << ','
               << csv_double(est.ess) << ',' << (est.resampled ? 1 : 0);
        }
        os << '\n';
    }
    std::cout << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_bench(const CommonOpts& opts) {
    const Config cfg = load_with_overrides(opts);
    std::vector<RunSpec> specs;
    specs.reserve(cfg.bench.filters.size());
    for (const std::string& id : cfg.bench.filters) {
        RunSpec spec;
        spec.scenario_id = cfg.scenario.name;
        spec.filter_id = id;
        spec.scenario = cfg.scenario;
        spec.factory = make_filter_factory(cfg, id);
        spec.n_runs = cfg.bench.n_runs;
        spec.base_seed = cfg.bench.base_seed;
        spec.burn_in = cfg.bench.burn_in;
        specs.push_back(std::move(spec));
    }
    const std::vector<MetricReport> reports = run_grid(specs);

    if (wants(cfg, "csv")) {
        const fs::path path = fs::path(cfg.output.directory) /
                              ("bench_" + cfg.scenario.name + ".csv");
        auto os = open_out(path);
        write_report_csv(os, reports);
        for (const MetricReport& report : reports) {
            const fs::path series = fs::path(cfg.output.directory) /
                                    ("mse_" + report.scenario_id + "_" +
                                     report.filter_id + ".csv");
            auto ss = open_out(series);
            write_mse_series_csv(ss, report, cfg.scenario.T);
        }
        std::cout << "wrote " << path.string() << '\n';
    }
    if (wants(cfg, "table")) {
        write_report_table(std::cout, reports);
    }
    if (wants(cfg, "svg")) {
        std::vector<SvgSeries> series;
        for (const MetricReport& report : reports) {
            SvgSeries s;
            s.label = report.filter_id;
            for (std::size_t k = 0; k < report.mse_position_steps.size(); ++k) {
                s.x.push_back(static_cast<double>(k + 1) * cfg.scenario.T);
                s.y.push_back(report.mse_position_steps[k]);
            }
            series.push_back(std::move(s));
        }
        const fs::path path = fs::path(cfg.output.directory) /
                              ("mse_" + cfg.scenario.name + ".svg");
        auto os = open_out(path);
        write_line_chart_svg(os, "position MSE vs time, scenario " + cfg.scenario.name,
                             "t (s)", "MSE (m^2)", series);
        std::cout << "wrote " << path.string() << '\n';
    }

    for (const MetricReport& report : reports) {
        if (!report.valid) {
            std::cerr << "garchtrack: report " << report.filter_id
                      << " excluded more than 10% of runs\n";
            return kExitInvalidReport;
        }
    }
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, std::string filter_id) {
    const Config cfg = load_with_overrides(opts);
    if (filter_id.empty()) {
        filter_id = cfg.filters.contains("pf_garch") ? "pf_garch" : "pf";
    }
    RunSpec spec;
    spec.scenario_id = cfg.scenario.name;
    spec.filter_id = filter_id;
    spec.scenario = cfg.scenario;
    spec.n_runs = cfg.bench.n_runs;
    spec.base_seed = cfg.bench.base_seed;
    spec.burn_in = cfg.bench.burn_in;
    const auto factory = make_sized_filter_factory(cfg, filter_id);
    const std::vector<SweepRow> rows =
        particle_sweep(spec, factory, cfg.bench.ns_list);

    if (wants(cfg, "csv") || wants(cfg, "table")) {
        const fs::path path = fs::path(cfg.output.directory) /
                              ("sweep_" + cfg.scenario.name + "_" + filter_id + ".csv");
        auto os = open_out(path);
        write_sweep_csv(os, rows);
        std::cout << "wrote " << path.string() << '\n';
    }
    if (wants(cfg, "table")) {
        write_sweep_csv(std::cout, rows);
    }
    if (wants(cfg, "svg")) {
        SvgSeries s;
        s.label = filter_id;
        for (const SweepRow& row : rows) {
            s.x.push_back(row.n_s);
            s.y.push_back(row.mse_position);
        }
        const std::vector<SvgSeries> series{s};
        const fs::path path = fs::path(cfg.output.directory) /
                              ("sweep_" + cfg.scenario.name + "_" + filter_id + ".svg");
        auto os = open_out(path);
        write_line_chart_svg(os, "position MSE vs particle count, scenario " +
                                     cfg.scenario.name,
                             "particles", "MSE (m^2)", series);
        std::cout << "wrote " << path.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GARCH-volatility maneuvering-target tracking simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string truth_path;
    std::string filter_id;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "config file (JSON)")
            ->required();
        cmd->add_option("--out", opts.out_dir, "output directory override");
        cmd->add_option("--seed", opts.seed, "base seed override")
            ->each([&](const std::string&) { opts.seed_set = true; });
        cmd->add_option("--format", opts.format, "output format override")
            ->check(CLI::IsMember({"csv", "table", "svg"}));
    };

    CLI::App* simulate = app.add_subcommand("simulate", "generate a truth CSV");
    add_common(simulate);

    CLI::App* track = app.add_subcommand("track", "run one filter over a truth CSV");
    add_common(track);
    track->add_option("--truth", truth_path, "truth CSV path")->required();
    track->add_option("--filter", filter_id, "filter id")->required();

    CLI::App* bench = app.add_subcommand("bench", "Monte Carlo RMSE benchmark");
    add_common(bench);

    CLI::App* sweep = app.add_subcommand("sweep", "particle-count sweep");
    add_common(sweep);
    sweep->add_option("--filter", filter_id, "PF-family filter id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (track->parsed()) return cmd_track(opts, truth_path, filter_id);
        if (bench->parsed()) return cmd_bench(opts);
        if (sweep->parsed()) return cmd_sweep(opts, filter_id);
    } catch (const ConfigError& e) {
        std::cerr << "garchtrack: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "garchtrack: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
