#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "garchtrack/config.hpp"

using namespace garchtrack;
namespace fs = std::filesystem;

namespace {

const std::string kMinimalConfig = R"({
  "scenario": {"id": "1a"},
  "filters": {
    "pf_garch": {
      "n_s": 16,
      "garch_x": {"alpha0": 1.0, "alpha1": 0.5, "beta1": 0.3},
      "garch_y": {"alpha0": 1.0, "alpha1": 0.5, "beta1": 0.3},
      "h0": 1.0
    },
    "pf": {"n_s": 16, "sigma2": 150.0},
    "imm": {"sigma_cv": 2.0, "sigma_ca": 20.0}
  },
  "bench": {"n_runs": 2, "base_seed": 7}
})";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("garchtrack_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream os(p);
    os << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GARCHTRACK_CLI_PATH) + " " + args +
                            " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("config: minimal document resolves scenario defaults") {
    const Config cfg = parse_config(kMinimalConfig);
    CHECK(cfg.scenario.name == "1a");
    CHECK(cfg.scenario.T == 0.05);
    CHECK(cfg.scenario.n_steps == 200);
    CHECK(cfg.scenario.meas.sigma2_pos == 1e4);
    CHECK(cfg.scenario.meas.sigma2_vel == 25.0);
    CHECK(cfg.bench.n_runs == 2);
    CHECK(cfg.bench.base_seed == 7);
    CHECK(cfg.filters.size() == 3);
    // defaults for unset sections
    CHECK(cfg.output.directory == "out");
}

TEST_CASE("config: scenario overrides apply") {
    const Config cfg = parse_config(R"({
      "scenario": {"id": "3", "amplitude": 4.0, "period_s": 25.0, "phase_x": 0.0},
      "filters": {"pf": {"n_s": 8, "sigma2": 5.0}}
    })");
    CHECK(cfg.scenario.accel_x.sinusoid.amplitude == 4.0);
    CHECK(cfg.scenario.accel_y.sinusoid.amplitude == 4.0);
    CHECK(cfg.scenario.accel_x.sinusoid.phase == 0.0);
    CHECK(cfg.scenario.accel_y.sinusoid.phase != 0.0);  // per-axis phases
}

TEST_CASE("config: unknown keys are rejected with the offending path") {
    try {
        parse_config(R"({"scenario": {"id": "1a", "typo_key": 1}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"id": "1a"}, "extra": {}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"id": "bogus"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("config: bench may only reference defined filters") {
    CHECK_THROWS_AS(parse_config(R"({
      "scenario": {"id": "1a"},
      "filters": {"pf": {"n_s": 8, "sigma2": 1.0}},
      "bench": {"filters": ["pf", "imm"]}
    })"),
                    ConfigError);
}

TEST_CASE("config: filter factories bind the scenario cadence") {
    const Config cfg = parse_config(kMinimalConfig);
    for (const std::string& id : {"pf_garch", "pf", "imm"}) {
        auto filter = make_filter_factory(cfg, id)(1);
        filter->init(Vec4::Zero());
        CHECK(filter->step(Vec4::Zero()).kin.allFinite());
    }
    CHECK_THROWS_AS(make_filter_factory(cfg, "nope"), ConfigError);
    CHECK_THROWS_AS(make_sized_filter_factory(cfg, "imm"), ConfigError);
}

TEST_CASE("cli: simulate writes a reproducible truth file") {
    TempDir tmp;
    const fs::path config = write_file(tmp.path, "c.json", kMinimalConfig);
    const fs::path out = tmp.path / "out";

    CHECK(run_cli("simulate --config " + config.string() + " --out " +
                  out.string()) == 0);
    const fs::path truth = out / "truth_1a.csv";
    REQUIRE(fs::exists(truth));
    const std::string first = slurp(truth);
    CHECK(count_lines(first) == 201);  // header + 200 samples

    CHECK(run_cli("simulate --config " + config.string() + " --out " +
                  out.string()) == 0);
    CHECK(slurp(truth) == first);  // byte-identical rerun

    // a different seed changes the file
    CHECK(run_cli("simulate --config " + config.string() + " --out " +
                  out.string() + " --seed 99") == 0);
    CHECK(slurp(truth) != first);
}

TEST_CASE("cli: config errors exit with code 2") {
    TempDir tmp;
    const fs::path bad = write_file(tmp.path, "bad.json",
                                    R"({"scenario": {"id": "wat"}})");
    CHECK(run_cli("simulate --config " + bad.string()) == 2);
    CHECK(run_cli("simulate --config " + (tmp.path / "missing.json").string()) == 2);
    CHECK(run_cli("track --config " + bad.string()) == 2);  // missing required flags
}

TEST_CASE("cli: track emits one row per truth sample") {
    TempDir tmp;
    const fs::path config = write_file(tmp.path, "c.json", kMinimalConfig);
    const fs::path out = tmp.path / "out";
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                    out.string()) == 0);
    const fs::path truth = out / "truth_1a.csv";

    CHECK(run_cli("track --config " + config.string() + " --truth " +
                  truth.string() + " --filter imm --out " + out.string()) == 0);
    const std::string imm_csv = slurp(out / "track_1a_imm.csv");
    CHECK(count_lines(imm_csv) == 201);
    CHECK(imm_csv.rfind("k,t,x_hat,y_hat,vx_hat,vy_hat,ax_hat,ay_hat\n", 0) == 0);

    CHECK(run_cli("track --config " + config.string() + " --truth " +
                  truth.string() + " --filter pf_garch --out " + out.string()) == 0);
    const std::string pf_csv = slurp(out / "track_1a_pf_garch.csv");
    CHECK(count_lines(pf_csv) == 201);
    CHECK(pf_csv.find(",hx_hat,hy_hat,ess,resampled") != std::string::npos);

    // missing truth file
    CHECK(run_cli("track --config " + config.string() + " --truth " +
                  (tmp.path / "nope.csv").string() + " --filter imm") == 2);
}

TEST_CASE("cli: plain PF equals the degenerate-GARCH config at the CLI level") {
    // pf with sigma2 = 150 against pf_garch with alpha0 = 150, alpha1 = beta1 = 0
    const std::string config_text = R"({
      "scenario": {"id": "1a"},
      "filters": {
        "pf_garch": {
          "n_s": 24,
          "garch_x": {"alpha0": 150.0, "alpha1": 0.0, "beta1": 0.0},
          "garch_y": {"alpha0": 150.0, "alpha1": 0.0, "beta1": 0.0},
          "h0": 150.0
        },
        "pf": {"n_s": 24, "sigma2": 150.0}
      },
      "bench": {"n_runs": 1, "base_seed": 5}
    })";
    TempDir tmp;
    const fs::path config = write_file(tmp.path, "c.json", config_text);
    const fs::path out = tmp.path / "out";
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                    out.string()) == 0);
    const fs::path truth = out / "truth_1a.csv";
    REQUIRE(run_cli("track --config " + config.string() + " --truth " +
                    truth.string() + " --filter pf_garch --out " + out.string()) == 0);
    REQUIRE(run_cli("track --config " + config.string() + " --truth " +
                    truth.string() + " --filter pf --out " + out.string()) == 0);
    CHECK(slurp(out / "track_1a_pf_garch.csv") == slurp(out / "track_1a_pf.csv"));
}

TEST_CASE("cli: bench writes reports and honors formats") {
    const std::string config_text = R"({
      "scenario": {"id": "cv"},
      "filters": {
        "pf": {"n_s": 16, "sigma2": 1.0,
               "prior_spread": {"pos": 10.0, "vel": 1.0, "acc": 0.5}},
        "imm": {"sigma_cv": 0.1, "sigma_ca": 1.0}
      },
      "bench": {"n_runs": 2, "base_seed": 3, "filters": ["pf", "imm"],
                "ns_list": [8, 16]}
    })";
    TempDir tmp;
    const fs::path config = write_file(tmp.path, "c.json", config_text);
    const fs::path out = tmp.path / "out";

    CHECK(run_cli("bench --config " + config.string() + " --out " + out.string()) == 0);
    const std::string report = slurp(out / "bench_cv.csv");
    CHECK(count_lines(report) == 3);  // header + two filters
    CHECK(fs::exists(out / "mse_cv_pf.csv"));
    CHECK(fs::exists(out / "mse_cv_imm.csv"));

    CHECK(run_cli("bench --config " + config.string() + " --out " + out.string() +
                  " --format svg") == 0);
    CHECK(fs::exists(out / "mse_cv.svg"));

    CHECK(run_cli("sweep --config " + config.string() + " --out " + out.string() +
                  " --filter pf") == 0);
    const std::string sweep = slurp(out / "sweep_cv_pf.csv");
    CHECK(count_lines(sweep) == 3);  // header + two particle counts
    CHECK(sweep.rfind("n_s,mse_position", 0) == 0);
}

TEST_CASE("cli: bench flags invalid reports with exit code 3") {
    // an absurd prior spread makes every estimate non-finite, so every run
    // is excluded and the report is invalid
    const std::string config_text = R"({
      "scenario": {"id": "cv"},
      "filters": {
        "pf": {"n_s": 4, "sigma2": 1.0,
               "prior_spread": {"pos": 1e308, "vel": 1e308, "acc": 1e308}}
      },
      "bench": {"n_runs": 2, "base_seed": 3, "filters": ["pf"]}
    })";
    TempDir tmp;
    const fs::path config = write_file(tmp.path, "c.json", config_text);
    CHECK(run_cli("bench --config " + config.string() + " --out " +
                  (tmp.path / "out").string()) == 3);
}
