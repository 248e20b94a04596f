#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "garchtrack/bench.hpp"
#include "garchtrack/garch.hpp"
#include "garchtrack/imm.hpp"
#include "garchtrack/particle_filter.hpp"
#include "garchtrack/scenarios.hpp"

namespace garchtrack {

/// Configuration or usage problem; maps to exit code 2 at the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filter sections carry everything except the sampling interval and the
/// measurement model, which always come from the scenario.
struct PfGarchSection {
    int n_s = 50;
    double mu = 0.0;
    GarchParams garch_x{1.0, 0.0, 0.0};
    GarchParams garch_y{1.0, 0.0, 0.0};
    double h0 = 1.0;
    PriorSpread prior_spread;
    Resampler resampler = Resampler::multinomial;
    double ess_fraction = 0.5;
};

struct PfPlainSection {
    int n_s = 200;
    double mu = 0.0;
    double sigma2 = 150.0;
    PriorSpread prior_spread;
    Resampler resampler = Resampler::multinomial;
    double ess_fraction = 0.5;
};

struct ImmSection {
    Mat2 p_ij = (Mat2() << 0.99, 0.01, 0.01, 0.99).finished();
    double sigma_cv = 2.0;
    double sigma_ca = 20.0;
    Vec2 init_probs{0.5, 0.5};
    double p0_accel_var = 100.0;
};

using FilterSection = std::variant<PfGarchSection, PfPlainSection, ImmSection>;

struct BenchSection {
    int n_runs = 100;
    std::uint64_t base_seed = 20260801;
    std::vector<int> ns_list{10, 25, 50, 100, 200, 400};
    std::vector<std::string> filters;
    int burn_in = 0;
};

struct OutputSection {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "table"};
};

struct Config {
    Scenario scenario;
    std::map<std::string, FilterSection> filters;
    BenchSection bench;
    OutputSection output;
};

/// Parses a config document. Unknown keys, missing required keys, malformed
/// values and undefined filter references are ConfigError with the
/// offending key path in the message.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

/// Factory for the named filter section bound to the config's scenario.
FilterFactory make_filter_factory(const Config& cfg, const std::string& filter_id);

/// As above but with the particle count overridden per call (PF-family
/// sections only; ConfigError for IMM).
std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>
make_sized_filter_factory(const Config& cfg, const std::string& filter_id);

}  // namespace garchtrack
