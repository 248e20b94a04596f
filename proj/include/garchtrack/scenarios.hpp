#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "garchtrack/statespace.hpp"
#include "garchtrack/types.hpp"

namespace garchtrack {

/// Deterministic per-axis acceleration command.
///
/// piecewise_constant: sum of steps, each active on 1-based samples
/// [first_sample, last_sample] inclusive.
///
/// sinusoid_regime: amplitude * sin(2*pi*t/period + phase) outside the
/// plateau window [plateau_start_s, plateau_end_s) where the command is
/// plateau_value (closed-open boundaries).
struct PiecewiseStep {
    int first_sample;
    int last_sample;
    double value;
};

struct SinusoidRegime {
    double amplitude = 2.0;
    double period_s = 50.0;
    double phase = 1.5707963267948966;  // cosine-like start
    double plateau_value = 0.0;
    double plateau_start_s = 100.0;
    double plateau_end_s = 150.0;
};

struct AxisProfile {
    enum class Kind { zero, piecewise_constant, sinusoid_regime };
    Kind kind = Kind::zero;
    std::vector<PiecewiseStep> steps;
    SinusoidRegime sinusoid;

    /// Command value at 1-based sample k (time k*T).
    [[nodiscard]] double value_at(int sample, double T) const;
};

/// Stochastic per-step acceleration increments added on top of the command.
struct ProcessNoiseLaw {
    enum class Kind { none, student_t };
    Kind kind = Kind::none;
    double dof = 1.0;
    double scale = 1.0;  ///< m/s^2 per step
};

/// Initial-state law: fixed vector or independent Gaussian components.
struct InitLaw {
    enum class Kind { fixed, gaussian };
    Kind kind = Kind::fixed;
    Vec6 mean = Vec6::Zero();
    Vec6 std = Vec6::Zero();
};

struct Scenario {
    std::string name;
    double T = 1.0;
    int n_steps = 200;
    InitLaw init;
    AxisProfile accel_x;
    AxisProfile accel_y;
    ProcessNoiseLaw process_noise;
    MeasurementModel meas;

    void require_valid() const;
};

/// High-maneuver trajectory: T = 0.05 s, 200 samples, start
/// [2000, 10000, 0, -15], a_y = 38 m/s^2 on samples [70, 200] and
/// a_x = 40 m/s^2 on samples [100, 200]; zero process noise;
/// measurement variances 1e4 m^2 and 25 (m/s)^2.
Scenario scenario_1a();

/// Low-maneuver variant of scenario 1a: a_y = 1 m/s^2, a_x = 0.8 m/s^2.
Scenario scenario_1b();

/// Heavy-tailed process noise: T = 1 s, Student-t (dof 1) acceleration
/// increments, Gaussian random initial state.
Scenario scenario_2();

/// Sinusoidal maneuver with an abrupt regime change: T = 1 s, 200 samples,
/// start [10, -10, 10, 15], sinusoidal command interrupted by a constant
/// plateau on [100 s, 150 s).
Scenario scenario_3();

/// Straight-line constant-velocity truth used by consistency checks.
Scenario scenario_cv();

/// Scenario with the given id ("1a", "1b", "2", "3", "cv");
/// std::invalid_argument otherwise.
Scenario scenario_by_id(const std::string& id);

struct TruthSample {
    int k;          ///< 1-based sample index
    double t;       ///< k * T
    Vec6 state;     ///< ground truth
    Vec4 measurement;
};

struct TruthRecord {
    std::vector<TruthSample> samples;
};

/// Integrates the truth with the exact constant-acceleration step per
/// sample, holding the acceleration in effect at the interval start, then
/// synthesizes measurements. Deterministic per seed: process noise, initial
/// state and measurement noise come from disjoint sub-streams of the seed.
TruthRecord generate(const Scenario& scn, std::uint64_t seed);

/// CSV with header k,t,x,y,vx,vy,ax,ay,zx_meas,zy_meas,zvx_meas,zvy_meas and
/// 17-significant-digit values.
void write_truth_csv(std::ostream& os, const TruthRecord& record);
TruthRecord read_truth_csv(std::istream& is);

}  // namespace garchtrack
