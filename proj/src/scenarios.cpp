#include "garchtrack/scenarios.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "garchtrack/csv.hpp"
#include "garchtrack/rng.hpp"

namespace garchtrack {

namespace {
constexpr double kTwoPi = 6.283185307179586;
// truth-internal sub-streams of the generation seed
constexpr std::uint64_t kInitSub = 0xA1;
constexpr std::uint64_t kProcessSub = 0xA2;
constexpr std::uint64_t kMeasSub = 0xA3;
}  // namespace

double AxisProfile::value_at(int sample, double T) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::piecewise_constant: {
            double value = 0.0;
            for (const PiecewiseStep& s : steps) {
                if (sample >= s.first_sample && sample <= s.last_sample) {
                    value += s.value;
                }
            }
            return value;
        }
        case Kind::sinusoid_regime: {
            const double t = sample * T;
            if (t >= sinusoid.plateau_start_s && t < sinusoid.plateau_end_s) {
                return sinusoid.plateau_value;
            }
            return sinusoid.amplitude *
                   std::sin(kTwoPi * t / sinusoid.period_s + sinusoid.phase);
        }
    }
    return 0.0;
}

void Scenario::require_valid() const {
    if (n_steps < 1) throw std::invalid_argument("Scenario: requires n_steps >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("Scenario: requires T > 0");
    meas.require_valid();
}

namespace {
Scenario high_maneuver_base() {
    Scenario scn;
    scn.T = 0.05;
    scn.n_steps = 200;
    scn.init.kind = InitLaw::Kind::fixed;
    scn.init.mean << 2000.0, 10000.0, 0.0, -15.0, 0.0, 0.0;
    scn.accel_x.kind = AxisProfile::Kind::piecewise_constant;
    scn.accel_y.kind = AxisProfile::Kind::piecewise_constant;
    scn.meas.sigma2_pos = 1e4;
    scn.meas.sigma2_vel = 25.0;
    return scn;
}
}  // namespace

Scenario scenario_1a() {
    Scenario scn = high_maneuver_base();
    scn.name = "1a";
    scn.accel_x.steps = {{100, 200, 40.0}};
    scn.accel_y.steps = {{70, 200, 38.0}};
    return scn;
}

Scenario scenario_1b() {
    Scenario scn = high_maneuver_base();
    scn.name = "1b";
    scn.accel_x.steps = {{100, 200, 0.8}};
    scn.accel_y.steps = {{70, 200, 1.0}};
    return scn;
}

Scenario scenario_2() {
    Scenario scn;
    scn.name = "2";
    scn.T = 1.0;
    scn.n_steps = 200;
    scn.init.kind = InitLaw::Kind::gaussian;
    scn.init.mean.setZero();
    scn.init.std << 100.0, 100.0, 10.0, 10.0, 1.0, 1.0;
    scn.process_noise.kind = ProcessNoiseLaw::Kind::student_t;
    scn.process_noise.dof = 1.0;
    scn.process_noise.scale = 1.0;
    scn.meas.sigma2_pos = 100.0;
    scn.meas.sigma2_vel = 1.0;
    return scn;
}

Scenario scenario_3() {
    Scenario scn;
    scn.name = "3";
    scn.T = 1.0;
    scn.n_steps = 200;
    scn.init.kind = InitLaw::Kind::fixed;
    scn.init.mean << 10.0, -10.0, 10.0, 15.0, 0.0, 0.0;
    scn.accel_x.kind = AxisProfile::Kind::sinusoid_regime;
    scn.accel_y.kind = AxisProfile::Kind::sinusoid_regime;
    scn.meas.sigma2_pos = 100.0;
    scn.meas.sigma2_vel = 1.0;
    return scn;
}

Scenario scenario_cv() {
    Scenario scn;
    scn.name = "cv";
    scn.T = 1.0;
    scn.n_steps = 100;
    scn.init.kind = InitLaw::Kind::fixed;
    scn.init.mean << 0.0, 0.0, 10.0, 5.0, 0.0, 0.0;
    scn.meas.sigma2_pos = 100.0;
    scn.meas.sigma2_vel = 1.0;
    return scn;
}

Scenario scenario_by_id(const std::string& id) {
    if (id == "1a") return scenario_1a();
    if (id == "1b") return scenario_1b();
    if (id == "2") return scenario_2();
    if (id == "3") return scenario_3();
    if (id == "cv") return scenario_cv();
    throw std::invalid_argument("unknown scenario id '" + id + "'");
}

TruthRecord generate(const Scenario& scn, std::uint64_t seed) {
    scn.require_valid();
    Rng init_rng(derive_seed(seed, kInitSub));
    Rng process_rng(derive_seed(seed, kProcessSub));
    Rng meas_rng(derive_seed(seed, kMeasSub));

    Vec6 init = scn.init.mean;
    if (scn.init.kind == InitLaw::Kind::gaussian) {
        for (int i = 0; i < 6; ++i) init(i) += scn.init.std(i) * init_rng.normal();
    }

    // total acceleration = deterministic command + random-walk extra part
    Vec2 extra(init(state_index::ax), init(state_index::ay));
    Vec2 pos(init(state_index::x), init(state_index::y));
    Vec2 vel(init(state_index::vx), init(state_index::vy));
    Vec2 accel(scn.accel_x.value_at(0, scn.T) + extra(0),
               scn.accel_y.value_at(0, scn.T) + extra(1));

    TruthRecord record;
    record.samples.reserve(static_cast<std::size_t>(scn.n_steps));
    for (int k = 1; k <= scn.n_steps; ++k) {
        // exact constant-acceleration step holding the interval-start command
        pos += scn.T * vel + 0.5 * scn.T * scn.T * accel;
        vel += scn.T * accel;
        if (scn.process_noise.kind == ProcessNoiseLaw::Kind::student_t) {
            extra(0) += scn.process_noise.scale *
                        process_rng.student_t(scn.process_noise.dof);
            extra(1) += scn.process_noise.scale *
                        process_rng.student_t(scn.process_noise.dof);
        }
        accel << scn.accel_x.value_at(k, scn.T) + extra(0),
                 scn.accel_y.value_at(k, scn.T) + extra(1);

        TruthSample sample;
        sample.k = k;
        sample.t = k * scn.T;
        sample.state << pos(0), pos(1), vel(0), vel(1), accel(0), accel(1);
        sample.measurement = measure(scn.meas, sample.state, meas_rng);
        record.samples.push_back(sample);
    }
    return record;
}

void write_truth_csv(std::ostream& os, const TruthRecord& record) {
    os << "k,t,x,y,vx,vy,ax,ay,zx_meas,zy_meas,zvx_meas,zvy_meas\n";
    for (const TruthSample& s : record.samples) {
        os << s.k << ',' << csv_double(s.t);
        for (int i = 0; i < 6; ++i) os << ',' << csv_double(s.state(i));
        for (int i = 0; i < 4; ++i) os << ',' << csv_double(s.measurement(i));
        os << '\n';
    }
}

TruthRecord read_truth_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) ||
        line != "k,t,x,y,vx,vy,ax,ay,zx_meas,zy_meas,zvx_meas,zvy_meas") {
        throw std::runtime_error("truth csv: missing or unexpected header");
    }
    TruthRecord record;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 12) {
            throw std::runtime_error("truth csv: expected 12 fields per row");
        }
        TruthSample s;
        s.k = static_cast<int>(parse_double_field(fields[0]));
        s.t = parse_double_field(fields[1]);
        for (int i = 0; i < 6; ++i) {
            s.state(i) = parse_double_field(fields[static_cast<std::size_t>(2 + i)]);
        }
        for (int i = 0; i < 4; ++i) {
            s.measurement(i) =
                parse_double_field(fields[static_cast<std::size_t>(8 + i)]);
        }
        record.samples.push_back(s);
    }
    return record;
}

}  // namespace garchtrack
