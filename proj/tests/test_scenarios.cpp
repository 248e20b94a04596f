#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "garchtrack/scenarios.hpp"

using namespace garchtrack;

namespace {
const TruthSample& at(const TruthRecord& record, int k) {
    return record.samples[static_cast<std::size_t>(k - 1)];
}
}  // namespace

TEST_CASE("scenario 1a: profile and integrated truth") {
    const Scenario scn = scenario_1a();
    CHECK(scn.T == 0.05);
    CHECK(scn.n_steps == 200);
    const TruthRecord truth = generate(scn, 1);
    REQUIRE(truth.samples.size() == 200);

    CHECK(at(truth, 50).state(state_index::ax) == 0.0);
    CHECK(at(truth, 50).state(state_index::ay) == 0.0);
    CHECK(at(truth, 150).state(state_index::ax) == 40.0);
    CHECK(at(truth, 150).state(state_index::ay) == 38.0);
    CHECK(at(truth, 69).state(state_index::ay) == 0.0);
    CHECK(at(truth, 70).state(state_index::ay) == 38.0);
    CHECK(at(truth, 99).state(state_index::ax) == 0.0);
    CHECK(at(truth, 100).state(state_index::ax) == 40.0);

    // velocity unchanged before the command takes effect
    CHECK(at(truth, 70).state(state_index::vy) == -15.0);
    // piecewise integration: -15 + 38 * (130 * 0.05)
    CHECK(at(truth, 200).state(state_index::vy) ==
          doctest::Approx(232.0).epsilon(1e-12));
}

TEST_CASE("scenario 1b: low-maneuver variant shares everything but the levels") {
    const Scenario a = scenario_1a();
    const Scenario b = scenario_1b();
    CHECK(b.meas.sigma2_pos == a.meas.sigma2_pos);
    CHECK(b.meas.sigma2_vel == a.meas.sigma2_vel);
    CHECK(b.T == a.T);

    const TruthRecord truth = generate(b, 2);
    CHECK(at(truth, 150).state(state_index::ax) == 0.8);
    CHECK(at(truth, 150).state(state_index::ay) == 1.0);
    CHECK(at(truth, 60).state(state_index::ax) == 0.0);
    CHECK(at(truth, 60).state(state_index::ay) == 0.0);
}

TEST_CASE("deterministic profiles: seed changes only the measurements") {
    for (const Scenario& scn : {scenario_1a(), scenario_1b(), scenario_3()}) {
        const TruthRecord t1 = generate(scn, 100);
        const TruthRecord t2 = generate(scn, 200);
        REQUIRE(t1.samples.size() == t2.samples.size());
        bool meas_differ = false;
        for (std::size_t i = 0; i < t1.samples.size(); ++i) {
            CHECK(t1.samples[i].state == t2.samples[i].state);
            if (t1.samples[i].measurement != t2.samples[i].measurement) {
                meas_differ = true;
            }
        }
        CHECK(meas_differ);
    }
}

TEST_CASE("same seed regenerates an identical record") {
    for (const Scenario& scn : {scenario_1a(), scenario_2(), scenario_3()}) {
        const TruthRecord t1 = generate(scn, 77);
        const TruthRecord t2 = generate(scn, 77);
        REQUIRE(t1.samples.size() == t2.samples.size());
        for (std::size_t i = 0; i < t1.samples.size(); ++i) {
            CHECK(t1.samples[i].state == t2.samples[i].state);
            CHECK(t1.samples[i].measurement == t2.samples[i].measurement);
        }
    }
}

TEST_CASE("zero-profile scenario integrates to a straight line") {
    const Scenario scn = scenario_cv();
    const TruthRecord truth = generate(scn, 5);
    for (const int k : {1, 10, 50, 100}) {
        CHECK(at(truth, k).state(state_index::x) == 10.0 * k);
        CHECK(at(truth, k).state(state_index::y) == 5.0 * k);
        CHECK(at(truth, k).state(state_index::vx) == 10.0);
        CHECK(at(truth, k).state(state_index::ax) == 0.0);
    }
}

TEST_CASE("scenario 2: heavy-tailed acceleration increments") {
    Scenario scn = scenario_2();
    scn.n_steps = 10'000;

    const TruthRecord truth = generate(scn, 31);
    std::vector<double> innov;
    innov.reserve(truth.samples.size());
    double prev = truth.samples.front().state(state_index::ax);
    for (std::size_t i = 1; i < truth.samples.size(); ++i) {
        const double cur = truth.samples[i].state(state_index::ax);
        innov.push_back(std::abs(cur - prev));
        prev = cur;
    }
    // |Cauchy(0, scale)| has median equal to the scale
    std::vector<double> sorted = innov;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    CHECK(sorted[sorted.size() / 2] == doctest::Approx(1.0).epsilon(0.10));

    // far from Gaussian: enormous sample excess kurtosis
    for (const std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const TruthRecord t = generate(scn, seed);
        double m2 = 0.0;
        double m4 = 0.0;
        double mean = 0.0;
        std::vector<double> d;
        double p = t.samples.front().state(state_index::ax);
        for (std::size_t i = 1; i < t.samples.size(); ++i) {
            const double cur = t.samples[i].state(state_index::ax);
            d.push_back(cur - p);
            p = cur;
            mean += d.back();
        }
        mean /= static_cast<double>(d.size());
        for (double v : d) {
            m2 += (v - mean) * (v - mean);
            m4 += std::pow(v - mean, 4);
        }
        m2 /= static_cast<double>(d.size());
        m4 /= static_cast<double>(d.size());
        CHECK(m4 / (m2 * m2) - 3.0 > 10.0);
    }
}

TEST_CASE("scenario 3: regime structure of the command") {
    const Scenario scn = scenario_3();
    const double A = scn.accel_x.sinusoid.amplitude;
    REQUIRE(A == 2.0);

    // continuous within each regime: successive samples move by at most the
    // sinusoid's maximum slope times T (with slack)
    const double max_step =
        A * 6.283185307179586 / scn.accel_x.sinusoid.period_s * scn.T * 1.1;
    double max_abs = 0.0;
    for (int k = 1; k < 100; ++k) {
        const double cur = scn.accel_x.value_at(k, scn.T);
        const double prev = scn.accel_x.value_at(k - 1, scn.T);
        CHECK(std::abs(cur - prev) <= max_step);
        max_abs = std::max(max_abs, std::abs(cur));
    }
    CHECK(max_abs == doctest::Approx(A).epsilon(1e-9));

    // plateau is exactly flat on [100, 150)
    for (int k = 100; k < 150; ++k) {
        CHECK(scn.accel_x.value_at(k, scn.T) == scn.accel_x.sinusoid.plateau_value);
    }

    // the regime change at t = 100 s is a genuine discontinuity by default
    const double before = scn.accel_x.value_at(99, scn.T);
    const double after = scn.accel_x.value_at(100, scn.T);
    CHECK(std::abs(before - after) > 0.5);

    // sinusoid resumes at t = 150 s (closed-open plateau)
    CHECK(std::abs(scn.accel_x.value_at(150, scn.T)) > 0.5);

    const TruthRecord truth = generate(scn, 3);
    CHECK(truth.samples.size() == 200);
    CHECK(at(truth, 1).state.allFinite());
}

TEST_CASE("measurement residuals match the configured covariance") {
    Scenario scn = scenario_cv();
    scn.n_steps = 10'000;
    const TruthRecord truth = generate(scn, 55);
    Vec4 sum = Vec4::Zero();
    Vec4 sum_sq = Vec4::Zero();
    for (const TruthSample& s : truth.samples) {
        const Vec4 resid = s.measurement - scn.meas.H() * s.state;
        sum += resid;
        sum_sq += resid.cwiseProduct(resid);
    }
    const auto n = static_cast<double>(truth.samples.size());
    const Vec4 var = sum_sq / n - (sum / n).cwiseProduct(sum / n);
    const Vec4 expected = scn.meas.r_diag();
    for (int i = 0; i < 4; ++i) {
        CHECK(var(i) == doctest::Approx(expected(i)).epsilon(0.05));
    }
}

TEST_CASE("truth CSV round trip is exact") {
    const TruthRecord truth = generate(scenario_2(), 8);
    std::ostringstream os;
    write_truth_csv(os, truth);
    std::istringstream is(os.str());
    const TruthRecord back = read_truth_csv(is);
    REQUIRE(back.samples.size() == truth.samples.size());
    for (std::size_t i = 0; i < truth.samples.size(); ++i) {
        CHECK(back.samples[i].k == truth.samples[i].k);
        CHECK(back.samples[i].t == truth.samples[i].t);
        CHECK(back.samples[i].state == truth.samples[i].state);
        CHECK(back.samples[i].measurement == truth.samples[i].measurement);
    }
}

TEST_CASE("scenario lookup by id") {
    CHECK(scenario_by_id("1a").name == "1a");
    CHECK(scenario_by_id("cv").name == "cv");
    CHECK_THROWS_AS(scenario_by_id("nope"), std::invalid_argument);
}
