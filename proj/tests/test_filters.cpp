#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "garchtrack/imm.hpp"
#include "garchtrack/kalman.hpp"
#include "garchtrack/particle_filter.hpp"
#include "garchtrack/rng.hpp"
#include "garchtrack/scenarios.hpp"

using namespace garchtrack;

namespace {

PfGarchConfig small_pf_config(int n_s = 32) {
    PfGarchConfig cfg;
    cfg.n_s = n_s;
    cfg.garch_x = GarchParams{0.5, 0.6, 0.3};
    cfg.garch_y = GarchParams{0.5, 0.6, 0.3};
    cfg.trans = build_phi(1.0, 0.1);
    cfg.meas.sigma2_pos = 100.0;
    cfg.meas.sigma2_vel = 1.0;
    cfg.prior_spread = PriorSpread{10.0, 1.0, 1.0};
    cfg.h0 = 1.0;
    return cfg;
}

Ensemble make_weighted(const std::vector<double>& weights) {
    Ensemble ens;
    ens.particles.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        ens.particles[i].weight = weights[i];
        ens.particles[i].kin(state_index::x) = static_cast<double>(i);  // identity tag
    }
    return ens;
}

}  // namespace

TEST_CASE("effective sample size") {
    CHECK(effective_sample_size(make_weighted({0.5, 0.5, 0.0, 0.0})) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(effective_sample_size(make_weighted({0.25, 0.25, 0.25, 0.25})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(effective_sample_size(make_weighted({1.0, 0.0, 0.0})) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resample: degenerate weights duplicate the surviving particle") {
    for (const Resampler scheme : {Resampler::multinomial, Resampler::systematic}) {
        Ensemble ens = make_weighted({0.0, 1.0, 0.0, 0.0});
        Rng rng(1);
        resample(ens, scheme, rng);
        for (const Particle& p : ens.particles) {
            CHECK(p.kin(state_index::x) == 1.0);
            CHECK(p.weight == doctest::Approx(0.25));
        }
    }
}

TEST_CASE("resample: systematic keeps a uniform ensemble intact") {
    // n = 8 makes 1/n exact, so stratified positions are exact too
    Ensemble ens = make_weighted(std::vector<double>(8, 0.125));
    Rng rng(7);
    resample(ens, Resampler::systematic, rng);
    std::map<double, int> counts;
    for (const Particle& p : ens.particles) counts[p.kin(state_index::x)]++;
    CHECK(counts.size() == 8);
    for (const auto& [tag, count] : counts) CHECK(count == 1);
}

TEST_CASE("resample: multinomial offspring counts pass a chi-square check") {
    const std::vector<double> w{0.22, 0.18, 0.15, 0.12, 0.11, 0.10, 0.07, 0.05};
    constexpr int kTrials = 20'000;
    Rng rng(42);
    std::vector<double> counts(w.size(), 0.0);
    for (int t = 0; t < kTrials; ++t) {
        Ensemble ens = make_weighted(w);
        resample(ens, Resampler::multinomial, rng);
        for (const Particle& p : ens.particles) {
            counts[static_cast<std::size_t>(p.kin(state_index::x))] += 1.0;
        }
    }
    const double total = kTrials * static_cast<double>(w.size());
    double chi2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double expected = total * w[i];
        chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    // 0.99 quantile of chi-square with 7 dof
    CHECK(chi2 < 18.475306906582357);
}

TEST_CASE("resample: systematic offspring means are unbiased") {
    const std::vector<double> w{0.22, 0.18, 0.15, 0.12, 0.11, 0.10, 0.07, 0.05};
    constexpr int kTrials = 20'000;
    Rng rng(43);
    std::vector<double> sum(w.size(), 0.0);
    std::vector<double> sum_sq(w.size(), 0.0);
    for (int t = 0; t < kTrials; ++t) {
        Ensemble ens = make_weighted(w);
        resample(ens, Resampler::systematic, rng);
        std::vector<double> c(w.size(), 0.0);
        for (const Particle& p : ens.particles) {
            c[static_cast<std::size_t>(p.kin(state_index::x))] += 1.0;
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            sum[i] += c[i];
            sum_sq[i] += c[i] * c[i];
        }
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mean = sum[i] / kTrials;
        const double var = sum_sq[i] / kTrials - mean * mean;
        const double expected = 8.0 * w[i];
        REQUIRE(var > 0.0);
        const double z = (mean - expected) / std::sqrt(var / kTrials);
        stat += z * z;
    }
    // 0.99 quantile of chi-square with 8 dof
    CHECK(stat < 20.090235029663233);
}

TEST_CASE("pf init: uniform weights, determinism, degenerate prior") {
    PfGarchConfig cfg = small_pf_config();
    const Vec4 y0(5.0, -3.0, 1.0, 0.5);

    PfGarchFilter f1(cfg, 77);
    f1.init(y0);
    for (const Particle& p : f1.ensemble().particles) {
        CHECK(p.weight == doctest::Approx(1.0 / cfg.n_s).epsilon(1e-15));
        CHECK(p.vol.hx == cfg.h0);
        CHECK(p.vol.hy == cfg.h0);
    }

    PfGarchFilter f2(cfg, 77);
    f2.init(y0);
    for (int i = 0; i < cfg.n_s; ++i) {
        CHECK(f1.ensemble().particles[static_cast<std::size_t>(i)].kin ==
              f2.ensemble().particles[static_cast<std::size_t>(i)].kin);
    }

    cfg.prior_spread = PriorSpread{0.0, 0.0, 0.0};
    PfGarchFilter tight(cfg, 78);
    tight.init(y0);
    for (const Particle& p : tight.ensemble().particles) {
        CHECK(p.kin(state_index::x) == y0(0));
        CHECK(p.kin(state_index::y) == y0(1));
        CHECK(p.kin(state_index::vx) == y0(2));
        CHECK(p.kin(state_index::vy) == y0(3));
        CHECK(p.kin(state_index::ax) == 0.0);
    }

    PfGarchConfig bad = small_pf_config(1);
    CHECK_THROWS_AS(PfGarchFilter(bad, 1), std::invalid_argument);
}

TEST_CASE("pf step: weights stay normalized, ESS bounded, volatility positive") {
    const PfGarchConfig cfg = small_pf_config();
    PfGarchFilter filter(cfg, 2025);
    const TruthRecord truth = generate(scenario_cv(), 10);
    filter.init(truth.samples.front().measurement);
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate est = filter.step(sample.measurement);
        double sum = 0.0;
        for (const Particle& p : filter.ensemble().particles) {
            sum += p.weight;
            CHECK(p.vol.hx > 0.0);
            CHECK(p.vol.hy > 0.0);
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(est.ess >= 1.0);
        CHECK(est.ess <= static_cast<double>(cfg.n_s) * (1.0 + 1e-12));
        CHECK(est.vol.has_value());
    }
}

TEST_CASE("pf step: uniform weights never trigger resampling") {
    PfGarchConfig cfg = small_pf_config(8);
    cfg.ess_fraction = 1.0;
    cfg.meas.sigma2_pos = 1e12;  // uninformative measurement keeps weights uniform
    cfg.meas.sigma2_vel = 1e12;
    cfg.prior_spread = PriorSpread{0.0, 0.0, 0.0};
    PfGarchFilter filter(cfg, 4);
    filter.init(Vec4::Zero());
    const TrackEstimate est = filter.step(Vec4::Zero());
    CHECK(est.ess == doctest::Approx(8.0).epsilon(1e-9));
    CHECK_FALSE(est.resampled);
}

TEST_CASE("pf degeneracy: all-zero weights reset to uniform and count") {
    PfGarchConfig cfg = small_pf_config(16);
    PfGarchFilter filter(cfg, 5);
    filter.init(Vec4::Zero());
    // a measurement whose squared residual overflows drives every
    // log-weight to -inf
    Vec4 absurd;
    absurd << 1e300, 1e300, 1e300, 1e300;
    const TrackEstimate est = filter.step(absurd);
    CHECK(filter.degeneracy_count() == 1);
    CHECK(est.kin.allFinite());
    for (const Particle& p : filter.ensemble().particles) {
        CHECK(p.weight == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    }
}

TEST_CASE("degenerate GARCH reproduces the plain PF bitwise") {
    PfPlainConfig plain;
    plain.n_s = 40;
    plain.sigma2 = 150.0;
    plain.trans = build_phi(0.05, 0.0);
    plain.meas.sigma2_pos = 1e4;
    plain.meas.sigma2_vel = 25.0;
    plain.prior_spread = PriorSpread{100.0, 5.0, 1.0};

    PfGarchConfig degen;
    degen.n_s = plain.n_s;
    degen.garch_x = GarchParams{plain.sigma2, 0.0, 0.0};
    degen.garch_y = GarchParams{plain.sigma2, 0.0, 0.0};
    degen.trans = plain.trans;
    degen.meas = plain.meas;
    degen.prior_spread = plain.prior_spread;
    degen.h0 = plain.sigma2;

    const std::uint64_t seed = 909;
    PlainPfFilter a(plain, seed);
    PfGarchFilter b(degen, seed);
    const TruthRecord truth = generate(scenario_1a(), 3);
    a.init(truth.samples.front().measurement);
    b.init(truth.samples.front().measurement);
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate ea = a.step(sample.measurement);
        const TrackEstimate eb = b.step(sample.measurement);
        CHECK(ea.kin == eb.kin);
        CHECK(ea.ess == eb.ess);
        CHECK(ea.resampled == eb.resampled);
    }
}

TEST_CASE("imm: identity transition matrix reduces to the pure CV filter") {
    ImmConfig cfg;
    cfg.p_ij = Mat2::Identity();
    cfg.init_probs << 1.0, 0.0;
    cfg.sigma_cv = 2.0;
    cfg.sigma_ca = 20.0;
    cfg.meas.sigma2_pos = 1e4;
    cfg.meas.sigma2_vel = 25.0;
    cfg.T = 0.05;

    ImmFilter imm(cfg);
    KalmanTracker kf(make_cv_model(cfg.T, cfg.sigma_cv), cfg.meas, cfg.p0_accel_var);

    const TruthRecord truth = generate(scenario_1a(), 17);
    imm.init(truth.samples.front().measurement);
    kf.init(truth.samples.front().measurement);
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate ei = imm.step(sample.measurement);
        const TrackEstimate ek = kf.step(sample.measurement);
        CHECK((ei.kin - ek.kin).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(ei.model_probs.has_value());
        CHECK((*ei.model_probs)(0) == 1.0);
    }
}

TEST_CASE("imm: model probabilities stay normalized") {
    ImmConfig cfg;
    cfg.meas.sigma2_pos = 1e4;
    cfg.meas.sigma2_vel = 25.0;
    cfg.T = 0.05;
    ImmFilter imm(cfg);
    const TruthRecord truth = generate(scenario_1a(), 23);
    imm.init(truth.samples.front().measurement);
    for (const TruthSample& sample : truth.samples) {
        const TrackEstimate est = imm.step(sample.measurement);
        REQUIRE(est.model_probs.has_value());
        CHECK(std::abs(est.model_probs->sum() - 1.0) < 1e-12);
        CHECK((*est.model_probs)(0) >= 0.0);
        CHECK((*est.model_probs)(1) >= 0.0);
    }
}

TEST_CASE("imm: CV model dominates on a constant-velocity truth") {
    ImmConfig cfg;
    cfg.sigma_cv = 0.05;
    cfg.sigma_ca = 5.0;
    cfg.meas.sigma2_pos = 100.0;
    cfg.meas.sigma2_vel = 1.0;
    cfg.T = 1.0;

    int dominated = 0;
    constexpr int kSeeds = 40;
    for (int s = 0; s < kSeeds; ++s) {
        const TruthRecord truth = generate(scenario_cv(), 1000 + s);
        ImmFilter imm(cfg);
        imm.init(truth.samples.front().measurement);
        TrackEstimate est;
        for (int k = 0; k < 20; ++k) {
            est = imm.step(truth.samples[static_cast<std::size_t>(k)].measurement);
        }
        if ((*est.model_probs)(0) > 0.5) ++dominated;
    }
    CHECK(dominated >= 38);  // >= 95% of seeded runs
}

TEST_CASE("imm config validation") {
    ImmConfig cfg;
    cfg.p_ij << 0.5, 0.4, 0.1, 0.9;  // first row sums to 0.9
    CHECK_THROWS_AS((ImmFilter{cfg}), std::invalid_argument);
}
