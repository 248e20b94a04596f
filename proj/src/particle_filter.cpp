#include "garchtrack/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace garchtrack {

double effective_sample_size(const Ensemble& ens) {
    double sum_sq = 0.0;
    for (const Particle& p : ens.particles) sum_sq += p.weight * p.weight;
    if (sum_sq <= 0.0) return 0.0;
    return 1.0 / sum_sq;
}

void resample(Ensemble& ens, Resampler scheme, Rng& rng) {
    const int n = ens.size();
    if (n < 2) throw std::invalid_argument("resample: requires n_s >= 2");

    std::vector<double> cdf(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += ens.particles[static_cast<std::size_t>(i)].weight;
        cdf[static_cast<std::size_t>(i)] = acc;
    }
    cdf.back() = 1.0;  // guard against rounding in the last slot

    std::vector<Particle> offspring;
    offspring.reserve(static_cast<std::size_t>(n));
    const double uniform_w = 1.0 / static_cast<double>(n);

    if (scheme == Resampler::multinomial) {
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            auto idx = static_cast<std::size_t>(it - cdf.begin());
            if (idx >= cdf.size()) idx = cdf.size() - 1;
            offspring.push_back(ens.particles[idx]);
            offspring.back().weight = uniform_w;
        }
    } else {
        const double u0 = rng.uniform() * uniform_w;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            const double u = u0 + uniform_w * static_cast<double>(i);
            while (idx + 1 < cdf.size() && cdf[idx] <= u) ++idx;
            offspring.push_back(ens.particles[idx]);
            offspring.back().weight = uniform_w;
        }
    }
    ens.particles = std::move(offspring);
}

void PfGarchConfig::require_valid() const {
    if (n_s < 2) throw std::invalid_argument("PfGarchConfig: requires n_s >= 2");
    garch_x.require_valid();
    garch_y.require_valid();
    meas.require_valid();
    if (!(h0 > 0.0)) throw std::invalid_argument("PfGarchConfig: requires h0 > 0");
    if (!(ess_fraction > 0.0) || ess_fraction > 1.0) {
        throw std::invalid_argument("PfGarchConfig: ess_fraction must be in (0, 1]");
    }
}

PfGarchFilter::PfGarchFilter(PfGarchConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      noise_(make_process_noise_model(cfg_.trans)),
      rng_(seed) {
    cfg_.require_valid();
}

void PfGarchFilter::init(const Vec4& y0) {
    if (!y0.allFinite()) throw std::invalid_argument("PfGarchFilter: non-finite y0");
    ensemble_.particles.assign(static_cast<std::size_t>(cfg_.n_s), Particle{});
    const double w = 1.0 / static_cast<double>(cfg_.n_s);
    for (Particle& p : ensemble_.particles) {
        p.kin(state_index::x) = y0(0) + cfg_.prior_spread.pos * rng_.normal();
        p.kin(state_index::y) = y0(1) + cfg_.prior_spread.pos * rng_.normal();
        p.kin(state_index::vx) = y0(2) + cfg_.prior_spread.vel * rng_.normal();
        p.kin(state_index::vy) = y0(3) + cfg_.prior_spread.vel * rng_.normal();
        p.kin(state_index::ax) = cfg_.prior_spread.acc * rng_.normal();
        p.kin(state_index::ay) = cfg_.prior_spread.acc * rng_.normal();
        p.vol = VolatilityPair{cfg_.h0, cfg_.h0};
        p.z_prev.setZero();
        p.weight = w;
    }
    degeneracy_count_ = 0;
}

TrackEstimate PfGarchFilter::step(const Vec4& y) {
    if (ensemble_.particles.empty()) {
        throw std::logic_error("PfGarchFilter: step before init");
    }
    const Vec4 r = cfg_.meas.r_diag();
    const auto n = ensemble_.particles.size();

    std::vector<double> log_w(n);
    double max_log_w = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        Particle& p = ensemble_.particles[i];
        p.vol.hx = garch_step(cfg_.garch_x, p.vol.hx, p.z_prev(0));
        p.vol.hy = garch_step(cfg_.garch_y, p.vol.hy, p.z_prev(1));
        const NoiseDraw draw = sample_process_noise(noise_, p.vol.hx, p.vol.hy, rng_);
        p.kin = propagate(cfg_.trans, p.kin, draw.noise);
        p.z_prev = draw.z_accel;

        const double lw = (p.weight > 0.0 ? std::log(p.weight)
                                          : -std::numeric_limits<double>::infinity()) +
                          log_gaussian_likelihood(y, cfg_.meas.H() * p.kin, r);
        log_w[i] = lw;
        max_log_w = std::max(max_log_w, lw);
    }

    bool degenerate = !std::isfinite(max_log_w);
    if (!degenerate) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::exp(log_w[i] - max_log_w);
            ensemble_.particles[i].weight = w;
            sum += w;
        }
        if (sum > 0.0) {
            for (Particle& p : ensemble_.particles) p.weight /= sum;
        } else {
            degenerate = true;
        }
    }
    if (degenerate) {
        ++degeneracy_count_;
        const double w = 1.0 / static_cast<double>(n);
        for (Particle& p : ensemble_.particles) p.weight = w;
    }

    // estimate from the weighted ensemble, before any resampling
    TrackEstimate est;
    est.kin.setZero();
    Vec2 vol = Vec2::Zero();
    for (const Particle& p : ensemble_.particles) {
        est.kin += p.weight * p.kin;
        vol(0) += p.weight * p.vol.hx;
        vol(1) += p.weight * p.vol.hy;
    }
    est.vol = vol;

    est.ess = effective_sample_size(ensemble_);
    if (est.ess < cfg_.ess_fraction * static_cast<double>(cfg_.n_s)) {
        resample(ensemble_, cfg_.resampler, rng_);
        est.resampled = true;
    }
    return est;
}

namespace {
PfGarchConfig degenerate_garch_config(const PfPlainConfig& cfg) {
    PfGarchConfig out;
    out.n_s = cfg.n_s;
    out.garch_x = GarchParams{cfg.sigma2, 0.0, 0.0};
    out.garch_y = GarchParams{cfg.sigma2, 0.0, 0.0};
    out.trans = cfg.trans;
    out.meas = cfg.meas;
    out.prior_spread = cfg.prior_spread;
    out.h0 = cfg.sigma2;
    out.resampler = cfg.resampler;
    out.ess_fraction = cfg.ess_fraction;
    return out;
}
}  // namespace

PlainPfFilter::PlainPfFilter(const PfPlainConfig& cfg, std::uint64_t seed)
    : inner_(degenerate_garch_config(cfg), seed) {
    if (!(cfg.sigma2 > 0.0)) {
        throw std::invalid_argument("PfPlainConfig: requires sigma2 > 0");
    }
}

void PlainPfFilter::init(const Vec4& y0) { inner_.init(y0); }

TrackEstimate PlainPfFilter::step(const Vec4& y) { return inner_.step(y); }

}  // namespace garchtrack
