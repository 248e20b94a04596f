#include "garchtrack/imm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace garchtrack {

void ImmConfig::require_valid() const {
    for (int r = 0; r < 2; ++r) {
        if (p_ij(r, 0) < 0.0 || p_ij(r, 1) < 0.0 ||
            std::abs(p_ij.row(r).sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("ImmConfig: p_ij rows must be probabilities");
        }
    }
    if (init_probs(0) < 0.0 || init_probs(1) < 0.0 ||
        std::abs(init_probs.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("ImmConfig: init_probs must sum to 1");
    }
    if (!(sigma_cv >= 0.0) || !(sigma_ca >= 0.0) || !(T > 0.0)) {
        throw std::invalid_argument("ImmConfig: bad model parameters");
    }
    meas.require_valid();
}

ImmFilter::ImmFilter(ImmConfig cfg, std::uint64_t) : cfg_(std::move(cfg)) {
    cfg_.require_valid();
    models_[0] = make_cv_model(cfg_.T, cfg_.sigma_cv);
    models_[1] = make_ca_model(cfg_.T, cfg_.sigma_ca);
}

void ImmFilter::init(const Vec4& y0) {
    KalmanState init_state;
    init_state.x.setZero();
    init_state.x(state_index::x) = y0(0);
    init_state.x(state_index::y) = y0(1);
    init_state.x(state_index::vx) = y0(2);
    init_state.x(state_index::vy) = y0(3);
    init_state.P.setZero();
    init_state.P(state_index::x, state_index::x) = cfg_.meas.sigma2_pos;
    init_state.P(state_index::y, state_index::y) = cfg_.meas.sigma2_pos;
    init_state.P(state_index::vx, state_index::vx) = cfg_.meas.sigma2_vel;
    init_state.P(state_index::vy, state_index::vy) = cfg_.meas.sigma2_vel;
    init_state.P(state_index::ax, state_index::ax) = cfg_.p0_accel_var;
    init_state.P(state_index::ay, state_index::ay) = cfg_.p0_accel_var;
    state_.models = {init_state, init_state};
    state_.probs = cfg_.init_probs;
}

TrackEstimate ImmFilter::step(const Vec4& y) {
    // mixing: c_j = sum_i p_ij mu_i; mixed moments per target model
    Vec2 c;
    for (int j = 0; j < 2; ++j) {
        c(j) = cfg_.p_ij(0, j) * state_.probs(0) + cfg_.p_ij(1, j) * state_.probs(1);
    }
    std::array<KalmanState, 2> mixed = state_.models;
    for (int j = 0; j < 2; ++j) {
        if (c(j) <= 0.0) continue;  // dead model: keep its own state
        Vec6 x0 = Vec6::Zero();
        for (int i = 0; i < 2; ++i) {
            const double mix = cfg_.p_ij(i, j) * state_.probs(i) / c(j);
            x0 += mix * state_.models[static_cast<std::size_t>(i)].x;
        }
        Mat6 p0 = Mat6::Zero();
        for (int i = 0; i < 2; ++i) {
            const double mix = cfg_.p_ij(i, j) * state_.probs(i) / c(j);
            const auto& mi = state_.models[static_cast<std::size_t>(i)];
            const Vec6 d = mi.x - x0;
            p0 += mix * (mi.P + d * d.transpose());
        }
        mixed[static_cast<std::size_t>(j)] = KalmanState{x0, p0};
    }

    // per-model filtering with log-domain probability update
    Vec2 log_post;
    for (int j = 0; j < 2; ++j) {
        const KalmanState predicted =
            kf_predict(models_[static_cast<std::size_t>(j)],
                       mixed[static_cast<std::size_t>(j)]);
        const KfUpdateResult upd = kf_update(predicted, cfg_.meas, y);
        state_.models[static_cast<std::size_t>(j)] = upd.state;
        log_post(j) = c(j) > 0.0 ? std::log(c(j)) + upd.log_likelihood
                                 : -std::numeric_limits<double>::infinity();
    }
    const double m = log_post.maxCoeff();
    Vec2 post;
    for (int j = 0; j < 2; ++j) {
        post(j) = std::isfinite(log_post(j)) ? std::exp(log_post(j) - m) : 0.0;
    }
    const double norm = post.sum();
    if (!(norm > 0.0)) {
        throw std::runtime_error("ImmFilter: all model likelihoods vanished");
    }
    state_.probs = post / norm;

    TrackEstimate est;
    est.kin = state_.probs(0) * state_.models[0].x + state_.probs(1) * state_.models[1].x;
    est.model_probs = state_.probs;
    return est;
}

}  // namespace garchtrack
