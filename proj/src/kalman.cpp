#include "garchtrack/kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace garchtrack {

KalmanState kf_predict(const LinearModel& model, const KalmanState& state) {
    KalmanState out;
    out.x = model.Phi * state.x;
    out.P = model.Phi * state.P * model.Phi.transpose() + model.Q;
    return out;
}

KfUpdateResult kf_update(const KalmanState& state, const MeasurementModel& meas,
                         const Vec4& y) {
    const Eigen::Matrix<double, 4, 6> H = meas.H();
    const Mat4 R = meas.r_diag().asDiagonal();
    const Vec4 innov = y - H * state.x;
    const Mat4 S = H * state.P * H.transpose() + R;

    Eigen::LLT<Mat4> llt(S);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("kf_update: singular innovation covariance");
    }
    const Eigen::Matrix<double, 6, 4> K =
        state.P * H.transpose() * llt.solve(Mat4::Identity());

    KfUpdateResult result;
    result.state.x = state.x + K * innov;
    const Mat6 IKH = Mat6::Identity() - K * H;
    result.state.P = IKH * state.P * IKH.transpose() + K * R * K.transpose();

    // log N(innov; 0, S) via the Cholesky factor
    const Mat4 L = llt.matrixL();
    double log_det = 0.0;
    for (int i = 0; i < 4; ++i) log_det += 2.0 * std::log(L(i, i));
    const Vec4 whitened = L.triangularView<Eigen::Lower>().solve(innov);
    constexpr double kLog2Pi = 1.8378770664093455;
    result.log_likelihood =
        -0.5 * (whitened.squaredNorm() + log_det + 4.0 * kLog2Pi);
    return result;
}

LinearModel make_cv_model(double T, double sigma) {
    LinearModel model;
    model.Phi.setZero();
    const int X[3] = {state_index::x, state_index::vx, state_index::ax};
    const int Y[3] = {state_index::y, state_index::vy, state_index::ay};
    for (const auto* axis : {X, Y}) {
        model.Phi(axis[0], axis[0]) = 1.0;
        model.Phi(axis[0], axis[1]) = T;
        model.Phi(axis[1], axis[1]) = 1.0;
        // acceleration row stays zero
    }
    Eigen::Vector3d gain(0.5 * T * T, T, 0.0);
    const Mat3 q = sigma * sigma * gain * gain.transpose();
    model.Q.setZero();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            model.Q(X[r], X[c]) = q(r, c);
            model.Q(Y[r], Y[c]) = q(r, c);
        }
    }
    return model;
}

LinearModel make_ca_model(double T, double sigma) {
    LinearModel model;
    model.Phi.setZero();
    const int X[3] = {state_index::x, state_index::vx, state_index::ax};
    const int Y[3] = {state_index::y, state_index::vy, state_index::ay};
    for (const auto* axis : {X, Y}) {
        model.Phi(axis[0], axis[0]) = 1.0;
        model.Phi(axis[0], axis[1]) = T;
        model.Phi(axis[0], axis[2]) = 0.5 * T * T;
        model.Phi(axis[1], axis[1]) = 1.0;
        model.Phi(axis[1], axis[2]) = T;
        model.Phi(axis[2], axis[2]) = 1.0;
    }
    Eigen::Vector3d gain(0.5 * T * T, T, 1.0);
    const Mat3 q = sigma * sigma * gain * gain.transpose();
    model.Q.setZero();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            model.Q(X[r], X[c]) = q(r, c);
            model.Q(Y[r], Y[c]) = q(r, c);
        }
    }
    return model;
}

KalmanTracker::KalmanTracker(LinearModel model, MeasurementModel meas,
                             double p0_accel_var)
    : model_(std::move(model)), meas_(std::move(meas)),
      p0_accel_var_(p0_accel_var) {
    meas_.require_valid();
}

void KalmanTracker::init(const Vec4& y0) {
    state_.x.setZero();
    state_.x(state_index::x) = y0(0);
    state_.x(state_index::y) = y0(1);
    state_.x(state_index::vx) = y0(2);
    state_.x(state_index::vy) = y0(3);
    state_.P.setZero();
    state_.P(state_index::x, state_index::x) = meas_.sigma2_pos;
    state_.P(state_index::y, state_index::y) = meas_.sigma2_pos;
    state_.P(state_index::vx, state_index::vx) = meas_.sigma2_vel;
    state_.P(state_index::vy, state_index::vy) = meas_.sigma2_vel;
    state_.P(state_index::ax, state_index::ax) = p0_accel_var_;
    state_.P(state_index::ay, state_index::ay) = p0_accel_var_;
}

TrackEstimate KalmanTracker::step(const Vec4& y) {
    state_ = kf_predict(model_, state_);
    state_ = kf_update(state_, meas_, y).state;
    TrackEstimate est;
    est.kin = state_.x;
    return est;
}

}  // namespace garchtrack
