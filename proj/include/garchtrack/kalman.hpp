#pragma once

#include "garchtrack/statespace.hpp"
#include "garchtrack/tracking_filter.hpp"
#include "garchtrack/types.hpp"

namespace garchtrack {

/// One linear-Gaussian motion hypothesis.
struct LinearModel {
    Mat6 Phi;
    Mat6 Q;
};

struct KalmanState {
    Vec6 x = Vec6::Zero();
    Mat6 P = Mat6::Identity();
};

/// Time update: x <- Phi x, P <- Phi P Phi' + Q.
KalmanState kf_predict(const LinearModel& model, const KalmanState& state);

struct KfUpdateResult {
    KalmanState state;
    double log_likelihood;  ///< log N(y; H x, H P H' + R)
};

/// Measurement update in Joseph form. Throws std::runtime_error when the
/// innovation covariance is not positive definite.
KfUpdateResult kf_update(const KalmanState& state, const MeasurementModel& meas,
                         const Vec4& y);

/// Constant-velocity hypothesis on the 6-dim state: acceleration rows zeroed,
/// white acceleration-level disturbance of std sigma entering position and
/// velocity.
LinearModel make_cv_model(double T, double sigma);

/// Constant-acceleration hypothesis: mu -> 0 transition with a white
/// acceleration disturbance of std sigma.
LinearModel make_ca_model(double T, double sigma);

/// Plain Kalman tracker over one fixed linear model.
class KalmanTracker final : public TrackingFilter {
public:
    KalmanTracker(LinearModel model, MeasurementModel meas, double p0_accel_var);

    void init(const Vec4& y0) override;
    TrackEstimate step(const Vec4& y) override;

    [[nodiscard]] const KalmanState& state() const { return state_; }

private:
    LinearModel model_;
    MeasurementModel meas_;
    double p0_accel_var_;
    KalmanState state_;
};

}  // namespace garchtrack
