#pragma once

#include <array>

#include "garchtrack/kalman.hpp"
#include "garchtrack/statespace.hpp"
#include "garchtrack/tracking_filter.hpp"
#include "garchtrack/types.hpp"

namespace garchtrack {

/// Two-model interacting-multiple-model configuration: a constant-velocity
/// and a constant-acceleration hypothesis mixed through a Markov transition
/// matrix.
struct ImmConfig {
    Mat2 p_ij = (Mat2() << 0.99, 0.01, 0.01, 0.99).finished();  ///< rows sum to 1
    double sigma_cv = 2.0;   ///< CV process-noise std
    double sigma_ca = 20.0;  ///< CA process-noise std
    MeasurementModel meas;
    double T = 1.0;
    Vec2 init_probs{0.5, 0.5};
    double p0_accel_var = 100.0;  ///< initial acceleration variance

    void require_valid() const;
};

struct ImmState {
    std::array<KalmanState, 2> models;
    Vec2 probs;
};

class ImmFilter final : public TrackingFilter {
public:
    ImmFilter(ImmConfig cfg, std::uint64_t /*seed*/ = 0);

    void init(const Vec4& y0) override;

    /// Standard IMM cycle: mix with p_ij, per-model Kalman predict/update,
    /// likelihood-weighted model probabilities, probability-weighted output.
    TrackEstimate step(const Vec4& y) override;

    [[nodiscard]] const ImmState& state() const { return state_; }

private:
    ImmConfig cfg_;
    std::array<LinearModel, 2> models_;  // 0: CV, 1: CA
    ImmState state_;
};

}  // namespace garchtrack
