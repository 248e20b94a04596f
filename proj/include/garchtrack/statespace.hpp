#pragma once

#include "garchtrack/rng.hpp"
#include "garchtrack/types.hpp"

namespace garchtrack {

/// Discrete-time transition of the interleaved planar state
/// [x, y, vx, vy, ax, ay] over one sample interval.
struct TransitionModel {
    double T;   ///< sampling interval (s), > 0
    double mu;  ///< reciprocal acceleration time constant (1/s), >= 0
    Mat6 Phi;   ///< 6x6 state transition matrix
    Eigen::Matrix<double, 6, 2> G;  ///< noise injection into the acceleration rows
};

/// Builds Phi(T, mu) from the per-axis transition block. mu == 0 yields the
/// constant-acceleration limit without any division by mu.
TransitionModel build_phi(double T, double mu);

enum class CovMethod { closed_form, quadrature };

/// Step process-noise covariance machinery. The per-axis covariance is
/// h * M(T, mu) with M the unit-volatility integral; the 6x6 Q interleaves
/// the x and y axis blocks scaled by hx and hy.
struct ProcessNoiseModel {
    TransitionModel trans;
    CovMethod method = CovMethod::closed_form;
    int quad_nodes = 64;
    Mat3 axis_cov_unit;   ///< M(T, mu)
    Mat3 axis_sqrt;       ///< lower-triangular factor, axis_sqrt * axis_sqrt' = M
    bool psd_repaired = false;  ///< factor obtained by eigenvalue clamping
};

ProcessNoiseModel make_process_noise_model(const TransitionModel& trans,
                                           CovMethod method = CovMethod::closed_form,
                                           int quad_nodes = 64);

/// Q(hx, hy): symmetric PSD, linear in each axis volatility. hx, hy >= 0
/// (zero is the boundary case with a zero block).
Mat6 process_noise_cov(const ProcessNoiseModel& model, double hx, double hy);
inline Mat6 process_noise_cov(const ProcessNoiseModel& model, const VolatilityPair& vol) {
    return process_noise_cov(model, vol.hx, vol.hy);
}

struct NoiseDraw {
    Vec6 noise;    ///< one step disturbance, ~ N(0, Q(hx, hy))
    Vec2 z_accel;  ///< its acceleration components (per-axis innovations)
};

/// Draws one step disturbance. Consumes exactly six normal variates
/// (x axis first). Successive draws are independent.
NoiseDraw sample_process_noise(const ProcessNoiseModel& model, double hx,
                               double hy, Rng& rng);

/// Position/velocity measurement with independent per-channel noise:
/// y = [x, y, vx, vy] + eps, eps ~ N(0, diag(R)).
struct MeasurementModel {
    double sigma2_pos = 1e4;  ///< position variance (m^2)
    double sigma2_vel = 25.0; ///< velocity variance ((m/s)^2)

    void require_valid() const;
    [[nodiscard]] Eigen::Matrix<double, 4, 6> H() const;
    [[nodiscard]] Vec4 r_diag() const;
};

/// X(k+1) = Phi * X(k) + U(k). The caller supplies the drawn noise.
inline Vec6 propagate(const TransitionModel& trans, const Vec6& state,
                      const Vec6& noise) {
    return trans.Phi * state + noise;
}

/// y = H * state + eps, eps ~ N(0, R). Consumes four normal variates.
Vec4 measure(const MeasurementModel& meas, const Vec6& state, Rng& rng);

/// Log density of N(mean, diag(r_diag)) at y.
double log_gaussian_likelihood(const Vec4& y, const Vec4& mean, const Vec4& r_diag);

}  // namespace garchtrack
