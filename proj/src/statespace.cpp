#include "garchtrack/statespace.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "garchtrack/singer.hpp"

namespace garchtrack {

namespace {
// interleaved component indices of the x axis and y axis blocks
constexpr int kAxisX[3] = {state_index::x, state_index::vx, state_index::ax};
constexpr int kAxisY[3] = {state_index::y, state_index::vy, state_index::ay};
}  // namespace

TransitionModel build_phi(double T, double mu) {
    if (!(T > 0.0) || mu < 0.0) {
        throw std::invalid_argument("build_phi: requires T > 0, mu >= 0");
    }
    const Mat3 block = singer_axis_phi(T, mu);
    TransitionModel model;
    model.T = T;
    model.mu = mu;
    model.Phi.setZero();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            model.Phi(kAxisX[r], kAxisX[c]) = block(r, c);
            model.Phi(kAxisY[r], kAxisY[c]) = block(r, c);
        }
    }
    model.G.setZero();
    model.G(state_index::ax, 0) = 1.0;
    model.G(state_index::ay, 1) = 1.0;
    return model;
}

ProcessNoiseModel make_process_noise_model(const TransitionModel& trans,
                                           CovMethod method, int quad_nodes) {
    ProcessNoiseModel model;
    model.trans = trans;
    model.method = method;
    model.quad_nodes = quad_nodes;
    model.axis_cov_unit =
        (method == CovMethod::closed_form)
            ? singer_axis_noise_cov(trans.T, trans.mu)
            : singer_axis_noise_cov_quadrature(trans.T, trans.mu, quad_nodes);

    Eigen::LLT<Mat3> llt(model.axis_cov_unit);
    if (llt.info() == Eigen::Success) {
        model.axis_sqrt = llt.matrixL();
        model.psd_repaired = false;
        return model;
    }
    // PSD repair: clamp negative eigenvalues at zero, never silently
    Eigen::SelfAdjointEigenSolver<Mat3> es(model.axis_cov_unit);
    if (es.info() != Eigen::Success || !es.eigenvalues().allFinite()) {
        throw std::runtime_error(
            "make_process_noise_model: noise covariance factorization failed");
    }
    const Eigen::Vector3d clamped = es.eigenvalues().cwiseMax(0.0);
    model.axis_sqrt =
        es.eigenvectors() * clamped.cwiseSqrt().asDiagonal();
    model.psd_repaired = true;
    std::cerr << "garchtrack: process-noise covariance repaired by eigenvalue "
                 "clamping (T=" << trans.T << ", mu=" << trans.mu << ")\n";
    return model;
}

Mat6 process_noise_cov(const ProcessNoiseModel& model, double hx, double hy) {
    if (hx < 0.0 || hy < 0.0 || !std::isfinite(hx) || !std::isfinite(hy)) {
        throw std::invalid_argument("process_noise_cov: requires hx, hy >= 0");
    }
    Mat6 Q = Mat6::Zero();
    const Mat3& M = model.axis_cov_unit;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            Q(kAxisX[r], kAxisX[c]) = hx * M(r, c);
            Q(kAxisY[r], kAxisY[c]) = hy * M(r, c);
        }
    }
    return Q;
}

NoiseDraw sample_process_noise(const ProcessNoiseModel& model, double hx,
                               double hy, Rng& rng) {
    if (hx < 0.0 || hy < 0.0 || !std::isfinite(hx) || !std::isfinite(hy)) {
        throw std::invalid_argument("sample_process_noise: requires hx, hy >= 0");
    }
    Eigen::Vector3d xi_x;
    Eigen::Vector3d xi_y;
    for (int i = 0; i < 3; ++i) xi_x(i) = rng.normal();
    for (int i = 0; i < 3; ++i) xi_y(i) = rng.normal();
    const Eigen::Vector3d ux = std::sqrt(hx) * (model.axis_sqrt * xi_x);
    const Eigen::Vector3d uy = std::sqrt(hy) * (model.axis_sqrt * xi_y);

    NoiseDraw draw;
    draw.noise.setZero();
    for (int r = 0; r < 3; ++r) {
        draw.noise(kAxisX[r]) = ux(r);
        draw.noise(kAxisY[r]) = uy(r);
    }
    draw.z_accel << ux(2), uy(2);
    return draw;
}

void MeasurementModel::require_valid() const {
    if (!(sigma2_pos > 0.0) || !(sigma2_vel > 0.0)) {
        throw std::invalid_argument(
            "MeasurementModel: requires positive channel variances");
    }
}

Eigen::Matrix<double, 4, 6> MeasurementModel::H() const {
    Eigen::Matrix<double, 4, 6> h = Eigen::Matrix<double, 4, 6>::Zero();
    h(0, state_index::x) = 1.0;
    h(1, state_index::y) = 1.0;
    h(2, state_index::vx) = 1.0;
    h(3, state_index::vy) = 1.0;
    return h;
}

Vec4 MeasurementModel::r_diag() const {
    return Vec4(sigma2_pos, sigma2_pos, sigma2_vel, sigma2_vel);
}

Vec4 measure(const MeasurementModel& meas, const Vec6& state, Rng& rng) {
    meas.require_valid();
    Vec4 y = meas.H() * state;
    const Vec4 r = meas.r_diag();
    for (int i = 0; i < 4; ++i) y(i) += std::sqrt(r(i)) * rng.normal();
    return y;
}

double log_gaussian_likelihood(const Vec4& y, const Vec4& mean, const Vec4& r_diag) {
    constexpr double kLog2Pi = 1.8378770664093455;
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double d = y(i) - mean(i);
        acc += -0.5 * (d * d / r_diag(i) + std::log(r_diag(i)) + kLog2Pi);
    }
    return acc;
}

}  // namespace garchtrack
