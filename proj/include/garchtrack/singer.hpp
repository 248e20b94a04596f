#pragma once

#include <cmath>

#include <Eigen/Dense>

// Scalar kernels of the exponentially-correlated-acceleration motion model.
// Per axis the continuous dynamics are
//
//   d[p v a]' = [[0 1 0],[0 0 1],[0 0 -mu]] [p v a]' dt + [0 0 1]' sqrt(h) dW,
//
// whose transition matrix exp(F*tau) is
//
//   [[1, tau, phi1(tau,mu)], [0, 1, phi2(tau,mu)], [0, 0, exp(-mu*tau)]]
//
// with phi1 = (e^{-mu tau} + mu tau - 1)/mu^2 and phi2 = (1 - e^{-mu tau})/mu.
// mu == 0 is the constant-acceleration limit, handled analytically.

namespace garchtrack {

namespace detail {
// series switch point for x = mu*tau; below it the closed forms cancel
inline constexpr double kSingerSeriesCutoff = 0.5;
}  // namespace detail

/// phi1(tau, mu): position response to a unit initial acceleration.
/// Continuous at mu == 0 where it equals tau^2/2.
template <typename Scalar>
Scalar singer_phi1(Scalar tau, Scalar mu) {
    const Scalar x = mu * tau;
    if (x < Scalar(detail::kSingerSeriesCutoff)) {
        // (e^{-x} + x - 1)/x^2 = sum_{m>=0} (-x)^m / (m+2)!
        Scalar term = Scalar(0.5);
        Scalar acc = term;
        for (int m = 1; m <= 14; ++m) {
            term *= -x / Scalar(m + 2);
            acc += term;
        }
        return tau * tau * acc;
    }
    return (std::exp(-x) + x - Scalar(1)) / (mu * mu);
}

/// phi2(tau, mu): velocity response to a unit initial acceleration.
/// Continuous at mu == 0 where it equals tau.
template <typename Scalar>
Scalar singer_phi2(Scalar tau, Scalar mu) {
    const Scalar x = mu * tau;
    if (x < Scalar(detail::kSingerSeriesCutoff)) {
        // (1 - e^{-x})/x = sum_{m>=0} (-x)^m / (m+1)!
        Scalar term = Scalar(1);
        Scalar acc = term;
        for (int m = 1; m <= 14; ++m) {
            term *= -x / Scalar(m + 1);
            acc += term;
        }
        return tau * acc;
    }
    return -std::expm1(-x) / mu;
}

/// Per-axis 3x3 transition block exp(F*tau) on (position, velocity,
/// acceleration).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> singer_axis_phi(Scalar tau, Scalar mu) {
    Eigen::Matrix<Scalar, 3, 3> phi;
    phi << Scalar(1), tau, singer_phi1(tau, mu),
           Scalar(0), Scalar(1), singer_phi2(tau, mu),
           Scalar(0), Scalar(0), std::exp(-mu * tau);
    return phi;
}

/// Per-axis unit-volatility process-noise covariance
///
///   M(T, mu) = integral_0^T gamma(u) gamma(u)' du,
///   gamma(u) = [phi1(u,mu), phi2(u,mu), exp(-mu*u)]',
///
/// evaluated from the symbolically integrated closed forms with a series
/// branch for small mu*T. The step noise covariance per axis is h * M.
Eigen::Matrix3d singer_axis_noise_cov(double T, double mu);

/// Same integral evaluated by Gauss-Legendre quadrature with gamma(u)
/// obtained from the matrix exponential of F*u. Independent of the closed
/// forms; serves as their cross-check. Requires nodes >= 2.
Eigen::Matrix3d singer_axis_noise_cov_quadrature(double T, double mu, int nodes);

}  // namespace garchtrack
