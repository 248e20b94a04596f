#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace garchtrack {

/**
 * GARCH(1,1) coefficients for the conditional-variance recursion
 *
 *   h(k) = alpha0 + alpha1 * h(k-1) + beta1 * z^2(k-1),
 *
 * where z(k) = sqrt(h(k)) * eps(k) is the innovation and eps(k) is a
 * zero-mean unit-variance iid sequence.
 */
struct GarchParams {
    double alpha0;  ///< variance offset, > 0
    double alpha1;  ///< weight on the previous conditional variance, >= 0
    double beta1;   ///< weight on the previous squared innovation, >= 0

    /// Throws std::invalid_argument unless alpha0 > 0, alpha1 >= 0,
    /// beta1 >= 0 and all fields are finite.
    void require_valid() const;

    /// Wide-sense stationarity: alpha1 + beta1 < 1. The boundary
    /// alpha1 + beta1 == 1 has no finite unconditional variance and is
    /// treated as nonstationary.
    [[nodiscard]] bool stationary() const { return alpha1 + beta1 < 1.0; }

    /// Long-run mean of h, alpha0 / (1 - alpha1 - beta1).
    /// Throws std::domain_error when not stationary.
    [[nodiscard]] double unconditional_variance() const;
};

/// Continuous-time mean-reverting volatility dynamics
/// dh = theta * (omega - h) dt + xi * h dB.
struct SdeVolParams {
    double theta;      ///< mean-reversion rate (1/s), > 0
    double omega;      ///< long-term mean volatility, > 0
    double xi;         ///< volatility of volatility, >= 0
    double rho = 0.0;  ///< correlation of dB with the state noise dW, in [-1, 1].
                       ///< Accepted for completeness; the discrete recursion
                       ///< couples the two noises through z(k-1) instead.

    void require_valid() const;
};

/// One step of the conditional-variance recursion. Requires h_prev > 0 and
/// finite inputs (std::domain_error otherwise). The result is > 0 whenever
/// the parameters are valid.
double garch_step(const GarchParams& params, double h_prev, double z_prev);

/// Margin of the fourth-moment condition,
/// 1 - alpha1^2 - 2*alpha1*beta1 - 3*beta1^2. The stationary fourth moment
/// of z exists iff this is > 0.
double fourth_moment_margin(const GarchParams& params);

/// Excess kurtosis of the stationary innovation z,
/// 6*beta1^2 / (1 - alpha1^2 - 2*alpha1*beta1 - 3*beta1^2).
/// Zero when beta1 == 0 (Gaussian case). Throws std::domain_error when the
/// fourth moment does not exist.
double excess_kurtosis(const GarchParams& params);

/// Simulated AR(r)-GARCH(1,1) path:
///   a(k) = sum_n b(n) a(k-n) + z(k),  z(k) = sqrt(h(k)) eps(k).
struct ArGarchSeries {
    std::vector<double> a;  ///< observable series
    std::vector<double> h;  ///< conditional variances, all > 0
    std::vector<double> z;  ///< innovations
    std::vector<double> ar_coeffs;
    std::uint64_t seed = 0;
};

/// Simulates n samples with standard-normal eps(k). Deterministic per seed.
/// h(0) starts at the unconditional variance when stationary, else alpha0.
/// Nonstationary params are rejected unless allow_nonstationary is set.
ArGarchSeries simulate_ar_garch(const GarchParams& params,
                                std::span<const double> ar_coeffs,
                                std::size_t n, std::uint64_t seed,
                                bool allow_nonstationary = false);

/// Maps the volatility SDE onto discrete GARCH(1,1) coefficients over a grid
/// of M equal segments of [0, T]:
///   alpha0 = theta*omega*(T/M), alpha1 = 1 - theta*(T/M),
///   beta1 = xi^2*(T/M).
/// Requires T > 0, M >= 1 and theta*(T/M) <= 1; the result must satisfy the
/// GarchParams invariants.
GarchParams sde_to_garch(const SdeVolParams& sde, double T, int segments);

/**
 * Monte Carlo check that a random AR coefficient produces conditional
 * heteroscedasticity. Simulates
 *
 *   a(k) = zeta(k) a(k-1) + w(k),  zeta ~ N(zeta_mean, sigma_zeta^2),
 *   w ~ N(0, sigma_m^2),
 *
 * bins samples by a^2(k-1) and regresses the within-bin variance of the
 * prediction residual on the within-bin mean of a^2(k-1). The slope
 * estimates sigma_zeta^2 and the intercept estimates sigma_m^2.
 */
struct HeteroscedasticityExperiment {
    double sigma_zeta;       ///< std of the stochastic AR coefficient, >= 0
    double sigma_m;          ///< std of the additive noise, > 0
    std::size_t n_samples = 1'000'000;  ///< >= 1e4
    double zeta_mean = 0.8;  ///< mean of zeta; keep zeta_mean^2 + sigma_zeta^2 < 1
    /// Bin edges over a^2(k-1); when empty, n_auto_bins equal-count
    /// (quantile) bins are used.
    std::vector<double> conditioning_bins;
    int n_auto_bins = 20;

    void require_valid() const;
};

struct RegressionLine {
    double slope;
    double intercept;
};

/// Bins with fewer than 30 samples are dropped; fewer than 3 usable bins is
/// a std::runtime_error.
RegressionLine heteroscedasticity_oracle(const HeteroscedasticityExperiment& exp,
                                         std::uint64_t seed);

}  // namespace garchtrack
