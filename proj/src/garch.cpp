#include "garchtrack/garch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "garchtrack/rng.hpp"

namespace garchtrack {

void GarchParams::require_valid() const {
    if (!(std::isfinite(alpha0) && std::isfinite(alpha1) && std::isfinite(beta1))) {
        throw std::invalid_argument("GarchParams: non-finite coefficient");
    }
    if (!(alpha0 > 0.0)) {
        throw std::invalid_argument("GarchParams: alpha0 must be > 0");
    }
    if (alpha1 < 0.0 || beta1 < 0.0) {
        throw std::invalid_argument("GarchParams: alpha1 and beta1 must be >= 0");
    }
}

double GarchParams::unconditional_variance() const {
    if (!stationary()) {
        throw std::domain_error(
            "GarchParams: unconditional variance requires alpha1 + beta1 < 1");
    }
    return alpha0 / (1.0 - alpha1 - beta1);
}

void SdeVolParams::require_valid() const {
    if (!(std::isfinite(theta) && std::isfinite(omega) && std::isfinite(xi) &&
          std::isfinite(rho))) {
        throw std::invalid_argument("SdeVolParams: non-finite field");
    }
    if (!(theta > 0.0) || !(omega > 0.0) || xi < 0.0) {
        throw std::invalid_argument(
            "SdeVolParams: requires theta > 0, omega > 0, xi >= 0");
    }
    if (rho < -1.0 || rho > 1.0) {
        throw std::invalid_argument("SdeVolParams: rho must be in [-1, 1]");
    }
}

double garch_step(const GarchParams& params, double h_prev, double z_prev) {
    params.require_valid();
    if (!std::isfinite(h_prev) || !std::isfinite(z_prev)) {
        throw std::domain_error("garch_step: non-finite input");
    }
    if (!(h_prev > 0.0)) {
        throw std::domain_error("garch_step: h_prev must be > 0");
    }
    return params.alpha0 + params.alpha1 * h_prev + params.beta1 * z_prev * z_prev;
}

double fourth_moment_margin(const GarchParams& params) {
    const double a = params.beta1;   // weight on z^2
    const double b = params.alpha1;  // weight on h
    return 1.0 - b * b - 2.0 * a * b - 3.0 * a * a;
}

double excess_kurtosis(const GarchParams& params) {
    params.require_valid();
    const double denom = fourth_moment_margin(params);
    if (!(denom > 0.0)) {
        throw std::domain_error("excess_kurtosis: fourth moment does not exist");
    }
    return 6.0 * params.beta1 * params.beta1 / denom;
}

ArGarchSeries simulate_ar_garch(const GarchParams& params,
                                std::span<const double> ar_coeffs,
                                std::size_t n, std::uint64_t seed,
                                bool allow_nonstationary) {
    params.require_valid();
    if (!params.stationary() && !allow_nonstationary) {
        throw std::invalid_argument(
            "simulate_ar_garch: nonstationary parameters (alpha1 + beta1 >= 1); "
            "pass allow_nonstationary to override");
    }

    ArGarchSeries series;
    series.a.resize(n);
    series.h.resize(n);
    series.z.resize(n);
    series.ar_coeffs.assign(ar_coeffs.begin(), ar_coeffs.end());
    series.seed = seed;

    Rng rng(seed);
    const std::size_t order = ar_coeffs.size();
    double h_prev = params.stationary() ? params.unconditional_variance()
                                        : params.alpha0;
    double z_prev = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        const double h = (k == 0) ? h_prev
                                  : garch_step(params, h_prev, z_prev);
        const double z = std::sqrt(h) * rng.normal();
        double a = z;
        for (std::size_t j = 0; j < order && j < k; ++j) {
            a += ar_coeffs[j] * series.a[k - 1 - j];
        }
        series.a[k] = a;
        series.h[k] = h;
        series.z[k] = z;
        h_prev = h;
        z_prev = z;
    }
    return series;
}

GarchParams sde_to_garch(const SdeVolParams& sde, double T, int segments) {
    sde.require_valid();
    if (!(T > 0.0) || segments < 1) {
        throw std::invalid_argument("sde_to_garch: requires T > 0 and segments >= 1");
    }
    const double dt = T / static_cast<double>(segments);
    if (sde.theta * dt > 1.0) {
        // alpha1 would go negative
        throw std::invalid_argument("sde_to_garch: requires theta*(T/M) <= 1");
    }
    GarchParams params{sde.theta * sde.omega * dt, 1.0 - sde.theta * dt,
                       sde.xi * sde.xi * dt};
    params.require_valid();
    return params;
}

void HeteroscedasticityExperiment::require_valid() const {
    if (sigma_zeta < 0.0 || !(sigma_m > 0.0)) {
        throw std::invalid_argument(
            "HeteroscedasticityExperiment: requires sigma_zeta >= 0, sigma_m > 0");
    }
    if (n_samples < 10'000) {
        throw std::invalid_argument(
            "HeteroscedasticityExperiment: requires n_samples >= 1e4");
    }
    if (conditioning_bins.empty() && n_auto_bins < 3) {
        throw std::invalid_argument(
            "HeteroscedasticityExperiment: requires at least 3 bins");
    }
}

RegressionLine heteroscedasticity_oracle(const HeteroscedasticityExperiment& exp,
                                         std::uint64_t seed) {
    exp.require_valid();
    const std::size_t n = exp.n_samples;
    Rng rng(seed);

    // (a^2(k-1), squared residual of the known-mean predictor) pairs
    std::vector<double> a2(n);
    std::vector<double> r2(n);
    double a_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double zeta = exp.zeta_mean + exp.sigma_zeta * rng.normal();
        const double w = exp.sigma_m * rng.normal();
        const double a = zeta * a_prev + w;
        const double resid = a - exp.zeta_mean * a_prev;
        a2[k] = a_prev * a_prev;
        r2[k] = resid * resid;
        a_prev = a;
    }

    std::vector<double> edges = exp.conditioning_bins;
    if (edges.empty()) {
        // equal-count bins over a^2
        std::vector<double> sorted(a2);
        std::sort(sorted.begin(), sorted.end());
        edges.reserve(static_cast<std::size_t>(exp.n_auto_bins) - 1);
        for (int b = 1; b < exp.n_auto_bins; ++b) {
            const std::size_t idx = n * static_cast<std::size_t>(b) /
                                    static_cast<std::size_t>(exp.n_auto_bins);
            edges.push_back(sorted[idx]);
        }
    } else {
        std::sort(edges.begin(), edges.end());
    }

    const std::size_t n_bins = edges.size() + 1;
    std::vector<double> sum_a2(n_bins, 0.0);
    std::vector<double> sum_r2(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), a2[k]);
        const auto bin = static_cast<std::size_t>(it - edges.begin());
        sum_a2[bin] += a2[k];
        sum_r2[bin] += r2[k];
        ++count[bin];
    }

    // bin means; bins below the occupancy floor are dropped
    std::vector<double> bx;
    std::vector<double> by;
    std::vector<double> bw;
    for (std::size_t bin = 0; bin < n_bins; ++bin) {
        if (count[bin] < 30) continue;
        const auto c = static_cast<double>(count[bin]);
        bx.push_back(sum_a2[bin] / c);
        by.push_back(sum_r2[bin] / c);
        bw.push_back(c);
    }
    if (bx.size() < 3) {
        throw std::runtime_error(
            "heteroscedasticity_oracle: fewer than 3 usable bins");
    }

    // count-weighted least squares of by on bx
    const double wsum = std::accumulate(bw.begin(), bw.end(), 0.0);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i) {
        mx += bw[i] * bx[i];
        my += bw[i] * by[i];
    }
    mx /= wsum;
    my /= wsum;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i) {
        sxx += bw[i] * (bx[i] - mx) * (bx[i] - mx);
        sxy += bw[i] * (bx[i] - mx) * (by[i] - my);
    }
    if (sxx <= 0.0) {
        throw std::runtime_error(
            "heteroscedasticity_oracle: degenerate conditioning spread");
    }
    const double slope = sxy / sxx;
    return RegressionLine{slope, my - slope * mx};
}

}  // namespace garchtrack
