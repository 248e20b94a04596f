#pragma once

#include <cstdint>
#include <vector>

#include "garchtrack/garch.hpp"
#include "garchtrack/rng.hpp"
#include "garchtrack/statespace.hpp"
#include "garchtrack/tracking_filter.hpp"
#include "garchtrack/types.hpp"

namespace garchtrack {

enum class Resampler { multinomial, systematic };

struct Particle {
    Vec6 kin = Vec6::Zero();
    VolatilityPair vol{1.0, 1.0};
    Vec2 z_prev = Vec2::Zero();  ///< last sampled acceleration innovation per axis
    double weight = 0.0;
};

/// Weighted particle set. Weights are kept normalized between steps.
struct Ensemble {
    std::vector<Particle> particles;

    [[nodiscard]] int size() const { return static_cast<int>(particles.size()); }
};

/// 1 / sum(w^2); ranges over [1, n_s] for normalized weights.
double effective_sample_size(const Ensemble& ens);

/// Draws size() offspring proportional to the weights and resets them to
/// uniform. Multinomial draws iid; systematic uses one stratified uniform.
/// Either way E[offspring_i] = n_s * w_i.
void resample(Ensemble& ens, Resampler scheme, Rng& rng);

/// Per-component standard deviations of the initial particle cloud.
struct PriorSpread {
    double pos = 100.0;
    double vel = 5.0;
    double acc = 1.0;
};

struct PfGarchConfig {
    int n_s = 50;
    GarchParams garch_x{1.0, 0.0, 0.0};
    GarchParams garch_y{1.0, 0.0, 0.0};
    TransitionModel trans;
    MeasurementModel meas;
    PriorSpread prior_spread;
    double h0 = 1.0;  ///< initial per-axis volatility, > 0
    Resampler resampler = Resampler::multinomial;
    double ess_fraction = 0.5;  ///< resample when ESS < ess_fraction * n_s; in (0, 1]

    void require_valid() const;
};

/**
 * Bootstrap particle filter over the augmented state (kinematics plus
 * per-axis volatility). Each particle carries its own volatility recursion
 * driven by the acceleration innovation it sampled on the previous step:
 *
 *   h_i(k)   = garch_step(params, h_i(k-1), z_i(k-1))      per axis
 *   U_i(k)   ~ N(0, Q(h_i(k)))
 *   X_i(k)   = Phi X_i(k-1) + U_i(k),  z_i(k) = accel components of U_i(k)
 *   w_i(k)  ~= w_i(k-1) * N(y_k; H X_i(k), R)
 *
 * The output estimate is the weighted ensemble mean, computed before any
 * resampling. Weight arithmetic runs in the log domain; a fully degenerate
 * weight set (all zero) resets to uniform and is counted, not fatal.
 */
class PfGarchFilter final : public TrackingFilter {
public:
    PfGarchFilter(PfGarchConfig cfg, std::uint64_t seed);

    void init(const Vec4& y0) override;
    TrackEstimate step(const Vec4& y) override;

    [[nodiscard]] const Ensemble& ensemble() const { return ensemble_; }
    [[nodiscard]] long degeneracy_count() const { return degeneracy_count_; }

private:
    PfGarchConfig cfg_;
    ProcessNoiseModel noise_;
    Ensemble ensemble_;
    Rng rng_;
    long degeneracy_count_ = 0;
};

/// Bootstrap particle filter with a fixed process-noise variance: the
/// volatility recursion degenerates to h == sigma2 (alpha1 = beta1 = 0),
/// so this shares the PF-GARCH code path step for step.
struct PfPlainConfig {
    int n_s = 200;
    double sigma2 = 150.0;  ///< fixed acceleration-noise variance, > 0
    TransitionModel trans;
    MeasurementModel meas;
    PriorSpread prior_spread;
    Resampler resampler = Resampler::multinomial;
    double ess_fraction = 0.5;
};

class PlainPfFilter final : public TrackingFilter {
public:
    PlainPfFilter(const PfPlainConfig& cfg, std::uint64_t seed);

    void init(const Vec4& y0) override;
    TrackEstimate step(const Vec4& y) override;

    [[nodiscard]] const Ensemble& ensemble() const { return inner_.ensemble(); }
    [[nodiscard]] long degeneracy_count() const { return inner_.degeneracy_count(); }

private:
    PfGarchFilter inner_;
};

}  // namespace garchtrack
