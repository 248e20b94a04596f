#pragma once

#include <limits>
#include <optional>

#include "garchtrack/types.hpp"

namespace garchtrack {

/// Per-step output of any tracker.
struct TrackEstimate {
    Vec6 kin = Vec6::Zero();
    std::optional<Vec2> vol;          ///< (hx, hy) estimate, PF-GARCH family
    std::optional<Vec2> model_probs;  ///< model weights, IMM only; sums to 1
    double ess = std::numeric_limits<double>::quiet_NaN();  ///< PF only
    bool resampled = false;                                 ///< PF only
};

/// Sequential one-measurement-per-step tracker. Instances are
/// single-threaded; run independent instances (with independent seeds)
/// concurrently.
class TrackingFilter {
public:
    virtual ~TrackingFilter() = default;

    /// Seeds the state from the first measurement [x, y, vx, vy].
    virtual void init(const Vec4& y0) = 0;

    /// Processes one measurement and returns the updated estimate.
    virtual TrackEstimate step(const Vec4& y) = 0;
};

}  // namespace garchtrack
