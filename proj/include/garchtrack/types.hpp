#pragma once

#include <Eigen/Dense>

namespace garchtrack {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Component layout of the six-dimensional kinematic state
/// [x, y, vx, vy, ax, ay]: planar position, velocity, acceleration.
namespace state_index {
inline constexpr int x = 0;
inline constexpr int y = 1;
inline constexpr int vx = 2;
inline constexpr int vy = 3;
inline constexpr int ax = 4;
inline constexpr int ay = 5;
}  // namespace state_index

/// Per-axis conditional variance of the acceleration noise.
struct VolatilityPair {
    double hx;
    double hy;
};

/// Kinematic state augmented with its volatility pair.
struct AugmentedState {
    Vec6 kin;
    VolatilityPair vol;
};

}  // namespace garchtrack
