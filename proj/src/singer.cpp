#include "garchtrack/singer.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace garchtrack {
namespace {

// Taylor coefficients of the dimensionless factors m_ij(x), x = mu*T, where
//   M11 = T^5 m11, M12 = T^4 m12, M13 = T^3 m13,
//   M22 = T^3 m22, M23 = T^2 m23, M33 = T   m33.
// Generated from the exact rational series of the integrals; 20 terms keep
// the truncation below 1e-16 relative for x < 0.5.
constexpr std::array<double, 20> kM11 = {
    0.050000000000000003, -0.027777777777777776, 0.0099206349206349201,
    -0.0027777777777777779, 0.0006558641975308642, -0.00013558201058201059,
    2.5102212602212603e-05, -4.2254556143445033e-06, 6.5360308415863968e-07,
    -9.3647167059865471e-08, 1.2506171567018128e-08, -1.5646096995303344e-09,
    1.8415607307414029e-10, -2.0466784043356649e-11, 2.1546778219517165e-12,
    -2.1548257933861558e-13, 2.0522894184961894e-14, -1.8657532403439238e-15,
    1.6224103683529112e-16, -1.3520157319394055e-17};
constexpr std::array<double, 20> kM12 = {
    0.125, -0.083333333333333329, 0.034722222222222224, -0.011111111111111112,
    0.0029513888888888888, -0.00067791005291005296, 0.00013806216931216931,
    -2.535273368606702e-05, 4.2484200470311584e-06, -6.555301694190583e-07,
    9.3796286752635963e-08, -1.2516877596242676e-08, 1.5653266211301926e-09,
    -1.8420105639020982e-10, 2.0469439308541306e-11, -2.1548257933861559e-12,
    2.1549038894209988e-13, -2.0523285643783161e-14, 1.8657719236058477e-15,
    -1.6224188783272867e-16};
constexpr std::array<double, 20> kM13 = {
    0.16666666666666666, -0.16666666666666666, 0.09166666666666666,
    -0.036111111111111108, 0.011309523809523809, -0.002976190476190476,
    0.00068066578483245153, -0.00013833774250440918, 2.5377785794452461e-05,
    -4.2505077227299451e-06, 6.5569075985742654e-07, -9.3807757498233694e-08,
    1.2517642312615858e-08, -1.5653744159035164e-09, 1.8420386784746418e-10,
    -2.0469595500610993e-11, 2.1548340140214024e-12, -2.154907999738622e-13,
    2.0523305216724225e-14, -1.865772813284987e-15};
constexpr std::array<double, 20> kM22 = {
    0.33333333333333331, -0.25, 0.11666666666666667, -0.041666666666666664,
    0.012301587301587301, -0.0031250000000000002, 0.00069995590828924161,
    -0.00014054232804232804, 2.5603254769921436e-05, -4.2713844797178134e-06,
    6.5745725467947692e-07, -9.3945406445406441e-08, 1.2527583625467223e-08,
    -1.5660435427300506e-09, 1.8424603970627936e-10, -2.0472094573725967e-11,
    2.1549737648205952e-12, -2.1549819854558418e-13, 2.0523677102604429e-14,
    -1.8657906068677719e-15};
constexpr std::array<double, 20> kM23 = {
    0.5, -0.5, 0.29166666666666669, -0.125, 0.043055555555555555,
    -0.012500000000000001, 0.0031498015873015874, -0.00070271164021164017,
    0.00014081790123456791, -2.5628306878306877e-05, 4.2734721554166002e-06,
    -6.5761784511784515e-07, 9.3956877191004172e-08, -1.2528348341840405e-08,
    1.5660913375033746e-09, -1.8424885116353371e-10, 2.0472250765795654e-11,
    -2.1549819854558417e-12, 2.154986095773465e-13, -2.0523696675545493e-14};
constexpr std::array<double, 20> kM33 = {
    1.0, -1.0, 0.66666666666666663, -0.33333333333333331, 0.13333333333333333,
    -0.044444444444444446, 0.012698412698412698, -0.0031746031746031746,
    0.00070546737213403885, -0.00014109347442680775, 2.5653358986692322e-05,
    -4.2755598311153869e-06, 6.5777843555621328e-07, -9.3968347936601903e-08,
    1.2529113058213587e-08, -1.5661391322766984e-09, 1.8425166262078804e-10,
    -2.0472406957865337e-11, 2.1549902060910882e-12, -2.1549902060910883e-13};

double horner(const std::array<double, 20>& c, double x) {
    double acc = 0.0;
    for (int i = 19; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

struct GaussLegendre {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; standard Golub-Welsch-free
// construction, adequate for the node counts used here.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = -x;
        gl.weights[i] = w;
        gl.nodes[n - 1 - i] = x;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

}  // namespace

Eigen::Matrix3d singer_axis_noise_cov(double T, double mu) {
    if (!(T > 0.0) || mu < 0.0) {
        throw std::invalid_argument("singer_axis_noise_cov: requires T > 0, mu >= 0");
    }
    const double x = mu * T;
    double m11;
    double m12;
    double m13;
    double m22;
    double m23;
    double m33;
    if (x < detail::kSingerSeriesCutoff) {
        m11 = horner(kM11, x);
        m12 = horner(kM12, x);
        m13 = horner(kM13, x);
        m22 = horner(kM22, x);
        m23 = horner(kM23, x);
        m33 = horner(kM33, x);
    } else {
        const double e1 = std::exp(-x);
        const double e2 = std::exp(-2.0 * x);
        m11 = (1.0 - e2 + 2.0 * x + 2.0 * x * x * x / 3.0 - 2.0 * x * x -
               4.0 * x * e1) /
              (2.0 * std::pow(x, 5));
        m12 = (e2 + 1.0 - 2.0 * e1 + 2.0 * x * e1 - 2.0 * x + x * x) /
              (2.0 * std::pow(x, 4));
        m13 = (1.0 - e2 - 2.0 * x * e1) / (2.0 * std::pow(x, 3));
        m22 = (2.0 * x - 3.0 + 4.0 * e1 - e2) / (2.0 * std::pow(x, 3));
        m23 = (1.0 - 2.0 * e1 + e2) / (2.0 * x * x);
        m33 = (1.0 - e2) / (2.0 * x);
    }
    const double T2 = T * T;
    const double T3 = T2 * T;
    Eigen::Matrix3d M;
    M << T3 * T2 * m11, T2 * T2 * m12, T3 * m13,
         T2 * T2 * m12, T3 * m22,      T2 * m23,
         T3 * m13,      T2 * m23,      T * m33;
    return M;
}

Eigen::Matrix3d singer_axis_noise_cov_quadrature(double T, double mu, int nodes) {
    if (nodes < 2) {
        throw std::invalid_argument(
            "singer_axis_noise_cov_quadrature: requires nodes >= 2");
    }
    if (!(T > 0.0) || mu < 0.0) {
        throw std::invalid_argument(
            "singer_axis_noise_cov_quadrature: requires T > 0, mu >= 0");
    }
    Eigen::Matrix3d F;
    F << 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0,
         0.0, 0.0, -mu;
    const GaussLegendre gl = gauss_legendre(nodes);
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    for (int i = 0; i < nodes; ++i) {
        const double u = 0.5 * T * (gl.nodes[i] + 1.0);
        const Eigen::Matrix3d expFu = (F * u).exp();
        const Eigen::Vector3d gamma = expFu.col(2);  // exp(F u) * [0 0 1]'
        M += (0.5 * T * gl.weights[i]) * (gamma * gamma.transpose());
    }
    return M;
}

}  // namespace garchtrack
