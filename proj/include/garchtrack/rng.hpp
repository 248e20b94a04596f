#pragma once

#include <cstdint>
#include <random>

namespace garchtrack {

/// Named sub-streams for seed derivation. Truth generation and filter
/// sampling consume disjoint streams so that adding a filter to an
/// experiment never perturbs another filter's inputs.
namespace seed_stream {
inline constexpr std::uint64_t truth = 0x7472757468ULL;
inline constexpr std::uint64_t filter = 0x66696c746572ULL;
}  // namespace seed_stream

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Derives a child seed from (base, stream, index). Pure mixing function;
/// the same inputs always yield the same child seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t s = detail::splitmix64(base);
    s = detail::splitmix64(s ^ stream);
    return detail::splitmix64(s ^ index);
}

/// Seeded random source wrapping a single mt19937_64 stream.
/// One instance per logical stream; instances are not thread-safe.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    double student_t(double dof) {
        std::student_t_distribution<double> dist(dof);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace garchtrack
