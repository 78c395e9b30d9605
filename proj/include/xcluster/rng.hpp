#pragma once

// Counter-based 64-bit random stream with splittable substreams. Equal
// seeds give byte-identical draw sequences; substreams are independent of
// scheduling, so parallel experiment runs stay reproducible.

#include <cmath>
#include <cstdint>

namespace xcluster {

namespace detail {

inline constexpr std::uint64_t GOLDEN = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : key_(seed) {}

    std::uint64_t seed() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::GOLDEN);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (two fresh uniforms per call, no
    /// cached spare, so the draw count stays predictable).
    double normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Independent stream derived from this stream's seed and `index`.
    RngStream substream(std::uint64_t index) const {
        return RngStream(detail::mix64(key_ ^ detail::mix64(index + detail::GOLDEN)));
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace xcluster
