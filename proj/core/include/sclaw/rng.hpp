#pragma once

// Counter-based random streams.
//
// A stream is identified by a 64-bit key derived from (seed, domain, a, b).
// Output i of a stream is mix64(key + (i + 1) * kGamma), i.e. SplitMix64 run
// from a keyed origin, so any draw is a pure function of its coordinates.
// Matrix entries use (seed, Domain::matrix_entry, row, col); this makes a
// row-by-row or column-by-column exposure reproduce the one-shot draw exactly.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace sclaw {

enum class Domain : std::uint64_t {
    matrix_entry = 1,
    xi_calibration = 2,
    subset = 3,
    trial = 4,
    ginibre = 5,
    walk = 6,
    basis = 7,
    levy = 8,
    task = 9,
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, Domain domain, std::uint64_t a = 0,
                                   std::uint64_t b = 0) noexcept {
    std::uint64_t k = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    k = mix64(k ^ (static_cast<std::uint64_t>(domain) * 0x9e3779b97f4a7c15ULL));
    k = mix64(k ^ (a + 0x3c6ef372fe94f82bULL));
    k = mix64(k ^ (b + 0xa54ff53a5f1d36f1ULL));
    return k;
}

/// FNV-1a over bytes; used to derive task stream ids from parameter tuples.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr StreamRng(std::uint64_t key) noexcept : key_(key) {}
    constexpr StreamRng(std::uint64_t seed, Domain domain, std::uint64_t a = 0,
                        std::uint64_t b = 0) noexcept
        : key_(stream_key(seed, domain, a, b)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGamma);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound).
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift; the bias is < bound / 2^64 and irrelevant here.
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>((*this)()) * bound) >> 64);
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sclaw
