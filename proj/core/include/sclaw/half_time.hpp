#pragma once

#include <cstddef>
#include <string>

#include "sclaw/errors.hpp"

namespace sclaw {

/// A time t in (1/2)Z, stored as the integer 2t.
class HalfTime {
public:
    constexpr HalfTime() = default;
    static constexpr HalfTime from_twice(long long twice) { return HalfTime(twice); }
    static constexpr HalfTime integer(long long t) { return HalfTime(2 * t); }

    constexpr long long twice() const noexcept { return twice_; }
    constexpr bool is_integral() const noexcept { return twice_ % 2 == 0; }
    constexpr long long floor() const noexcept { return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2); }
    constexpr long long ceil() const noexcept { return twice_ >= 0 ? (twice_ + 1) / 2 : -((-twice_) / 2); }
    constexpr double value() const noexcept { return static_cast<double>(twice_) / 2.0; }

    constexpr HalfTime next() const noexcept { return HalfTime(twice_ + 1); }
    constexpr auto operator<=>(const HalfTime&) const = default;

    std::string str() const {
        return is_integral() ? std::to_string(twice_ / 2) : std::to_string(floor()) + ".5";
    }

private:
    explicit constexpr HalfTime(long long twice) : twice_(twice) {}
    long long twice_ = 0;
};

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;
    constexpr bool operator==(const Shape&) const = default;
};

/// t x t at integer t; (t - 1/2) x (t + 1/2) at half-integer t.
constexpr Shape shape_at(HalfTime t) {
    if (t.twice() < 2) throw ContractViolation("shape_at: time must be >= 1");
    return {static_cast<std::size_t>(t.floor()), static_cast<std::size_t>(t.ceil())};
}

}  // namespace sclaw
