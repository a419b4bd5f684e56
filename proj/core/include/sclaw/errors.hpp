#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sclaw {

/// A caller broke an operation's precondition (bad shape, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative kernel hit its iteration cap.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, std::size_t rows, std::size_t cols,
                   std::uint64_t content_hash)
        : std::runtime_error(what + " (shape " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", content hash " +
                             std::to_string(content_hash) + ")"),
          rows_(rows), cols_(cols), content_hash_(content_hash) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint64_t content_hash() const noexcept { return content_hash_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::uint64_t content_hash_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

}  // namespace sclaw
