#pragma once

// Random entry laws, sparse samplers, and the shifted/rescaled matrices built from them.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sclaw/half_time.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/rng.hpp"

namespace sclaw {

using linalg::ComplexDenseMatrix;
using linalg::cplx;

enum class XiKind { complex_gaussian, rademacher, unit_circle_uniform, two_point, bernoulli_scaled };

/// Law of a nonzero entry. All built-in kinds have E|xi|^2 = 1 except a
/// two_point law with arbitrary atoms, which is the caller's responsibility.
struct XiSpec {
    XiKind kind = XiKind::complex_gaussian;
    cplx a{1.0, 0.0};  // two_point: value taken with probability prob
    cplx b{-1.0, 0.0};  // two_point: value taken with probability 1 - prob
    double prob = 0.5;
    double q = 1.0;  // bernoulli_scaled: 1/sqrt(q) with probability q, else 0

    static XiSpec complex_gaussian() { return {}; }
    static XiSpec rademacher() { return {XiKind::rademacher}; }
    static XiSpec unit_circle_uniform() { return {XiKind::unit_circle_uniform}; }
    static XiSpec two_point(cplx a, cplx b, double prob);
    static XiSpec constant(cplx c) { return two_point(c, c, 0.5); }
    static XiSpec bernoulli_scaled(double q);

    cplx draw(StreamRng& rng) const;
    /// Atoms and weights for discrete kinds; nullopt for continuous ones.
    std::optional<std::vector<std::pair<cplx, double>>> atoms() const;
    /// E|xi|^2 computed exactly from the parameters.
    double second_moment() const;

    std::string kind_name() const;
    static XiKind kind_from_name(const std::string& name);

    bool operator==(const XiSpec&) const = default;
};

struct SparseEntry {
    std::size_t i = 0;
    std::size_t j = 0;
    cplx value{};
    bool operator==(const SparseEntry&) const = default;
};

/// One draw of the sparse ensemble: entry (i, j) is present with probability p
/// and then carries an independent draw of xi. Entries are sorted row-major.
struct SparseSample {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    double p = 0.0;
    XiSpec xi;
    std::uint64_t seed = 0;
    std::vector<SparseEntry> nonzeros;

    /// Expected support size of a row.
    double d() const noexcept { return p * static_cast<double>(n_rows); }

    ComplexDenseMatrix to_dense() const;
    /// Top-left rows x cols block.
    ComplexDenseMatrix leading_block(std::size_t rows, std::size_t cols) const;
    /// Top-left block of the shape belonging to time t.
    ComplexDenseMatrix at_time(HalfTime t) const;

    /// Header line "# {json}" followed by "i,j,re,im" rows; doubles use shortest round-trip form.
    void write_csv(std::ostream& out) const;
    static SparseSample read_csv(std::istream& in);

    bool operator==(const SparseSample&) const = default;
};

enum class Precondition {
    enforce,  // 0 < p <= 1/2 and p * n_rows >= 1
    relaxed,  // any p in [0, 1]; for tests and the dense sanity mode
};

SparseSample sample_matrix(std::size_t n_rows, std::size_t n_cols, double p, const XiSpec& xi,
                           std::uint64_t seed, Precondition pre = Precondition::enforce);

/// Row `row_index` of the matrix stream, truncated to `length` columns. With the
/// default domain this equals the corresponding row of sample_matrix.
std::vector<cplx> sample_row(std::size_t length, double p, const XiSpec& xi, std::uint64_t seed,
                             std::size_t row_index = 0, Domain domain = Domain::matrix_entry,
                             Precondition pre = Precondition::enforce);
std::vector<cplx> sample_col(std::size_t length, double p, const XiSpec& xi, std::uint64_t seed,
                             std::size_t col_index = 0, Domain domain = Domain::matrix_entry,
                             Precondition pre = Precondition::enforce);

enum class ScaleMode { raw, rescaled };

struct ShiftSpec {
    cplx z{};
    ScaleMode mode = ScaleMode::raw;
    double d = 1.0;  // used by rescaled mode only
};

/// raw: A - zI; rescaled: d^{-1/2} A - zI. The identity occupies (i, i) for i < rows,
/// so a (k) x (k + 1) input gets the rectangular identity.
ComplexDenseMatrix shift_and_scale(const ComplexDenseMatrix& a, const ShiftSpec& spec);

/// Largest beta on the grid {0.95, 0.90, ..., 0.05} for which the largest open-ball
/// mass max_y P(|xi - y| < beta) is at most 1 - beta (Monte Carlo, see ball_mass.hpp).
struct BetaCalibration {
    double beta = 0.0;
    double max_ball_mass = 0.0;
    double std_error = 0.0;
    cplx center{};
    std::size_t samples = 0;
};

BetaCalibration calibrate_beta(const XiSpec& xi, std::size_t samples = 100000, std::uint64_t seed = 1);
double beta_of_xi(const XiSpec& xi, std::size_t samples = 100000, std::uint64_t seed = 1);

}  // namespace sclaw
