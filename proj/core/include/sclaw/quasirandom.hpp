#pragma once

// Quasi-randomness certificates for a sampled matrix block, and the spread-vector
// verifier for vectors close to the kernel of a shifted block.
//
// Each check reports a verdict. A failure always carries a witness (a column
// subset, a row/column index set, or the offending entries) that
// `reverify` confirms independently of the search that found it.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sclaw/ensemble.hpp"
#include "sclaw/half_time.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/potential.hpp"

namespace sclaw {

struct CertificateConfig {
    double c_star = 0.25;
    double C_prime = 8.0;
    double B_big_O = 4.0;
    double beta = 0.5;
    std::size_t subset_trials = 200;
    std::uint64_t seed = 1;
    /// Sizes with at most this many subsets are checked exhaustively.
    double exhaustive_limit = 1e4;

    void validate() const;
};

enum class Verdict { pass, sampled_pass, vacuous_pass, fail, not_applicable };
std::string to_string(Verdict v);
inline bool passed(Verdict v) {
    return v == Verdict::pass || v == Verdict::sampled_pass || v == Verdict::vacuous_pass;
}

enum class EventKind { unique_expansion, row_degree, large_entries, heavy_rows };
std::string to_string(EventKind e);

struct EventResult {
    EventKind event = EventKind::unique_expansion;
    Verdict verdict = Verdict::pass;
    /// Column subset (unique expansion), row or column indices (degree, heavy rows),
    /// or flat row-major entry indices (large entries).
    std::vector<std::size_t> witness;
    bool witness_is_columns = false;
    /// The scale at which the witness fails: |S|, H, or l.
    double scale = 0.0;
    std::size_t trials = 0;
    std::string detail;
};

struct CertificateReport {
    EventResult unique_expansion;
    EventResult row_degree;
    EventResult large_entries;
    EventResult heavy_rows;

    bool all_passed() const {
        return passed(unique_expansion.verdict) && passed(row_degree.verdict) && passed(large_entries.verdict) &&
               passed(heavy_rows.verdict);
    }
};

/// Rows of an m x l matrix in the unique neighbourhood of a column set S.
struct UniqueNeighborhood {
    std::vector<std::size_t> outside;  // i not in S, exactly one nonzero among S-columns, of modulus >= beta
    std::vector<std::size_t> inside;   // i in S, all S-columns zero in row i
    std::size_t size() const noexcept { return outside.size() + inside.size(); }
};

UniqueNeighborhood unique_neighborhood(const linalg::ComplexDenseMatrix& b, std::span<const std::size_t> s,
                                       double beta);

/// (log(n/x))^{-2}; requires 0 < x < n.
double alpha(double n, double x);

/// ceil(d alpha(x) x / (C' (d + log(n/x)))).
std::size_t g_step(double n, double d, double x, double c_prime);

struct GrowthSequence {
    std::vector<std::size_t> k;  // k_0 = start, k_i = k_{i-1} + g(k_{i-1})
    std::size_t tau = 0;         // first index with k_tau > target
    double target = 0.0;         // (n / (2d)) log log d
    double k_achieved = 0.0;     // tau / (log(n/k_0))^4
};

/// Requires d > e (log log d > 0) and 1 <= start < n.
GrowthSequence g_and_tau(double n, double d, std::size_t start, double c_prime);

/// Largest admissible subset size (n / (2d)) log log d, rounded down.
double spread_target(double n, double d);

/// |U(S)| >= alpha(|S|) d |S| for all column sets with size_lo <= |S| <= size_hi.
EventResult check_unique_expansion(const linalg::ComplexDenseMatrix& b, double n, double d, std::size_t size_lo,
                                   std::size_t size_hi, const CertificateConfig& config);
/// Size range [ceil(c* (ceil(t) - r + 1)), (n/(2d)) log log d]; requires r >= t - n / d^{1/4}.
EventResult check_event_U_r(const linalg::ComplexDenseMatrix& a_t, HalfTime t, std::size_t r, double n, double d,
                            const CertificateConfig& config);
/// Mean support size of the s heaviest rows (and columns) is <= B (d + log(n/s)) for every s.
EventResult check_event_B(const linalg::ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config);
/// For dyadic H in [1, n^4]: #{|a_ij| > 8H/beta} <= 2dn/H^2 + (log n)^2, and max |a_ij| <= n^3.
EventResult check_event_Q(const linalg::ComplexDenseMatrix& a_t, double n, double d, double beta);
/// For each l (default: 1, 2, 4, ... <= n/2): #{rows with absolute sum > L/beta} <= alpha(l) d l / 4,
/// L = (dn/(beta l))^5, and the same for columns. Any l > n/2 is vacuous.
EventResult check_event_R(const linalg::ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config,
                          std::span<const double> ells = {});

/// True iff the witness of a failed result violates its event's inequality.
bool reverify(const linalg::ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config,
              const EventResult& result);

/// All four checks for the block of `sample` at time t. With `adjoint` set the block is
/// conjugate-transposed first (column exposure is row exposure of the adjoint).
CertificateReport certify(const SparseSample& sample, HalfTime t, std::size_t r, const CertificateConfig& config,
                          bool adjoint = false);

void write_certificate_csv_header(std::ostream& out);
void write_certificate_csv_rows(std::ostream& out, std::uint64_t seed, std::size_t n, double d, HalfTime t,
                                std::size_t r, const CertificateReport& report);

/// #{i : |v_i| >= x}.
std::size_t lambda_count(std::span<const linalg::cplx> v, double x);
/// Same count with the threshold given as log x (so thresholds below the double range work).
std::size_t lambda_count_log(std::span<const linalg::cplx> v, double log_x);

struct DecayStep {
    std::size_t k_prev = 0;
    std::size_t k = 0;
    double log_ratio = 0.0;   // log v*_k - log v*_{k_prev}
    double log_bound = 0.0;   // log delta with delta = (beta k_0 / (d n))^7
    bool holds = false;
};

struct SpreadVerdict {
    Verdict verdict = Verdict::not_applicable;
    std::string reason;           // why the hypotheses were not met, if so
    double k = 0.0;               // c* (ceil(t) - r + 1)
    std::size_t count = 0;        // lambda(v; eta_r d^{1/2} k^{-1/2})
    double required = 0.0;        // (n / (2d)) log log d
    double margin = 0.0;          // count - required
    std::vector<DecayStep> decay; // diagnostic trace along the growth sequence
};

/// Checks the spread conclusion for v against the shifted block m = A_t - zI (unscaled),
/// whose column count is ceil(t). Hypotheses that fail give not_applicable.
SpreadVerdict spread_check(const linalg::ComplexDenseMatrix& m, linalg::cplx z, std::span<const linalg::cplx> v,
                           HalfTime t, std::size_t r, const DeltaSchedule& schedule, const CertificateConfig& config);

}  // namespace sclaw
