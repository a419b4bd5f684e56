#pragma once

// Anti-concentration tools: the Levy concentration function (Monte Carlo and exact
// for finitely supported laws), the Levy-Kolmogorov-Rogozin ratio, flat orthonormal
// bases, and projection anti-concentration experiments on fresh random rows.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sclaw/ensemble.hpp"
#include "sclaw/half_time.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/potential.hpp"

namespace sclaw {

/// sup_y P(|G - y| <= r) estimated from samples (closed balls).
struct LevyEstimate {
    double radius = 0.0;
    double estimate = 0.0;
    std::size_t samples = 0;
    double center_grid_pitch = 0.0;
    double std_error = 0.0;
    double conservative_upper = 0.0;  // estimate + 3 std_error, capped at 1
    cplx center{};
    /// Zero radius with no repeated sample value: the law looks continuous and the
    /// estimate is only a resolution floor.
    bool degenerate = false;
};

using Sampler = std::function<cplx(StreamRng&)>;

/// Draws `samples` values from one stream keyed by (seed, levy) and maximizes the
/// closed-ball mass over a grid of pitch r/4.
LevyEstimate levy_estimate(const Sampler& sampler, double radius, std::size_t samples, std::uint64_t seed);

/// A law with finitely many atoms. Atoms closer than a relative 1e-12 are merged.
class DiscreteLaw {
public:
    using Atom = std::pair<cplx, double>;

    explicit DiscreteLaw(std::vector<Atom> atoms);
    static DiscreteLaw point(cplx c);
    /// Throws ContractViolation for continuous kinds.
    static DiscreteLaw from_xi(const XiSpec& xi);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    bool is_real() const noexcept;

    /// Law of delta * G with delta ~ Bernoulli(p) independent of G.
    DiscreteLaw sparsified(double p) const;
    DiscreteLaw scaled(cplx c) const;
    DiscreteLaw real_part() const;
    DiscreteLaw imag_part() const;
    /// Law of the sum of independent copies.
    DiscreteLaw convolve(const DiscreteLaw& other) const;

    /// Exact sup_y P(|G - y| <= r). Real laws use a sliding window; complex laws
    /// try every atom and every circle of radius r through two atoms.
    double concentration(double r) const;

private:
    std::vector<Atom> atoms_;
};

/// Exact law of sum_j delta_j xi_j v_j for independent Bernoulli(p) masks; throws
/// ContractViolation if the atom count would exceed `max_atoms`.
DiscreteLaw inner_product_law(std::span<const cplx> v, double p, const XiSpec& xi, std::size_t max_atoms = 20000);

/// Result of comparing the concentration of a sum against r / sqrt(sum (1 - L_i) r_i^2).
struct LkrReport {
    bool applicable = false;  // false when every term is fully concentrated at its radius
    double lhs = 0.0;         // L(sum, r), exact
    double rhs_unit = 0.0;    // the right-hand side with constant 1
    double c_achieved = 0.0;  // smallest constant making the inequality hold
};

/// Terms must be real laws and r >= max r_i.
LkrReport lkr_check(std::span<const DiscreteLaw> terms, std::span<const double> radii, double r);

/// Real/imaginary concentration split of z * xi at radius beta |z| / sqrt 2.
struct DichotomyReport {
    double base_concentration = 0.0;  // L(xi, beta); the premise is <= 1 - beta
    double re_concentration = 0.0;
    double im_concentration = 0.0;
    double bound = 0.0;  // 1 - beta / 2
    bool premise = false;
    bool holds = false;  // at least one of the two is <= bound
};

DichotomyReport complex_dichotomy(const DiscreteLaw& xi, cplx z, double beta);

/// Orthonormal basis of a subspace in which every vector has at least ceil(c* k)
/// coordinates of modulus >= c* k^{1/2} / n.
struct FlatBasis {
    std::size_t dimension = 0;
    std::size_t ambient = 0;
    linalg::ComplexDenseMatrix vectors;  // ambient x dimension, columns
    double achieved_flatness = 0.0;      // min over columns of the ceil(c* k)-th largest modulus
    double required_flatness = 0.0;
    std::size_t attempts = 0;
    bool used_fourier = false;
};

class FlatBasisFailure : public std::runtime_error {
public:
    FlatBasisFailure(const std::string& what, double best) : std::runtime_error(what), best_flatness(best) {}
    double best_flatness;
};

/// ceil(c* k)-th largest modulus among the entries of a column.
double column_flatness(const linalg::ComplexDenseMatrix& q, std::size_t col, double c_star);

/// Tries the input basis, then `max_retries` random unitary rotations of it, then a
/// discrete Fourier rotation. Throws FlatBasisFailure carrying the best flatness seen.
FlatBasis flat_basis(const linalg::ComplexDenseMatrix& subspace, double c_star, std::size_t max_retries = 64,
                     std::uint64_t seed = 1);

/// Fraction of fresh rows X ~ Row(xi, p) with ||P (X + w)||_2 below a threshold given
/// in log form, P the projection onto the columns of `basis` (orthonormal).
struct ProjectionFrequency {
    std::size_t trials = 0;
    std::size_t hits = 0;
    double freq = 0.0;
};

ProjectionFrequency projection_frequency(const linalg::ComplexDenseMatrix& basis, std::span<const cplx> w,
                                         double log_threshold, double p, const XiSpec& xi, std::size_t trials,
                                         std::uint64_t seed);

struct ProjExperimentOptions {
    std::size_t trials = 1000;
    double eps = 0.1;  // enters the reported bound shape only
    /// Replaces log(d^{1/2} eta_r) when set.
    std::optional<double> log_threshold_override;
};

struct ProjExperimentResult {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double d = 0.0;
    HalfTime t;
    std::size_t r = 0;
    std::size_t h = 0;
    cplx z{};
    std::size_t trials = 0;
    double freq = 0.0;
    double log_threshold = 0.0;
    double sigma_r = 0.0;             // sigma_r of the shifted block
    bool hypothesis_unmet = false;    // sigma_r > d^{1/2} eta_r
    bool boundary_tie = false;
    double bound_shape_value = 0.0;   // eps + (log log d)^{-1/2}
    double implied_constant = 0.0;    // freq / bound_shape_value
};

/// Fresh rows against the h = ceil(t) - r + 1 smallest right-singular directions of
/// A_t - zI (unscaled). Requires 1 <= |z| <= d, d > e, and r <= ceil(t).
ProjExperimentResult proj_anticonc_experiment(const SparseSample& sample, HalfTime t, std::size_t r, cplx z,
                                              std::span<const cplx> w, const DeltaSchedule& schedule,
                                              const ProjExperimentOptions& options);

/// Projection onto a uniformly random h-dimensional subspace, threshold
/// kappa d^{1/2} h^{3/2} n^{-3/2}; the reported shape is kappa + d^{-1/4}.
struct LargeCodimResult {
    std::size_t n = 0;
    std::size_t h = 0;
    double d = 0.0;
    double kappa = 0.0;
    double freq = 0.0;
    double bound_shape_value = 0.0;
};

LargeCodimResult large_codim_experiment(std::size_t n, std::size_t h, double p, const XiSpec& xi, double kappa,
                                        std::size_t trials, std::uint64_t seed);

void write_anticonc_csv_header(std::ostream& out);
void write_anticonc_csv_row(std::ostream& out, const ProjExperimentResult& r);

}  // namespace sclaw
