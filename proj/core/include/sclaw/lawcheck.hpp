#pragma once

// Empirical checks of the circular law: eigenvalue distribution against the uniform
// disc, a Ginibre reference for shifted singular values, and the convergence of the
// truncated potentials to the disc potential.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sclaw/ensemble.hpp"
#include "sclaw/potential.hpp"

namespace sclaw {

/// Uniform-disc probability of {Re <= a, Im <= b}; infinite bounds allowed.
double disc_quadrant_mass(double a, double b);
/// Uniform-disc probability of [x0, x1] x [y0, y1].
double disc_rectangle_mass(double x0, double x1, double y0, double y1);

/// 25 equally spaced points on [-1.2, 1.2].
std::vector<double> default_cdf_grid();

struct EsdSummary {
    std::vector<cplx> eigenvalues;  // of A / sqrt(d)
    std::vector<double> grid;       // shared by both axes
    /// Empirical CDF at (grid[a], grid[b]) stored at a * grid.size() + b.
    std::vector<double> cdf;
    double disk_mass = 0.0;
    double discrepancy = 0.0;  // sup over the grid of |empirical - disc|
};

EsdSummary esd_summary(const SparseSample& sample, std::span<const double> grid = {});
/// The same summary for given eigenvalues (already scaled).
EsdSummary esd_summary(std::vector<cplx> eigenvalues, std::span<const double> grid = {});

struct GinibreReference {
    cplx z{};
    std::size_t n = 0;
    std::size_t seeds = 0;
    std::vector<double> values;  // pooled singular values of n^{-1/2} G - zI, ascending
    double c_emp = 0.0;          // largest value minus |z|
    double trim_level = 0.01;
    double neg_log_raw = 0.0;        // -mean log s
    double neg_log_truncated = 0.0;  // -mean log max(s, tau(trim_level))
    /// max over t in {0.01, 0.02, ..., 0.5} of mass([0, t)) / t.
    double small_ball_constant = 0.0;

    /// Empirical quantile: smallest pooled value v with mass([0, v]) >= q.
    double quantile(double q) const;
    double tau(double eps) const { return quantile(eps); }
    /// -(1/N) sum of log s over the largest floor(fraction * N) pooled values: the
    /// reference counterpart of a top-truncated potential.
    double neg_log_top_fraction(double fraction) const;
};

/// Seeds are base_seed, base_seed + 1, ...; entries come from their own stream domain.
GinibreReference ginibre_reference(std::size_t n, cplx z, std::size_t seeds, std::uint64_t base_seed = 1,
                                   double trim_level = 0.01);

struct LawRow {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double d = 0.0;
    double eps = 0.0;
    cplx z{};
    double disk_mass = 0.0;
    double discrepancy = 0.0;
    double t1_dev = 0.0;  // T1 - U_circ(z)
    double t2_dev = 0.0;  // T2 - U_circ(z)
    bool hs_bound_ok = false;  // ||d^{-1/2} A - zI||_HS^2 <= 4 (|z|^2 + 1) n
    double hs_ratio = 0.0;     // left side over right side of the bound above
};

/// Eigenvalue statistics are skipped (left at 0) when `with_esd` is false. The
/// potentials behind the deviations are copied to `potential` when given.
LawRow law_row(const SparseSample& sample, cplx z, double eps, bool with_esd = true,
               PotentialReport* potential = nullptr);

void write_law_csv_header(std::ostream& out);
void write_law_csv_row(std::ostream& out, const LawRow& row);

struct ConvergenceRow {
    std::uint64_t seed = 0;
    double t1 = 0.0;
    double t2 = 0.0;
    double u_n = 0.0;
};

struct ConvergenceReport {
    std::size_t n = 0;
    double d = 0.0;
    double eps = 0.0;
    cplx z{};
    double u_circ = 0.0;
    std::vector<ConvergenceRow> rows;
    double mean_abs_t1_dev = 0.0;
    double mean_abs_t2_dev = 0.0;
    /// Same deviations against the truncated Ginibre integral, when one was supplied.
    double mean_abs_t1_dev_ginibre = 0.0;

    /// Fraction of seeds with |T1 - U_circ(z)| <= tol.
    double t1_within(double tol) const;
};

/// Samples at seeds base_seed, base_seed + 1, ...; p > 1/2 runs in the relaxed (dense) mode.
ConvergenceReport truncated_convergence_experiment(std::size_t n, double p, double eps, cplx z, const XiSpec& xi,
                                                   std::size_t seeds, std::uint64_t base_seed = 1,
                                                   const GinibreReference* ginibre = nullptr);

}  // namespace sclaw
