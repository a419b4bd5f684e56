#include "sclaw/lawcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "sclaw/csv.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

// Antiderivative of sqrt(1 - x^2) on [-1, 1].
double half_chord_integral(double x) {
    return 0.5 * (x * std::sqrt(std::max(0.0, 1.0 - x * x)) + std::asin(x));
}

// Integral over [lo, hi] clipped to [-1, upper] of (offset + k * sqrt(1 - x^2)).
double piece(double lo, double hi, double upper, double offset, double k) {
    hi = std::min(hi, upper);
    if (hi <= lo) return 0.0;
    return offset * (hi - lo) + k * (half_chord_integral(hi) - half_chord_integral(lo));
}

double scaled_eigen_cdf(const std::vector<cplx>& ev, double a, double b) {
    std::size_t count = 0;
    for (const cplx& v : ev) count += (v.real() <= a && v.imag() <= b);
    return static_cast<double>(count) / static_cast<double>(ev.size());
}

}  // namespace

double disc_quadrant_mass(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) throw ContractViolation("disc_quadrant_mass: NaN bound");
    if (a <= -1.0 || b <= -1.0) return 0.0;
    a = std::min(a, 1.0);
    b = std::min(b, 1.0);
    // Vertical slice at x has y in [-w, min(b, w)], w = sqrt(1 - x^2); the cap switches at |x| = c.
    const double c = std::sqrt(1.0 - b * b);
    double area = 0.0;
    if (b >= 0.0) {
        area += piece(-1.0, -c, a, 0.0, 2.0);
        area += piece(-c, c, a, b, 1.0);
        area += piece(c, 1.0, a, 0.0, 2.0);
    } else {
        area += piece(-c, c, a, b, 1.0);
    }
    return std::clamp(area / std::numbers::pi, 0.0, 1.0);
}

double disc_rectangle_mass(double x0, double x1, double y0, double y1) {
    require(x0 <= x1 && y0 <= y1, "disc_rectangle_mass: need x0 <= x1 and y0 <= y1");
    const double m = disc_quadrant_mass(x1, y1) - disc_quadrant_mass(x0, y1) - disc_quadrant_mass(x1, y0) +
                     disc_quadrant_mass(x0, y0);
    return std::max(0.0, m);
}

std::vector<double> default_cdf_grid() {
    std::vector<double> g(25);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = (static_cast<double>(k) - 12.0) / 10.0;
    return g;
}

EsdSummary esd_summary(std::vector<cplx> eigenvalues, std::span<const double> grid) {
    require(!eigenvalues.empty(), "esd_summary: no eigenvalues");
    EsdSummary out;
    out.grid = grid.empty() ? default_cdf_grid() : std::vector<double>(grid.begin(), grid.end());
    require(std::is_sorted(out.grid.begin(), out.grid.end()), "esd_summary: grid must be ascending");
    out.eigenvalues = std::move(eigenvalues);
    std::size_t inside = 0;
    for (const cplx& v : out.eigenvalues) inside += (std::abs(v) <= 1.0);
    out.disk_mass = static_cast<double>(inside) / static_cast<double>(out.eigenvalues.size());
    const std::size_t g = out.grid.size();
    out.cdf.resize(g * g);
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < g; ++b) {
            const double emp = scaled_eigen_cdf(out.eigenvalues, out.grid[a], out.grid[b]);
            out.cdf[a * g + b] = emp;
            out.discrepancy = std::max(out.discrepancy, std::abs(emp - disc_quadrant_mass(out.grid[a], out.grid[b])));
        }
    return out;
}

EsdSummary esd_summary(const SparseSample& sample, std::span<const double> grid) {
    require(sample.n_rows == sample.n_cols, "esd_summary: sample must be square");
    const double d = sample.d();
    require(d > 0.0, "esd_summary: need p n > 0");
    auto ev = linalg::eigenvalues(sample.to_dense()).values;
    const double s = 1.0 / std::sqrt(d);
    for (auto& v : ev) v *= s;
    return esd_summary(std::move(ev), grid);
}

double GinibreReference::quantile(double q) const {
    require(!values.empty(), "GinibreReference: empty reference");
    require(q >= 0.0 && q <= 1.0, "GinibreReference: quantile level must lie in [0, 1]");
    const double pos = std::ceil(q * static_cast<double>(values.size()));
    const std::size_t idx = pos < 1.0 ? 0 : static_cast<std::size_t>(pos) - 1;
    return values[std::min(idx, values.size() - 1)];
}

double GinibreReference::neg_log_top_fraction(double fraction) const {
    require(fraction >= 0.0 && fraction <= 1.0, "GinibreReference: fraction must lie in [0, 1]");
    const std::size_t total = values.size();
    const auto keep = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total)));
    double acc = 0.0;
    for (std::size_t i = total - keep; i < total; ++i) acc -= std::log(values[i]);
    return acc / static_cast<double>(total);
}

GinibreReference ginibre_reference(std::size_t n, cplx z, std::size_t seeds, std::uint64_t base_seed,
                                   double trim_level) {
    require(n >= 100, "ginibre_reference: n must be >= 100");
    require(seeds >= 1, "ginibre_reference: need at least one seed");
    require(trim_level > 0.0 && trim_level < 1.0, "ginibre_reference: trim level must lie in (0, 1)");
    GinibreReference out;
    out.z = z;
    out.n = n;
    out.seeds = seeds;
    out.trim_level = trim_level;
    out.values.reserve(n * seeds);
    const XiSpec gauss = XiSpec::complex_gaussian();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t s = 0; s < seeds; ++s) {
        ComplexDenseMatrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                StreamRng rng(base_seed + s, Domain::ginibre, i, j);
                g(i, j) = gauss.draw(rng) * scale;
            }
        for (std::size_t i = 0; i < n; ++i) g(i, i) -= z;
        const auto sv = linalg::singular_values(g);
        out.values.insert(out.values.end(), sv.begin(), sv.end());
    }
    std::sort(out.values.begin(), out.values.end());
    out.c_emp = out.values.back() - std::abs(z);

    const double total = static_cast<double>(out.values.size());
    const double floor_value = out.tau(trim_level);
    for (double v : out.values) {
        out.neg_log_raw -= std::log(v);
        out.neg_log_truncated -= std::log(std::max(v, floor_value));
    }
    out.neg_log_raw /= total;
    out.neg_log_truncated /= total;

    for (int k = 1; k <= 50; ++k) {
        const double t = 0.01 * k;
        const auto below = std::lower_bound(out.values.begin(), out.values.end(), t) - out.values.begin();
        out.small_ball_constant = std::max(out.small_ball_constant, static_cast<double>(below) / total / t);
    }
    return out;
}

LawRow law_row(const SparseSample& sample, cplx z, double eps, bool with_esd, PotentialReport* potential) {
    const PotentialReport pot = potential_report(sample, z, eps);
    LawRow row;
    row.seed = sample.seed;
    row.n = sample.n_rows;
    row.d = sample.d();
    row.eps = eps;
    row.z = z;
    if (with_esd) {
        const EsdSummary esd = esd_summary(sample);
        row.disk_mass = esd.disk_mass;
        row.discrepancy = esd.discrepancy;
    }
    const double u = u_circ(z);
    row.t1_dev = (pot.t1.infinite ? INFINITY : pot.t1.value) - u;
    row.t2_dev = (pot.t2.infinite ? INFINITY : pot.t2.value) - u;
    const double hs = linalg::hs_norm_sq(shift_and_scale(sample.to_dense(), {z, ScaleMode::rescaled, row.d}));
    const double bound = 4.0 * (std::norm(z) + 1.0) * static_cast<double>(row.n);
    row.hs_bound_ok = hs <= bound;
    row.hs_ratio = hs / bound;
    if (potential) *potential = pot;
    return row;
}

void write_law_csv_header(std::ostream& out) {
    out << "seed,n,d,eps,z_re,z_im,disk_mass,discrepancy,T1_dev,T2_dev,HS_bound_ok\n";
}

void write_law_csv_row(std::ostream& out, const LawRow& r) {
    out << r.seed << ',' << r.n << ',' << csv::num(r.d) << ',' << csv::num(r.eps) << ',' << csv::num(r.z.real())
        << ',' << csv::num(r.z.imag()) << ',' << csv::num(r.disk_mass) << ',' << csv::num(r.discrepancy) << ','
        << csv::num(r.t1_dev) << ',' << csv::num(r.t2_dev) << ',' << csv::flag(r.hs_bound_ok) << '\n';
}

double ConvergenceReport::t1_within(double tol) const {
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& r : rows) hits += (std::abs(r.t1 - u_circ) <= tol);
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

ConvergenceReport truncated_convergence_experiment(std::size_t n, double p, double eps, cplx z, const XiSpec& xi,
                                                   std::size_t seeds, std::uint64_t base_seed,
                                                   const GinibreReference* ginibre) {
    require(z != cplx{}, "truncated_convergence_experiment: z must be nonzero");
    require(seeds >= 1, "truncated_convergence_experiment: need at least one seed");
    require(!ginibre || ginibre->z == z, "truncated_convergence_experiment: reference built for a different z");
    const Precondition pre = p > 0.5 ? Precondition::relaxed : Precondition::enforce;
    ConvergenceReport out;
    out.n = n;
    out.d = p * static_cast<double>(n);
    out.eps = eps;
    out.z = z;
    out.u_circ = u_circ(z);
    const TruncationIndices idx = truncation_indices(n, eps);
    const double reference =
        ginibre ? ginibre->neg_log_top_fraction(static_cast<double>(idx.top) / static_cast<double>(n)) : 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto sample = sample_matrix(n, n, p, xi, base_seed + s, pre);
        const PotentialReport pot = potential_report(sample, z, eps);
        ConvergenceRow row;
        row.seed = sample.seed;
        row.t1 = pot.t1.infinite ? INFINITY : pot.t1.value;
        row.t2 = pot.t2.infinite ? INFINITY : pot.t2.value;
        row.u_n = pot.u_n.infinite ? INFINITY : pot.u_n.value;
        out.mean_abs_t1_dev += std::abs(row.t1 - out.u_circ);
        out.mean_abs_t2_dev += std::abs(row.t2 - out.u_circ);
        if (ginibre) out.mean_abs_t1_dev_ginibre += std::abs(row.t1 - reference);
        out.rows.push_back(row);
    }
    const double k = static_cast<double>(seeds);
    out.mean_abs_t1_dev /= k;
    out.mean_abs_t2_dev /= k;
    out.mean_abs_t1_dev_ginibre /= k;
    return out;
}

}  // namespace sclaw
