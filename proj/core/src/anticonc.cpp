#include "sclaw/anticonc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sclaw/ball_mass.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

using linalg::ComplexDenseMatrix;

constexpr double kMergeTol = 1e-12;
constexpr std::size_t kMaxComplexAtoms = 300;

bool lex_less(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

bool near(cplx a, cplx b) { return std::abs(a - b) <= kMergeTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

ComplexDenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, StreamRng& rng) {
    ComplexDenseMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double x = rng.normal();
            const double y = rng.normal();
            g(i, j) = cplx(x, y) * (1.0 / std::numbers::sqrt2);
        }
    return g;
}

ComplexDenseMatrix fourier(std::size_t k) {
    ComplexDenseMatrix f(k, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            // Reduce the phase index first so large k keeps full accuracy.
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((a * b) % k) / static_cast<double>(k);
            f(a, b) = std::polar(scale, phase);
        }
    return f;
}

double min_flatness(const ComplexDenseMatrix& q, double c_star) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q.cols(); ++j) m = std::min(m, column_flatness(q, j, c_star));
    return m;
}

}  // namespace

LevyEstimate levy_estimate(const Sampler& sampler, double radius, std::size_t samples, std::uint64_t seed) {
    require(samples >= 10000, "levy_estimate: need at least 1e4 samples");
    require(radius >= 0.0 && std::isfinite(radius), "levy_estimate: radius must be finite and >= 0");
    StreamRng rng(seed, Domain::levy);
    std::vector<cplx> draws(samples);
    for (auto& x : draws) x = sampler(rng);

    BallMassOptions opt;
    opt.radius = radius;
    opt.kind = BallKind::closed;
    opt.trim = 0.0;
    opt.pitch_factor = 0.25;
    const BallMass bm = max_ball_mass(draws, opt);

    LevyEstimate out;
    out.radius = radius;
    out.estimate = bm.mass;
    out.samples = samples;
    out.center_grid_pitch = radius * opt.pitch_factor;
    out.std_error = bm.std_error;
    out.center = bm.center;
    const double n = static_cast<double>(samples);
    if (radius == 0.0 && bm.mass * n <= 1.0) {
        out.degenerate = true;
        // No repeats among the samples: the only honest statement is a Monte Carlo upper bound.
        out.std_error = std::max(out.std_error, 1.0 / std::sqrt(n));
    }
    out.conservative_upper = std::min(1.0, out.estimate + 3.0 * out.std_error);
    return out;
}

DiscreteLaw::DiscreteLaw(std::vector<Atom> atoms) {
    double total = 0.0;
    for (const auto& [x, w] : atoms) {
        require(std::isfinite(x.real()) && std::isfinite(x.imag()), "DiscreteLaw: atoms must be finite");
        require(w >= 0.0, "DiscreteLaw: weights must be nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) <= 1e-9, "DiscreteLaw: weights must sum to 1");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return lex_less(a.first, b.first); });
    for (const auto& a : atoms) {
        if (a.second == 0.0) continue;
        if (!atoms_.empty() && near(atoms_.back().first, a.first))
            atoms_.back().second += a.second;
        else
            atoms_.push_back(a);
    }
}

DiscreteLaw DiscreteLaw::point(cplx c) { return DiscreteLaw({{c, 1.0}}); }

DiscreteLaw DiscreteLaw::from_xi(const XiSpec& xi) {
    auto a = xi.atoms();
    require(a.has_value(), "DiscreteLaw: " + xi.kind_name() + " is not a discrete law");
    return DiscreteLaw(std::move(*a));
}

bool DiscreteLaw::is_real() const noexcept {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.first.imag() == 0.0; });
}

DiscreteLaw DiscreteLaw::sparsified(double p) const {
    require(p >= 0.0 && p <= 1.0, "DiscreteLaw::sparsified: p must lie in [0, 1]");
    std::vector<Atom> out{{0.0, 1.0 - p}};
    for (const auto& [x, w] : atoms_) out.emplace_back(x, w * p);
    return DiscreteLaw(std::move(out));
}

DiscreteLaw DiscreteLaw::scaled(cplx c) const {
    std::vector<Atom> out;
    for (const auto& [x, w] : atoms_) out.emplace_back(c * x, w);
    return DiscreteLaw(std::move(out));
}

DiscreteLaw DiscreteLaw::real_part() const {
    std::vector<Atom> out;
    for (const auto& [x, w] : atoms_) out.emplace_back(x.real(), w);
    return DiscreteLaw(std::move(out));
}

DiscreteLaw DiscreteLaw::imag_part() const {
    std::vector<Atom> out;
    for (const auto& [x, w] : atoms_) out.emplace_back(x.imag(), w);
    return DiscreteLaw(std::move(out));
}

DiscreteLaw DiscreteLaw::convolve(const DiscreteLaw& other) const {
    std::vector<Atom> out;
    out.reserve(atoms_.size() * other.atoms_.size());
    for (const auto& [x, w] : atoms_)
        for (const auto& [y, v] : other.atoms_) out.emplace_back(x + y, w * v);
    // Products of weights drift from 1 by rounding only; renormalize before the sum check.
    double total = 0.0;
    for (const auto& a : out) total += a.second;
    for (auto& a : out) a.second /= total;
    return DiscreteLaw(std::move(out));
}

double DiscreteLaw::concentration(double r) const {
    require(r >= 0.0 && std::isfinite(r), "DiscreteLaw::concentration: r must be finite and >= 0");
    if (is_real()) {
        double best = 0.0;
        double window = 0.0;
        std::size_t hi = 0;
        for (std::size_t lo = 0; lo < atoms_.size(); ++lo) {
            const double x = atoms_[lo].first.real();
            const double reach = x + 2.0 * r + kMergeTol * (1.0 + std::abs(x) + r);
            while (hi < atoms_.size() && atoms_[hi].first.real() <= reach) window += atoms_[hi++].second;
            best = std::max(best, window);
            window -= atoms_[lo].second;
        }
        return std::min(best, 1.0);
    }
    require(atoms_.size() <= kMaxComplexAtoms, "DiscreteLaw::concentration: too many complex atoms for the exact search");
    std::vector<cplx> centers;
    for (const auto& a : atoms_) centers.push_back(a.first);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
            const cplx a = atoms_[i].first;
            const cplx b = atoms_[j].first;
            const double dist = std::abs(b - a);
            if (dist == 0.0 || dist > 2.0 * r) continue;
            const cplx mid = 0.5 * (a + b);
            const double off = std::sqrt(std::max(0.0, r * r - 0.25 * dist * dist));
            const cplx normal = cplx(0.0, 1.0) * (b - a) / dist;
            centers.push_back(mid + off * normal);
            centers.push_back(mid - off * normal);
        }
    double best = 0.0;
    for (const cplx& c : centers) {
        double mass = 0.0;
        for (const auto& [x, w] : atoms_)
            if (std::abs(x - c) <= r + kMergeTol * (1.0 + std::abs(c) + r)) mass += w;
        best = std::max(best, mass);
    }
    return std::min(best, 1.0);
}

DiscreteLaw inner_product_law(std::span<const cplx> v, double p, const XiSpec& xi, std::size_t max_atoms) {
    const DiscreteLaw base = DiscreteLaw::from_xi(xi).sparsified(p);
    DiscreteLaw acc = DiscreteLaw::point(0.0);
    for (const cplx& c : v) {
        if (c == cplx{}) continue;
        acc = acc.convolve(base.scaled(c));
        require(acc.atoms().size() <= max_atoms, "inner_product_law: atom count exceeds the limit");
    }
    return acc;
}

LkrReport lkr_check(std::span<const DiscreteLaw> terms, std::span<const double> radii, double r) {
    require(!terms.empty() && terms.size() == radii.size(), "lkr_check: need one radius per term");
    double denom = 0.0;
    DiscreteLaw sum = DiscreteLaw::point(0.0);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        require(terms[i].is_real(), "lkr_check: terms must be real laws");
        require(radii[i] > 0.0 && radii[i] <= r, "lkr_check: need 0 < r_i <= r");
        denom += (1.0 - terms[i].concentration(radii[i])) * radii[i] * radii[i];
        sum = sum.convolve(terms[i]);
    }
    LkrReport out;
    out.lhs = sum.concentration(r);
    if (denom <= 0.0) return out;
    out.applicable = true;
    out.rhs_unit = r / std::sqrt(denom);
    out.c_achieved = out.lhs / out.rhs_unit;
    return out;
}

DichotomyReport complex_dichotomy(const DiscreteLaw& xi, cplx z, double beta) {
    require(z != cplx{}, "complex_dichotomy: z must be nonzero");
    require(beta > 0.0 && beta < 1.0, "complex_dichotomy: beta must lie in (0, 1)");
    DichotomyReport out;
    out.base_concentration = xi.concentration(beta);
    out.premise = out.base_concentration <= 1.0 - beta;
    const double radius = beta * std::abs(z) / std::numbers::sqrt2;
    const DiscreteLaw zx = xi.scaled(z);
    out.re_concentration = zx.real_part().concentration(radius);
    out.im_concentration = zx.imag_part().concentration(radius);
    out.bound = 1.0 - beta / 2.0;
    out.holds = std::min(out.re_concentration, out.im_concentration) <= out.bound;
    return out;
}

double column_flatness(const ComplexDenseMatrix& q, std::size_t col, double c_star) {
    require(col < q.cols(), "column_flatness: column out of range");
    const auto k = static_cast<double>(q.cols());
    const auto idx = static_cast<std::size_t>(std::max(1.0, std::ceil(c_star * k)));
    std::vector<double> mod(q.rows());
    for (std::size_t i = 0; i < q.rows(); ++i) mod[i] = std::abs(q(i, col));
    if (idx > mod.size()) return 0.0;
    std::nth_element(mod.begin(), mod.begin() + static_cast<std::ptrdiff_t>(idx - 1), mod.end(), std::greater<>());
    return mod[idx - 1];
}

FlatBasis flat_basis(const ComplexDenseMatrix& subspace, double c_star, std::size_t max_retries, std::uint64_t seed) {
    const std::size_t n = subspace.rows();
    const std::size_t k = subspace.cols();
    require(k >= 1 && k <= n, "flat_basis: need 1 <= k <= n");
    require(c_star > 0.0 && c_star <= 1.0, "flat_basis: c_star must lie in (0, 1]");
    const ComplexDenseMatrix gram = subspace.adjoint() * subspace;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            require(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10, "flat_basis: input is not orthonormal");

    FlatBasis out;
    out.dimension = k;
    out.ambient = n;
    out.required_flatness = c_star * std::sqrt(static_cast<double>(k)) / static_cast<double>(n);
    const double need = out.required_flatness * (1.0 - 1e-12);
    double best = -1.0;

    auto accept = [&](ComplexDenseMatrix q, bool fourier_used) {
        ++out.attempts;
        const double f = min_flatness(q, c_star);
        best = std::max(best, f);
        if (f < need) return false;
        out.vectors = std::move(q);
        out.achieved_flatness = f;
        out.used_fourier = fourier_used;
        return true;
    };

    if (accept(subspace, false)) return out;
    for (std::size_t attempt = 1; attempt <= max_retries; ++attempt) {
        StreamRng rng(seed, Domain::basis, k, attempt);
        const ComplexDenseMatrix u = linalg::orthonormalize_columns(gaussian_matrix(k, k, rng));
        if (accept(subspace * u, false)) return out;
    }
    if (accept(subspace * fourier(k), true)) return out;
    throw FlatBasisFailure("flat_basis: no rotation reached the required flatness " +
                               std::to_string(out.required_flatness) + "; best " + std::to_string(best) +
                               " (c_star may be too aggressive)",
                           best);
}

ProjectionFrequency projection_frequency(const ComplexDenseMatrix& basis, std::span<const cplx> w, double log_threshold,
                                         double p, const XiSpec& xi, std::size_t trials, std::uint64_t seed) {
    const std::size_t n = basis.rows();
    require(n >= 1 && basis.cols() >= 1, "projection_frequency: empty basis");
    require(w.empty() || w.size() == n, "projection_frequency: offset length must match the ambient dimension");
    require(trials >= 1, "projection_frequency: need at least one trial");
    ProjectionFrequency out;
    out.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<cplx> x = sample_row(n, p, xi, seed, trial, Domain::trial, Precondition::relaxed);
        // The row enters as a column vector: conjugate transpose.
        for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(w.empty() ? x[i] : x[i] + w[i]);
        double acc = 0.0;
        for (std::size_t c = 0; c < basis.cols(); ++c) {
            cplx s{};
            for (std::size_t i = 0; i < n; ++i) s += std::conj(basis(i, c)) * x[i];
            acc += std::norm(s);
        }
        const double log_norm = acc == 0.0 ? -std::numeric_limits<double>::infinity() : 0.5 * std::log(acc);
        if (log_norm < log_threshold) ++out.hits;
    }
    out.freq = static_cast<double>(out.hits) / static_cast<double>(trials);
    return out;
}

ProjExperimentResult proj_anticonc_experiment(const SparseSample& sample, HalfTime t, std::size_t r, cplx z,
                                              std::span<const cplx> w, const DeltaSchedule& schedule,
                                              const ProjExperimentOptions& options) {
    require(sample.n_rows == sample.n_cols, "proj_anticonc_experiment: sample must be square");
    const std::size_t n = sample.n_rows;
    const double d = sample.d();
    require(schedule.n() == n, "proj_anticonc_experiment: schedule built for a different n");
    require(d > std::numbers::e, "proj_anticonc_experiment: need d > e");
    require(std::abs(z) >= 1.0 && std::abs(z) <= d, "proj_anticonc_experiment: need 1 <= |z| <= d");
    require(t.twice() >= 2 && t.ceil() <= static_cast<long long>(n), "proj_anticonc_experiment: t outside [1, n]");
    const auto width = static_cast<std::size_t>(t.ceil());
    require(r >= 1 && r <= width, "proj_anticonc_experiment: need 1 <= r <= ceil(t)");
    require(w.empty() || w.size() == width, "proj_anticonc_experiment: offset must have length ceil(t)");

    ProjExperimentResult out;
    out.seed = sample.seed;
    out.n = n;
    out.d = d;
    out.t = t;
    out.r = r;
    out.h = width - r + 1;
    out.z = z;
    out.trials = options.trials;

    const ComplexDenseMatrix m = shift_and_scale(sample.at_time(t), {z, ScaleMode::raw});
    const auto sub = linalg::small_singular_subspace(m, out.h);
    out.sigma_r = sub.values.back();
    out.boundary_tie = sub.boundary_tie;
    const double natural = 0.5 * std::log(d) + schedule.log_eta(r);
    out.hypothesis_unmet = out.sigma_r > 0.0 && std::log(out.sigma_r) > natural;
    out.log_threshold = options.log_threshold_override.value_or(natural);

    const std::uint64_t stream = stream_key(sample.seed, Domain::trial, static_cast<std::uint64_t>(t.twice()), r);
    const auto f = projection_frequency(sub.basis, w, out.log_threshold, sample.p, sample.xi, options.trials, stream);
    out.freq = f.freq;
    out.bound_shape_value = options.eps + 1.0 / std::sqrt(std::log(std::log(d)));
    out.implied_constant = out.freq / out.bound_shape_value;
    return out;
}

LargeCodimResult large_codim_experiment(std::size_t n, std::size_t h, double p, const XiSpec& xi, double kappa,
                                        std::size_t trials, std::uint64_t seed) {
    require(h >= 1 && h <= n, "large_codim_experiment: need 1 <= h <= n");
    require(kappa > 0.0, "large_codim_experiment: kappa must be positive");
    require(p > 0.0 && p <= 1.0, "large_codim_experiment: p must lie in (0, 1]");
    StreamRng rng(seed, Domain::basis, n, h);
    const ComplexDenseMatrix basis = linalg::orthonormalize_columns(gaussian_matrix(n, h, rng));
    LargeCodimResult out;
    out.n = n;
    out.h = h;
    out.d = p * static_cast<double>(n);
    out.kappa = kappa;
    const double nn = static_cast<double>(n);
    const double hh = static_cast<double>(h);
    const double log_thr = std::log(kappa) + 0.5 * std::log(out.d) + 1.5 * std::log(hh) - 1.5 * std::log(nn);
    out.freq = projection_frequency(basis, {}, log_thr, p, xi, trials, stream_key(seed, Domain::trial, n, h)).freq;
    out.bound_shape_value = kappa + std::pow(out.d, -0.25);
    return out;
}

void write_anticonc_csv_header(std::ostream& out) { out << "seed,n,d,t,r,h,z_re,z_im,trials,freq,bound_shape_value\n"; }

void write_anticonc_csv_row(std::ostream& out, const ProjExperimentResult& r) {
    out << r.seed << ',' << r.n << ',' << csv::num(r.d) << ',' << csv::num(r.t.value()) << ',' << r.r << ',' << r.h
        << ',' << csv::num(r.z.real()) << ',' << csv::num(r.z.imag()) << ',' << r.trials << ',' << csv::num(r.freq)
        << ',' << csv::num(r.bound_shape_value) << '\n';
}

}  // namespace sclaw
