#include "sclaw/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "sclaw/ball_mass.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

void check_probability(double p, std::size_t n, Precondition pre, const char* who) {
    const std::string name(who);
    require(std::isfinite(p), name + ": p must be finite");
    if (pre == Precondition::relaxed) {
        require(p >= 0.0 && p <= 1.0, name + ": p must lie in [0, 1]");
        return;
    }
    require(p > 0.0 && p <= 0.5, name + ": p must lie in (0, 1/2]");
    require(p * static_cast<double>(n) >= 1.0, name + ": p * n must be at least 1");
}

std::optional<cplx> draw_entry(double p, const XiSpec& xi, std::uint64_t seed, Domain domain,
                               std::size_t i, std::size_t j) {
    StreamRng rng(seed, domain, i, j);
    if (!(rng.uniform() < p)) return std::nullopt;
    return xi.draw(rng);
}

}  // namespace

XiSpec XiSpec::two_point(cplx a, cplx b, double prob) {
    require(prob >= 0.0 && prob <= 1.0, "two_point: prob must lie in [0, 1]");
    require(std::isfinite(a.real()) && std::isfinite(a.imag()) && std::isfinite(b.real()) &&
                std::isfinite(b.imag()),
            "two_point: atoms must be finite");
    XiSpec s{XiKind::two_point};
    s.a = a;
    s.b = b;
    s.prob = prob;
    return s;
}

XiSpec XiSpec::bernoulli_scaled(double q) {
    require(q > 0.0 && q <= 1.0, "bernoulli_scaled: q must lie in (0, 1]");
    XiSpec s{XiKind::bernoulli_scaled};
    s.q = q;
    return s;
}

cplx XiSpec::draw(StreamRng& rng) const {
    switch (kind) {
        case XiKind::complex_gaussian: {
            const double x = rng.normal();
            const double y = rng.normal();
            return cplx(x, y) * (1.0 / std::numbers::sqrt2);
        }
        case XiKind::rademacher:
            return rng.uniform() < 0.5 ? 1.0 : -1.0;
        case XiKind::unit_circle_uniform:
            return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        case XiKind::two_point:
            return rng.uniform() < prob ? a : b;
        case XiKind::bernoulli_scaled:
            return rng.uniform() < q ? 1.0 / std::sqrt(q) : 0.0;
    }
    return {};
}

std::optional<std::vector<std::pair<cplx, double>>> XiSpec::atoms() const {
    switch (kind) {
        case XiKind::rademacher:
            return std::vector<std::pair<cplx, double>>{{1.0, 0.5}, {-1.0, 0.5}};
        case XiKind::two_point:
            if (a == b) return std::vector<std::pair<cplx, double>>{{a, 1.0}};
            return std::vector<std::pair<cplx, double>>{{a, prob}, {b, 1.0 - prob}};
        case XiKind::bernoulli_scaled:
            if (q == 1.0) return std::vector<std::pair<cplx, double>>{{1.0, 1.0}};
            return std::vector<std::pair<cplx, double>>{{1.0 / std::sqrt(q), q}, {0.0, 1.0 - q}};
        default:
            return std::nullopt;
    }
}

double XiSpec::second_moment() const {
    if (kind == XiKind::two_point) return prob * std::norm(a) + (1.0 - prob) * std::norm(b);
    return 1.0;
}

std::string XiSpec::kind_name() const {
    switch (kind) {
        case XiKind::complex_gaussian: return "complex-gaussian";
        case XiKind::rademacher: return "rademacher";
        case XiKind::unit_circle_uniform: return "unit-circle-uniform";
        case XiKind::two_point: return "two-point";
        case XiKind::bernoulli_scaled: return "bernoulli-scaled";
    }
    return "unknown";
}

XiKind XiSpec::kind_from_name(const std::string& name) {
    if (name == "complex-gaussian") return XiKind::complex_gaussian;
    if (name == "rademacher") return XiKind::rademacher;
    if (name == "unit-circle-uniform") return XiKind::unit_circle_uniform;
    if (name == "two-point") return XiKind::two_point;
    if (name == "bernoulli-scaled") return XiKind::bernoulli_scaled;
    throw ContractViolation("unknown xi kind '" + name + "'");
}

ComplexDenseMatrix SparseSample::to_dense() const { return leading_block(n_rows, n_cols); }

ComplexDenseMatrix SparseSample::leading_block(std::size_t rows, std::size_t cols) const {
    require(rows <= n_rows && cols <= n_cols, "leading_block: block exceeds sample shape");
    ComplexDenseMatrix out(rows, cols);
    for (const SparseEntry& e : nonzeros) {
        if (e.i >= rows) break;
        if (e.j < cols) out(e.i, e.j) = e.value;
    }
    return out;
}

ComplexDenseMatrix SparseSample::at_time(HalfTime t) const {
    const Shape s = shape_at(t);
    return leading_block(s.rows, s.cols);
}

SparseSample sample_matrix(std::size_t n_rows, std::size_t n_cols, double p, const XiSpec& xi,
                           std::uint64_t seed, Precondition pre) {
    require(n_rows >= 1 && n_cols >= 1, "sample_matrix: dimensions must be >= 1");
    check_probability(p, n_rows, pre, "sample_matrix");
    SparseSample s{n_rows, n_cols, p, xi, seed, {}};
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (auto v = draw_entry(p, xi, seed, Domain::matrix_entry, i, j)) s.nonzeros.push_back({i, j, *v});
    return s;
}

std::vector<cplx> sample_row(std::size_t length, double p, const XiSpec& xi, std::uint64_t seed,
                             std::size_t row_index, Domain domain, Precondition pre) {
    require(length >= 1, "sample_row: length must be >= 1");
    check_probability(p, length, pre, "sample_row");
    std::vector<cplx> out(length);
    for (std::size_t j = 0; j < length; ++j)
        if (auto v = draw_entry(p, xi, seed, domain, row_index, j)) out[j] = *v;
    return out;
}

std::vector<cplx> sample_col(std::size_t length, double p, const XiSpec& xi, std::uint64_t seed,
                             std::size_t col_index, Domain domain, Precondition pre) {
    require(length >= 1, "sample_col: length must be >= 1");
    check_probability(p, length, pre, "sample_col");
    std::vector<cplx> out(length);
    for (std::size_t i = 0; i < length; ++i)
        if (auto v = draw_entry(p, xi, seed, domain, i, col_index)) out[i] = *v;
    return out;
}

ComplexDenseMatrix shift_and_scale(const ComplexDenseMatrix& a, const ShiftSpec& spec) {
    require(a.cols() == a.rows() || a.cols() == a.rows() + 1,
            "shift_and_scale: shape must be k x k or k x (k+1)");
    ComplexDenseMatrix out = a;
    if (spec.mode == ScaleMode::rescaled) {
        require(spec.d > 0.0 && std::isfinite(spec.d), "shift_and_scale: rescaled mode needs d > 0");
        out *= 1.0 / std::sqrt(spec.d);
    }
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) -= spec.z;
    return out;
}

BetaCalibration calibrate_beta(const XiSpec& xi, std::size_t samples, std::uint64_t seed) {
    require(samples >= 100000, "beta_of_xi: need at least 1e5 samples");
    std::vector<cplx> draws(samples);
    StreamRng rng(seed, Domain::xi_calibration);
    for (cplx& z : draws) z = xi.draw(rng);

    for (int k = 19; k >= 1; --k) {
        const double beta = 0.05 * k;
        const BallMass m = max_ball_mass(draws, {beta, BallKind::open, 0.01, 0.25});
        // Accept up to three standard errors of Monte Carlo noise.
        if (m.mass <= 1.0 - beta + 3.0 * m.std_error) return {beta, m.mass, m.std_error, m.center, samples};
    }
    throw ContractViolation(
        "beta_of_xi: no beta in {0.05, ..., 0.95} qualifies; xi is too concentrated. "
        "Multiply xi by an independent Bernoulli(1/2) variable and rescale it to unit second moment first.");
}

double beta_of_xi(const XiSpec& xi, std::size_t samples, std::uint64_t seed) {
    return calibrate_beta(xi, samples, seed).beta;
}

}  // namespace sclaw
