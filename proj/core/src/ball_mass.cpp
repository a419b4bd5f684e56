#include "sclaw/ball_mass.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

using cplx = std::complex<double>;

struct Cell {
    long long x;
    long long y;
    auto operator<=>(const Cell&) const = default;
};

double quantile(std::vector<double> v, double q) {
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

bool less_cplx(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// Largest multiplicity of a single value.
BallMass point_mass(std::span<const cplx> samples) {
    std::vector<cplx> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), less_cplx);
    std::size_t best = 0;
    cplx where{};
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        if (j - i > best) best = j - i, where = s[i];
        i = j;
    }
    const double n = static_cast<double>(s.size());
    const double m = static_cast<double>(best) / n;
    return {m, std::sqrt(m * (1.0 - m) / n), where};
}

}  // namespace

BallMass max_ball_mass(std::span<const cplx> samples, const BallMassOptions& opt) {
    require(!samples.empty(), "max_ball_mass: no samples");
    require(opt.radius >= 0.0 && std::isfinite(opt.radius), "max_ball_mass: radius must be finite and >= 0");
    require(opt.trim >= 0.0 && opt.trim < 0.5, "max_ball_mass: trim must lie in [0, 0.5)");
    require(opt.pitch_factor > 0.0, "max_ball_mass: pitch factor must be positive");
    if (opt.radius == 0.0) {
        if (opt.kind == BallKind::open) return {0.0, 0.0, samples[0]};
        return point_mass(samples);
    }

    const double r = opt.radius;
    const double r2 = r * r;
    struct Point {
        Cell cell;
        cplx z;
    };
    std::vector<Point> pts;
    pts.reserve(samples.size());
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(samples.size());
    im.reserve(samples.size());
    for (const cplx& z : samples) {
        pts.push_back({{static_cast<long long>(std::floor(z.real() / r)),
                        static_cast<long long>(std::floor(z.imag() / r))},
                       z});
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.cell < b.cell; });

    auto count_at = [&](cplx c) {
        const long long cx = static_cast<long long>(std::floor(c.real() / r));
        const long long cy = static_cast<long long>(std::floor(c.imag() / r));
        std::size_t hits = 0;
        for (long long dx = -1; dx <= 1; ++dx) {
            const auto lo = std::lower_bound(pts.begin(), pts.end(), Cell{cx + dx, cy - 1},
                                             [](const Point& p, const Cell& k) { return p.cell < k; });
            const auto hi = std::lower_bound(lo, pts.end(), Cell{cx + dx, cy + 2},
                                             [](const Point& p, const Cell& k) { return p.cell < k; });
            for (auto it = lo; it != hi; ++it) {
                const double dist2 = std::norm(it->z - c);
                if (opt.kind == BallKind::open ? dist2 < r2 : dist2 <= r2) ++hits;
            }
        }
        return hits;
    };

    std::vector<cplx> centers;
    const double pitch = opt.pitch_factor * r;
    const double re_lo = quantile(re, opt.trim);
    const double re_hi = quantile(re, 1.0 - opt.trim);
    const double im_lo = quantile(im, opt.trim);
    const double im_hi = quantile(im, 1.0 - opt.trim);
    const auto steps = [&](double lo, double hi) {
        return static_cast<std::size_t>(std::floor((hi - lo) / pitch)) + 1;
    };
    const std::size_t nx = steps(re_lo, re_hi);
    const std::size_t ny = steps(im_lo, im_hi);
    require(nx * ny <= 50'000'000, "max_ball_mass: center grid too fine for the sample spread");
    for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = 0; b < ny; ++b)
            centers.emplace_back(re_lo + static_cast<double>(a) * pitch, im_lo + static_cast<double>(b) * pitch);

    // Discrete laws: add the atoms themselves.
    std::vector<cplx> distinct(samples.begin(), samples.end());
    std::sort(distinct.begin(), distinct.end(), less_cplx);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() <= 64) centers.insert(centers.end(), distinct.begin(), distinct.end());

    std::size_t best = 0;
    cplx where = centers.front();
    for (const cplx& c : centers) {
        const std::size_t h = count_at(c);
        if (h > best) best = h, where = c;
    }
    const double n = static_cast<double>(samples.size());
    const double m = static_cast<double>(best) / n;
    return {m, std::sqrt(m * (1.0 - m) / n), where};
}

}  // namespace sclaw
