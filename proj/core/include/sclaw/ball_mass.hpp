#pragma once

// Largest empirical probability mass of a disc of fixed radius, maximized over a
// grid of centers. Shared by the beta calibration and the Levy concentration estimator.

#include <complex>
#include <span>

namespace sclaw {

enum class BallKind { open, closed };

struct BallMassOptions {
    double radius = 0.0;
    BallKind kind = BallKind::open;
    /// Fraction trimmed from each tail when building the center box (0.01 = 1%-99% box).
    double trim = 0.01;
    /// Grid pitch as a fraction of the radius.
    double pitch_factor = 0.25;
};

struct BallMass {
    double mass = 0.0;
    double std_error = 0.0;  // binomial standard error of `mass`
    std::complex<double> center{};
};

/// Every sample point is also tried as a center when the samples take at most a
/// few distinct values, so atoms are never missed by the grid.
BallMass max_ball_mass(std::span<const std::complex<double>> samples, const BallMassOptions& opt);

}  // namespace sclaw
