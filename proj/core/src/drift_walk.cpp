#include <algorithm>
#include <cmath>
#include <limits>

#include "sclaw/errors.hpp"
#include "sclaw/process.hpp"

namespace sclaw {

WalkPolicy make_policy(WalkAdversary a) {
    switch (a) {
        case WalkAdversary::always_up:
            return [](const WalkView&, StreamRng&) { return 2LL; };
        case WalkAdversary::stay:
            return [](const WalkView&, StreamRng&) { return 0LL; };
        case WalkAdversary::random:
            return [](const WalkView& v, StreamRng& rng) {
                const long long move = static_cast<long long>(rng.below(4)) - 1;  // -1/2, 0, +1/2, +1
                return v.twice_y + move < 0 ? 0LL : move;
            };
    }
    throw ContractViolation("make_policy: unknown adversary");
}

WalkAdversary adversary_from_name(const std::string& name) {
    if (name == "always-up") return WalkAdversary::always_up;
    if (name == "random") return WalkAdversary::random;
    if (name == "stay") return WalkAdversary::stay;
    throw ContractViolation("unknown adversary '" + name + "' (expected always-up, random or stay)");
}

std::string to_string(WalkAdversary a) {
    switch (a) {
        case WalkAdversary::always_up: return "always-up";
        case WalkAdversary::random: return "random";
        case WalkAdversary::stay: return "stay";
    }
    return "unknown";
}

DriftWalkResult simulate_drift_walk(const DriftWalkParams& params, const WalkPolicy& policy) {
    const std::size_t horizon = params.horizon;
    require(horizon >= 1, "drift walk: horizon must be >= 1");
    require(params.q >= 0.0 && params.q < 1.0, "drift walk: q must lie in [0, 1)");
    require(params.y0 >= 0.0 && params.y0 <= static_cast<double>(horizon) / 8.0,
            "drift walk: need 0 <= Y0 <= T/8");
    require(std::floor(2.0 * params.y0) == 2.0 * params.y0, "drift walk: Y0 must be a multiple of 1/2");
    require(params.trials >= 1, "drift walk: need at least one trial");
    require(params.divisor > 0.0, "drift walk: divisor must be positive");

    const double log_q = params.q > 0.0 ? std::log(params.q) : 0.0;
    const double tt = static_cast<double>(horizon);
    // Z_s = q^{(T - s)/divisor} q^{-Y_s / 2}; undefined at q = 0.
    auto z_of = [&](std::size_t s, long long twice_y) {
        return std::exp(((tt - static_cast<double>(s)) / params.divisor - static_cast<double>(twice_y) / 4.0) * log_q);
    };

    std::vector<double> z_sum(horizon + 1, 0.0);
    double z_final_sq = 0.0;
    std::size_t zeros = 0;
    for (std::size_t trial = 0; trial < params.trials; ++trial) {
        StreamRng rng(params.seed, Domain::walk, trial);
        long long y = static_cast<long long>(2.0 * params.y0);
        z_sum[0] += z_of(0, y);
        for (std::size_t s = 0; s < horizon; ++s) {
            const double threshold = std::floor((tt - static_cast<double>(s)) / params.divisor);
            const bool drift = static_cast<double>(y) / 2.0 >= threshold;
            if (drift && !(rng.uniform() < params.q)) {
                y = std::max(0LL, y - 1);
            } else {
                const long long move = policy(WalkView{s, horizon, y, drift}, rng);
                require(move <= 2, "drift walk: adversary moved up by more than 1");
                require(y + move >= 0, "drift walk: adversary moved below 0");
                y += move;
            }
            z_sum[s + 1] += z_of(s + 1, y);
        }
        zeros += (y == 0);
        const double zt = z_of(horizon, y);
        z_final_sq += zt * zt;
    }

    DriftWalkResult out;
    const double n = static_cast<double>(params.trials);
    out.trials = params.trials;
    out.p_zero = static_cast<double>(zeros) / n;
    out.p_zero_std_error = std::sqrt(out.p_zero * (1.0 - out.p_zero) / n);
    out.guaranteed_floor = 1.0 - 4.0 * std::pow(params.q, 0.125);
    if (params.q == 0.0) {
        out.mean_z_final = out.z_std_error = out.max_mean_z = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.mean_z_final = z_sum[horizon] / n;
    out.z_std_error = std::sqrt(std::max(0.0, z_final_sq / n - out.mean_z_final * out.mean_z_final) / n);
    out.max_mean_z = *std::max_element(z_sum.begin(), z_sum.end()) / n;
    return out;
}

}  // namespace sclaw
