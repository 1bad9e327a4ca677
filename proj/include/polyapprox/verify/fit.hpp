#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace polyapprox::verify {

// Outcome of comparing a scan of lhs/rhs pairs against a hypothesized bound
// lhs <= c * rhs.  `c` is the smallest constant that makes every pair hold;
// `slope` is the least-squares slope of log(lhs/rhs) against log(x) and
// should hover near zero when the two sides share the same rate.
struct FitResult {
    double c = 0.0;
    double slope = 0.0;
};

// Fits lhs <= c * rhs over a scan parameterized by xs (degrees n or scales t).
// Requires equally sized nonempty inputs, rhs > 0 and xs > 0 throughout.
// Pairs with lhs <= 0 still feed `c` but are left out of the slope fit:
// a vanishing left side only strengthens the inequality and has no log.
inline FitResult fit_constant(std::span<const double> lhs, std::span<const double> rhs,
                              std::span<const double> xs) {
    if (lhs.empty()) throw std::invalid_argument("fit_constant: empty input");
    if (lhs.size() != rhs.size() || lhs.size() != xs.size())
        throw std::invalid_argument("fit_constant: size mismatch");

    FitResult res;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        if (!(rhs[k] > 0.0)) throw std::invalid_argument("fit_constant: rhs must be positive");
        if (!(xs[k] > 0.0)) throw std::invalid_argument("fit_constant: xs must be positive");
        const double ratio = lhs[k] / rhs[k];
        if (ratio > res.c) res.c = ratio;
        if (!(ratio > 0.0)) continue;
        const double lx = std::log(xs[k]);
        const double ly = std::log(ratio);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++kept;
    }
    if (kept >= 2) {
        const double n = static_cast<double>(kept);
        const double denom = n * sxx - sx * sx;
        if (std::abs(denom) > 1e-14) res.slope = (n * sxy - sx * sy) / denom;
    }
    return res;
}

// Plain least-squares slope of ys against xs in log-log coordinates.
// Used for decay-rate checks where only the exponent matters.
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two matching points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!(xs[k] > 0.0) || !(ys[k] > 0.0))
            throw std::invalid_argument("loglog_slope: inputs must be positive");
        const double lx = std::log(xs[k]);
        const double ly = std::log(ys[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(xs.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) throw std::invalid_argument("loglog_slope: degenerate xs");
    return (n * sxy - sx * sy) / denom;
}

// max/min of a positive sequence; gates "the fitted constant is stable".
inline double spread(std::span<const double> vals) {
    if (vals.empty()) throw std::invalid_argument("spread: empty input");
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        if (!(v > 0.0)) throw std::invalid_argument("spread: values must be positive");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

}  // namespace polyapprox::verify
