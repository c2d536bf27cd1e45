#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace rlchoice::numeric {

/// 1 / (1 + e^{-x}) without overflow.
inline double logistic(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(1 + e^x)
inline double softplus(double x) noexcept {
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// log(e^x - 1) for x >= 0; -inf at 0.
inline double log_expm1(double x) noexcept {
    if (x > 35.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

double log_sum_exp(std::span<const double> values) noexcept;

struct BisectOptions {
    double tolerance = 1e-12;
    int max_expansions = 60;
    int max_iterations = 400;
};

/// Root of a function that changes sign once on the real line, starting
/// from [lo, hi]. The bracket is widened geometrically about its center
/// until the endpoint values differ in sign. Throws SolverError when the
/// expansion budget runs out or f is not finite at a probe point.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectOptions& options = {});

}  // namespace rlchoice::numeric
