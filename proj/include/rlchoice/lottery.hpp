#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rlchoice {

struct Outcome {
    double payoff;
    double prob;

    bool operator==(const Outcome&) const = default;
};

/// A finite discrete distribution over monetary payoffs.
///
/// Construction normalizes: outcomes are sorted by payoff, payoffs equal to
/// within 1e-12 (relative) are merged, and zero-probability entries dropped.
/// Probabilities must be nonnegative, finite and sum to 1 within 1e-12; they
/// are rescaled to sum to exactly 1 in floating point after validation.
class Lottery {
public:
    explicit Lottery(std::vector<Outcome> outcomes);

    /// L(c:1)
    static Lottery sure(double payoff);
    /// L(a,b:p): pays a with probability p and b with probability 1-p.
    static Lottery two_point(double a, double b, double p);

    std::span<const Outcome> outcomes() const noexcept { return outcomes_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    bool degenerate() const noexcept { return outcomes_.size() == 1; }

    double min_payoff() const noexcept { return outcomes_.front().payoff; }
    double max_payoff() const noexcept { return outcomes_.back().payoff; }

    /// Probability mass at or below t.
    double cdf(double t) const noexcept;

    bool operator==(const Lottery&) const = default;

private:
    std::vector<Outcome> outcomes_;
};

double expectation(const Lottery& lottery);

/// Sum of p_j * f(s_j). Throws DomainError if f is non-finite at any payoff.
double expect_fn(const Lottery& lottery, const std::function<double(double)>& f);

/// Compound lottery: `first` with probability w, `second` with 1-w.
Lottery mix(const Lottery& first, const Lottery& second, double w);

/// First-order stochastic dominance: F_X(t) <= F_Y(t) at every support point
/// of either lottery (with a 1e-12 allowance on accumulated probabilities).
bool fosd_dominates(const Lottery& x, const Lottery& y);

}  // namespace rlchoice
