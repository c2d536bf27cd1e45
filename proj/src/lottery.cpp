#include "rlchoice/lottery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlchoice/errors.hpp"

namespace rlchoice {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kPayoffMergeTol = 1e-12;

bool same_payoff(double a, double b) {
    return std::abs(a - b) <= kPayoffMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Lottery::Lottery(std::vector<Outcome> outcomes) {
    double total = 0.0;
    for (const auto& o : outcomes) {
        if (!std::isfinite(o.payoff)) {
            throw ConfigError("lottery payoff is not finite");
        }
        if (!std::isfinite(o.prob) || o.prob < 0.0) {
            std::ostringstream msg;
            msg << "lottery probability " << o.prob << " at payoff " << o.payoff
                << " is not a nonnegative finite number";
            throw ConfigError(msg.str());
        }
        total += o.prob;
    }
    if (std::abs(total - 1.0) > kProbSumTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "lottery probabilities sum to " << total << ", expected 1";
        throw ConfigError(msg.str());
    }

    std::erase_if(outcomes, [](const Outcome& o) { return o.prob == 0.0; });
    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.payoff < b.payoff; });

    for (const auto& o : outcomes) {
        if (!outcomes_.empty() && same_payoff(outcomes_.back().payoff, o.payoff)) {
            outcomes_.back().prob += o.prob;
        } else {
            outcomes_.push_back(o);
        }
    }
    if (outcomes_.empty()) {
        throw ConfigError("lottery has empty support");
    }
    for (auto& o : outcomes_) {
        o.prob /= total;
    }
}

Lottery Lottery::sure(double payoff) { return Lottery({{payoff, 1.0}}); }

Lottery Lottery::two_point(double a, double b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("two-point lottery probability must lie in [0,1]");
    }
    return Lottery({{a, p}, {b, 1.0 - p}});
}

double Lottery::cdf(double t) const noexcept {
    double acc = 0.0;
    for (const auto& o : outcomes_) {
        if (o.payoff > t && !same_payoff(o.payoff, t)) break;
        acc += o.prob;
    }
    return acc;
}

double expectation(const Lottery& lottery) {
    double acc = 0.0;
    for (const auto& o : lottery.outcomes()) {
        acc += o.prob * o.payoff;
    }
    return acc;
}

double expect_fn(const Lottery& lottery, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (const auto& o : lottery.outcomes()) {
        const double v = f(o.payoff);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "function is not finite at payoff " << o.payoff;
            throw DomainError(msg.str());
        }
        acc += o.prob * v;
    }
    return acc;
}

Lottery mix(const Lottery& first, const Lottery& second, double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw ConfigError("mixing weight must lie in [0,1]");
    }
    std::vector<Outcome> out;
    out.reserve(first.size() + second.size());
    for (const auto& o : first.outcomes()) out.push_back({o.payoff, w * o.prob});
    for (const auto& o : second.outcomes()) out.push_back({o.payoff, (1.0 - w) * o.prob});
    return Lottery(std::move(out));
}

bool fosd_dominates(const Lottery& x, const Lottery& y) {
    std::vector<double> points;
    for (const auto& o : x.outcomes()) points.push_back(o.payoff);
    for (const auto& o : y.outcomes()) points.push_back(o.payoff);
    for (double t : points) {
        if (x.cdf(t) > y.cdf(t) + kProbSumTol) return false;
    }
    return true;
}

}  // namespace rlchoice
