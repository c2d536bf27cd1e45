#include "rlchoice/preference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "rlchoice/errors.hpp"
#include "rlchoice/learning.hpp"
#include "rlchoice/numeric.hpp"

namespace rlchoice {

namespace {

constexpr double kIndifferenceTol = 1e-12;

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("beta must be a positive finite number");
    }
}

// E over `self` of 1 / (1 + e^{(E[self] + self - E[other]) / beta})
double switch_away(const Lottery& self, double mean_self, double mean_other, double beta) {
    double acc = 0.0;
    for (const auto& o : self.outcomes()) {
        acc += o.prob * numeric::logistic(-(mean_self + o.payoff - mean_other) / beta);
    }
    return acc;
}

Relation classify(double lhs, double rhs) {
    if (std::abs(lhs - rhs) <= kIndifferenceTol * std::max({1.0, std::abs(lhs), std::abs(rhs)})) {
        return Relation::indifferent;
    }
    return lhs < rhs ? Relation::first_strict : Relation::second_strict;
}

// Advantage of `first` over `second`: positive when first is strictly better.
double advantage(const Lottery& first, const Lottery& second, double beta) {
    const auto v = prefers(first, second, beta);
    return v.rhs - v.lhs;
}

}  // namespace

const char* to_string(Relation r) noexcept {
    switch (r) {
        case Relation::first_strict: return "first_strict";
        case Relation::second_strict: return "second_strict";
        case Relation::indifferent: return "indifferent";
    }
    return "?";
}

PreferenceVerdict prefers(const Lottery& x, const Lottery& y, double beta) {
    check_beta(beta);
    const double ex = expectation(x);
    const double ey = expectation(y);
    const double lhs = switch_away(x, ex, ey, beta);
    const double rhs = switch_away(y, ey, ex, beta);
    return {classify(lhs, rhs), lhs, rhs, beta};
}

bool equivalence_with_rl1(const Lottery& x, const Lottery& y, double beta) {
    const auto verdict = prefers(x, y, beta);

    ModelSpec spec;
    spec.alternatives = {{"X", expectation(x), x}, {"Y", expectation(y), y}};
    spec.response = ResponseFunction::identity();
    spec.scale = ScaleFunction(beta);
    spec.memory = 1;
    const double ratio = binary_stationary_ratio(spec);
    const double mu1 = ratio / (1.0 + ratio);
    const double mu2 = 1.0 / (1.0 + ratio);
    Relation chain;
    if (std::abs(mu1 - mu2) <= kIndifferenceTol * std::max({1.0, mu1, mu2})) {
        chain = Relation::indifferent;
    } else {
        chain = mu1 > mu2 ? Relation::first_strict : Relation::second_strict;
    }
    return chain == verdict.relation;
}

double certainty_equivalent_gap(const Lottery& x, double beta, double c) {
    const double ex = expectation(x);
    const double sure = numeric::logistic(-(2.0 * c - ex) / beta);
    return sure - switch_away(x, ex, c, beta);
}

double certainty_equivalent(const Lottery& x, double beta, double tolerance) {
    check_beta(beta);
    if (x.degenerate()) return x.min_payoff();
    numeric::BisectOptions options;
    options.tolerance = tolerance;
    return numeric::bisect([&](double c) { return certainty_equivalent_gap(x, beta, c); },
                           x.min_payoff() - 1.0, x.max_payoff() + 1.0, options);
}

std::vector<Lottery> TwoPointGrid::lotteries() const {
    std::vector<Lottery> out;
    out.reserve(a.size() * b.size() * p.size());
    for (double av : a) {
        for (double bv : b) {
            for (double pv : p) out.push_back(Lottery::two_point(av, bv, pv));
        }
    }
    return out;
}

std::string TwoPointGrid::describe() const {
    auto span_of = [](const std::vector<double>& v) {
        std::ostringstream s;
        if (v.empty()) return std::string("{}");
        s << "{" << v.front() << ".." << v.back() << ", " << v.size() << " values}";
        return s.str();
    };
    return "L(a,b:p) with a in " + span_of(a) + ", b in " + span_of(b) + ", p in " + span_of(p);
}

IntransitivitySearch find_intransitive_triple(std::span<const Lottery> family, double beta) {
    check_beta(beta);
    const std::size_t n = family.size();
    IntransitivitySearch result;
    result.family_size = n;
    if (n < 3) return result;

    // better[i] holds j with i > j; worse[i] holds j with j > i.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> better(n * words, 0);
    std::vector<std::uint64_t> worse(n * words, 0);
    std::vector<double> means(n);
    for (std::size_t i = 0; i < n; ++i) means[i] = expectation(family[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double lhs = switch_away(family[i], means[i], means[j], beta);
            const double rhs = switch_away(family[j], means[j], means[i], beta);
            const Relation r = classify(lhs, rhs);
            if (r == Relation::first_strict) {
                better[i * words + j / 64] |= 1ULL << (j % 64);
                worse[j * words + i / 64] |= 1ULL << (i % 64);
            } else if (r == Relation::second_strict) {
                better[j * words + i / 64] |= 1ULL << (i % 64);
                worse[i * words + j / 64] |= 1ULL << (j % 64);
            }
        }
    }

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (!(better[x * words + y / 64] >> (y % 64) & 1ULL)) continue;
            // z with z > x and y > z
            for (std::size_t w = 0; w < words; ++w) {
                const std::uint64_t hits = worse[x * words + w] & better[y * words + w];
                if (hits == 0) continue;
                const std::size_t z = w * 64 + static_cast<std::size_t>(std::countr_zero(hits));
                result.triple = IntransitiveTriple{family[x],
                                                   family[y],
                                                   family[z],
                                                   prefers(family[x], family[y], beta),
                                                   prefers(family[z], family[x], beta),
                                                   prefers(family[y], family[z], beta),
                                                   x,
                                                   y,
                                                   z};
                return result;
            }
        }
    }
    return result;
}

AllaisResult allais_curves(double beta, double mix_weight, std::span<const double> x_grid,
                           std::span<const double> c_grid) {
    check_beta(beta);
    if (!(mix_weight > 0.0 && mix_weight < 1.0)) {
        throw ConfigError("mix weight must lie in (0,1)");
    }
    AllaisResult out;
    out.raw.beta = out.mixed.beta = beta;
    out.raw.family = "L(c:1) ~ L(1,0:x)";
    out.mixed.family = "L(c,0:w) ~ L(1,0:w*x)";
    const Lottery nothing = Lottery::sure(0.0);

    for (double x : x_grid) {
        const Lottery gamble = Lottery::two_point(1.0, 0.0, x);
        const Lottery mixed_gamble = mix(gamble, nothing, mix_weight);
        try {
            out.raw.grid.push_back(x);
            out.raw.values.push_back(certainty_equivalent(gamble, beta));
            out.mixed.grid.push_back(x);
            out.mixed.values.push_back(numeric::bisect(
                [&](double c) {
                    return advantage(mix(Lottery::sure(c), nothing, mix_weight), mixed_gamble, beta);
                },
                0.0, 1.0));
        } catch (const SolverError& e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "Allais curve solve failed at x = " << x << ": " << e.what();
            throw SolverError(msg.str());
        }
    }

    for (double x : x_grid) {
        const Lottery gamble = Lottery::two_point(1.0, 0.0, x);
        const Lottery mixed_gamble = mix(gamble, nothing, mix_weight);
        for (double c : c_grid) {
            const Relation raw = prefers(Lottery::sure(c), gamble, beta).relation;
            const Relation mixed =
                prefers(mix(Lottery::sure(c), nothing, mix_weight), mixed_gamble, beta).relation;
            const bool flip = (raw == Relation::first_strict && mixed == Relation::second_strict) ||
                              (raw == Relation::second_strict && mixed == Relation::first_strict);
            if (flip) out.reversal.emplace_back(c, x);
        }
    }
    return out;
}

GainLossResult gain_loss_curves(double beta, std::span<const double> x_grid) {
    check_beta(beta);
    GainLossResult out;
    out.gains.beta = out.losses.beta = beta;
    out.gains.family = "L(1,0:x)";
    out.losses.family = "L(-1,0:x)";
    for (double x : x_grid) {
        out.gains.grid.push_back(x);
        out.gains.values.push_back(certainty_equivalent(Lottery::two_point(1.0, 0.0, x), beta));
        out.losses.grid.push_back(x);
        out.losses.values.push_back(certainty_equivalent(Lottery::two_point(-1.0, 0.0, x), beta));
        out.expected_gains.push_back(x);
        out.expected_losses.push_back(-x);
    }
    return out;
}

}  // namespace rlchoice
