#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rlchoice/lottery.hpp"

namespace rlchoice {

enum class Relation { first_strict, second_strict, indifferent };

const char* to_string(Relation r) noexcept;

/// X is strictly preferred when lhs < rhs, where
///   lhs = E[ e^{EY/b} / (e^{EY/b} + e^{(EX + X)/b}) ]
///   rhs = E[ e^{EX/b} / (e^{EX/b} + e^{(EY + Y)/b}) ]
/// are the chances of switching away from X and from Y in the two-alternative
/// memory-one learning chain. Indifferent when |lhs - rhs| <= 1e-12 * max(1, |lhs|, |rhs|).
struct PreferenceVerdict {
    Relation relation;
    double lhs;
    double rhs;
    double beta;
};

PreferenceVerdict prefers(const Lottery& x, const Lottery& y, double beta);

/// Verdict of `prefers` agrees with the sign of mu(1) - mu(2) of the
/// two-alternative chain with priors E[X], E[Y], identity response and scale beta.
bool equivalence_with_rl1(const Lottery& x, const Lottery& y, double beta);

/// Sure payoff c with L(c:1) ~ X, by bisection on
///   g(c) = e^{EX/b} / (e^{EX/b} + e^{2c/b}) - E[ e^{c/b} / (e^{c/b} + e^{(EX + X)/b}) ].
/// Degenerate lotteries return their payoff. Throws SolverError if no bracket is found.
double certainty_equivalent(const Lottery& x, double beta, double tolerance = 1e-12);

/// The function g above; exposed so callers can check residuals.
double certainty_equivalent_gap(const Lottery& x, double beta, double c);

struct IndifferenceCurve {
    std::vector<double> grid;
    std::vector<double> values;
    double beta = 0.0;
    std::string family;
};

/// Two-point lotteries L(a,b:p) over the Cartesian product of the grids,
/// enumerated with a outermost and p innermost.
struct TwoPointGrid {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> p;

    std::vector<Lottery> lotteries() const;
    std::string describe() const;
};

/// Cycle X > Y, Z > X, Y > Z.
struct IntransitiveTriple {
    Lottery x;
    Lottery y;
    Lottery z;
    PreferenceVerdict x_over_y;
    PreferenceVerdict z_over_x;
    PreferenceVerdict y_over_z;
    std::size_t x_index;
    std::size_t y_index;
    std::size_t z_index;
};

struct IntransitivitySearch {
    std::optional<IntransitiveTriple> triple;
    std::size_t family_size = 0;
};

/// Exhaustive search over ordered triples of `family`; returns the first
/// cycle in lexicographic (x, y, z) index order.
IntransitivitySearch find_intransitive_triple(std::span<const Lottery> family, double beta);

struct AllaisResult {
    IndifferenceCurve raw;    // L(c:1) ~ L(1,0:x)
    IndifferenceCurve mixed;  // L(c,0:w) ~ L(1,0:w x)
    std::vector<std::pair<double, double>> reversal;  // (c, x) cells
};

/// Indifference curves of the sure-vs-lottery pair and of the same pair
/// mixed with L(0:1) at weight 1 - mix_weight, and the (c, x) cells of
/// c_grid x x_grid where the strict preference flips between the two.
AllaisResult allais_curves(double beta, double mix_weight, std::span<const double> x_grid,
                           std::span<const double> c_grid);

struct GainLossResult {
    IndifferenceCurve gains;   // CE of L(1,0:x)
    IndifferenceCurve losses;  // CE of L(-1,0:x)
    std::vector<double> expected_gains;   // x
    std::vector<double> expected_losses;  // -x
};

GainLossResult gain_loss_curves(double beta, std::span<const double> x_grid);

}  // namespace rlchoice
