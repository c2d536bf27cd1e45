#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rlchoice/lottery.hpp"
#include "rlchoice/model.hpp"

namespace rlchoice {

/// Choice among lotteries X_1..X_q by a memory-one learner with priors
/// E[u(X_i)] and response increments alpha * u(X_i), scale e^{v/beta}.
struct DeviationSpec {
    std::vector<Lottery> lotteries;
    ResponseFunction utility = ResponseFunction::identity();
    double alpha = 0.0;
    double beta = 1.0;

    void validate() const;
    std::vector<double> priors() const;
    /// The equivalent learning model (memory 1, response alpha * u).
    ModelSpec as_model() const;
};

std::vector<double> deviation_choice_probs(const DeviationSpec& spec);

/// Argmax of deviation_choice_probs; ties go to the lowest index.
std::size_t choose(const DeviationSpec& spec);

enum class LimitConstant { paper, q_dependent };

/// E[1 / (c + e^{rho u(X)})] with c = 1 (LimitConstant::paper) or c = q - 1 (q_dependent).
double limit_score(const Lottery& x, const ResponseFunction& u, double rho,
                   LimitConstant constant = LimitConstant::paper, std::size_t q = 2);

/// Argmin of limit_score over the menu; ties go to the lowest index.
std::size_t limit_choose(std::span<const Lottery> menu, const ResponseFunction& u, double rho,
                         LimitConstant constant = LimitConstant::paper);

/// u(s) = log(1 + s) - log(1 + s0)
ResponseFunction framed_log_utility(double s0);

/// u(s) = log(4 + s) - log 8, zero at s = 4.
ResponseFunction insurance_utility();

/// Sure payoff with the same limit score as `x` (binary comparison, q = 2).
double limit_certainty_equivalent(const Lottery& x, const ResponseFunction& u, double rho,
                                  LimitConstant constant = LimitConstant::paper);

/// Sure payoff with u(c) = E[u(X)].
double eu_certainty_equivalent(const Lottery& x, const ResponseFunction& u);

struct FramedCePoint {
    double x;        // expected utility E[u(X)]
    double p;        // probability of the upper payoff
    double c_limit;  // certainty equivalent under the limit principle
    double c_eu;     // certainty equivalent under expected utility
};

struct FramedCeCurves {
    double reference;
    double rho;
    std::vector<FramedCePoint> gains;   // L(2 s0, s0 : p)
    std::vector<FramedCePoint> losses;  // L(s0, 0 : p)
};

/// Certainty-equivalent curves for the framed log utility with reference
/// s0, lotteries parametrized by expected utility x on `points` evenly
/// spaced values per region.
FramedCeCurves framed_ce_curves(double s0, double rho, std::size_t points,
                                LimitConstant constant = LimitConstant::paper);

enum class LossProbConvention {
    table1,   // payoff y - a p D carries probability p
    natural,  // the loss branch y - D + (1 - p) a D carries probability p
};

struct InsuranceProblem {
    double income = 0.0;
    double loss = 2.0;
    double loss_prob = 0.5;
    std::vector<double> coverage;

    double premium_rate() const noexcept { return loss_prob * loss; }
    void validate() const;
};

/// Seven coverage levels -1, -0.5, ..., 2.
std::vector<double> default_coverage_menu();
/// Coverage levels from -1 to 2 in steps of `step`.
std::vector<double> coverage_grid(double step);

Lottery insurance_lottery(const InsuranceProblem& problem, double a,
                          LossProbConvention convention = LossProbConvention::natural);

enum class DemandVariant { eu, limit, full };

struct DemandSettings {
    DemandVariant variant = DemandVariant::full;
    ResponseFunction utility = insurance_utility();
    double alpha = 0.4;
    double beta = 1.0;
    double rho = 0.4;
    double loss = 2.0;
    LimitConstant limit_constant = LimitConstant::paper;
    LossProbConvention convention = LossProbConvention::natural;
    std::vector<double> menu = default_coverage_menu();
};

struct PhaseMap {
    std::vector<double> incomes;
    std::vector<double> loss_probs;
    /// Chosen coverage, row-major with income as the outer index.
    std::vector<double> chosen;

    double at(std::size_t income_index, std::size_t prob_index) const {
        return chosen[income_index * loss_probs.size() + prob_index];
    }
};

PhaseMap insurance_demand_map(std::span<const double> incomes, std::span<const double> loss_probs,
                              const DemandSettings& settings);

const char* to_string(DemandVariant v) noexcept;
const char* to_string(LimitConstant c) noexcept;
const char* to_string(LossProbConvention c) noexcept;

}  // namespace rlchoice
