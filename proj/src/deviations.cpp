#include "rlchoice/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rlchoice/errors.hpp"
#include "rlchoice/numeric.hpp"

namespace rlchoice {

void DeviationSpec::validate() const {
    if (lotteries.empty()) {
        throw ConfigError("deviation model needs at least one lottery");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("alpha must be a nonnegative finite number");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("beta must be a positive finite number");
    }
}

std::vector<double> DeviationSpec::priors() const {
    std::vector<double> out;
    out.reserve(lotteries.size());
    for (const auto& x : lotteries) {
        out.push_back(expect_fn(x, [&](double s) { return utility(s); }));
    }
    return out;
}

ModelSpec DeviationSpec::as_model() const {
    validate();
    const auto u0 = priors();
    ModelSpec spec;
    for (std::size_t i = 0; i < lotteries.size(); ++i) {
        spec.alternatives.push_back({"X" + std::to_string(i + 1), u0[i], lotteries[i]});
    }
    spec.response = utility.scaled(alpha);
    spec.scale = ScaleFunction(beta);
    spec.memory = 1;
    return spec;
}

std::vector<double> deviation_choice_probs(const DeviationSpec& spec) {
    spec.validate();
    const auto u0 = spec.priors();
    const std::size_t q = u0.size();

    // Every exponent is shifted by the largest prior so K0 lies in [1, q].
    const double top = *std::max_element(u0.begin(), u0.end()) / spec.beta;
    std::vector<double> phi0(q);
    double k0 = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        phi0[i] = std::exp(u0[i] / spec.beta - top);
        k0 += phi0[i];
    }

    std::vector<double> weight(q);
    double total = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        double e = 0.0;
        for (const auto& o : spec.lotteries[i].outcomes()) {
            const double phi = std::exp((u0[i] + spec.alpha * spec.utility(o.payoff)) / spec.beta - top);
            e += o.prob * k0 / (k0 + phi - phi0[i]);
        }
        weight[i] = phi0[i] / e;
        if (!std::isfinite(weight[i])) {
            throw SolverError("deviation model weight overflowed; alpha * u / beta is too large");
        }
        total += weight[i];
    }
    for (double& w : weight) w /= total;
    return weight;
}

std::size_t choose(const DeviationSpec& spec) {
    const auto p = deviation_choice_probs(spec);
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

double limit_score(const Lottery& x, const ResponseFunction& u, double rho,
                   LimitConstant constant, std::size_t q) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ConfigError("rho must be a positive finite number");
    }
    double c = 1.0;
    if (constant == LimitConstant::q_dependent) {
        if (q < 2) throw ConfigError("q-dependent limit score needs q >= 2");
        c = static_cast<double>(q - 1);
    }
    return expect_fn(x, [&](double s) { return 1.0 / (c + std::exp(rho * u(s))); });
}

std::size_t limit_choose(std::span<const Lottery> menu, const ResponseFunction& u, double rho,
                         LimitConstant constant) {
    if (menu.empty()) throw ConfigError("menu is empty");
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < menu.size(); ++i) {
        const double s = limit_score(menu[i], u, rho, constant, menu.size());
        if (s < best_score) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

ResponseFunction framed_log_utility(double s0) { return ResponseFunction::framed_log(s0, 1.0); }

ResponseFunction insurance_utility() { return ResponseFunction::framed_log(4.0, 4.0); }

double limit_certainty_equivalent(const Lottery& x, const ResponseFunction& u, double rho,
                                  LimitConstant constant) {
    if (x.degenerate()) return x.min_payoff();
    const double target = limit_score(x, u, rho, constant, 2);
    return numeric::bisect(
        [&](double c) { return limit_score(Lottery::sure(c), u, rho, constant, 2) - target; },
        x.min_payoff(), x.max_payoff());
}

double eu_certainty_equivalent(const Lottery& x, const ResponseFunction& u) {
    if (x.degenerate()) return x.min_payoff();
    const double target = expect_fn(x, [&](double s) { return u(s); });
    return numeric::bisect([&](double c) { return u(c) - target; }, x.min_payoff(),
                           x.max_payoff());
}

FramedCeCurves framed_ce_curves(double s0, double rho, std::size_t points,
                                LimitConstant constant) {
    if (points < 2) throw ConfigError("framed CE curves need at least two points");
    const auto u = framed_log_utility(s0);
    FramedCeCurves out{s0, rho, {}, {}};

    auto sweep = [&](double low, double high, std::vector<FramedCePoint>& dest) {
        const double u_low = u(low);
        const double u_high = u(high);
        for (std::size_t n = 0; n < points; ++n) {
            const double p = static_cast<double>(n) / static_cast<double>(points - 1);
            const double x = u_low + p * (u_high - u_low);
            const Lottery lottery = Lottery::two_point(high, low, p);
            dest.push_back({x, p, limit_certainty_equivalent(lottery, u, rho, constant),
                            eu_certainty_equivalent(lottery, u)});
        }
    };
    sweep(0.0, s0, out.losses);
    sweep(s0, 2.0 * s0, out.gains);
    return out;
}

void InsuranceProblem::validate() const {
    if (!std::isfinite(income)) throw ConfigError("income must be finite");
    if (!(loss > 0.0) || !std::isfinite(loss)) throw ConfigError("loss must be positive");
    if (!(loss_prob > 0.0 && loss_prob < 1.0)) {
        throw ConfigError("loss probability must lie in (0,1)");
    }
    for (double a : coverage) {
        if (!(a >= -1.0 && a <= 2.0)) throw ConfigError("coverage levels must lie in [-1,2]");
    }
}

std::vector<double> default_coverage_menu() { return {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0}; }

std::vector<double> coverage_grid(double step) {
    if (!(step > 0.0) || step > 3.0) throw ConfigError("coverage step must lie in (0,3]");
    const auto n = static_cast<std::size_t>(std::floor(3.0 / step + 1e-9));
    std::vector<double> out;
    for (std::size_t i = 0; i <= n; ++i) out.push_back(-1.0 + static_cast<double>(i) * step);
    // strip accumulated rounding so levels like 1 and 0.93 come out exact
    for (double& a : out) a = std::round(a * 1e9) / 1e9;
    return out;
}

Lottery insurance_lottery(const InsuranceProblem& problem, double a,
                          LossProbConvention convention) {
    const double y = problem.income;
    const double d = problem.loss;
    const double p = problem.loss_prob;
    const double premium_branch = y - a * p * d;
    const double loss_branch = y - d + (1.0 - p) * a * d;
    if (convention == LossProbConvention::table1) {
        return Lottery({{premium_branch, p}, {loss_branch, 1.0 - p}});
    }
    return Lottery({{premium_branch, 1.0 - p}, {loss_branch, p}});
}

PhaseMap insurance_demand_map(std::span<const double> incomes, std::span<const double> loss_probs,
                              const DemandSettings& settings) {
    if (settings.menu.empty()) throw ConfigError("coverage menu is empty");
    PhaseMap map;
    map.incomes.assign(incomes.begin(), incomes.end());
    map.loss_probs.assign(loss_probs.begin(), loss_probs.end());
    map.chosen.reserve(incomes.size() * loss_probs.size());

    std::vector<Lottery> menu;
    for (double y : incomes) {
        for (double p : loss_probs) {
            InsuranceProblem problem{y, settings.loss, p, settings.menu};
            problem.validate();
            try {
                menu.clear();
                for (double a : settings.menu) {
                    menu.push_back(insurance_lottery(problem, a, settings.convention));
                }
                std::size_t pick = 0;
                switch (settings.variant) {
                    case DemandVariant::eu: {
                        double best = -std::numeric_limits<double>::infinity();
                        for (std::size_t i = 0; i < menu.size(); ++i) {
                            const double v =
                                expect_fn(menu[i], [&](double s) { return settings.utility(s); });
                            if (v > best) {
                                best = v;
                                pick = i;
                            }
                        }
                        break;
                    }
                    case DemandVariant::limit:
                        pick = limit_choose(menu, settings.utility, settings.rho,
                                            settings.limit_constant);
                        break;
                    case DemandVariant::full:
                        pick = choose(DeviationSpec{menu, settings.utility, settings.alpha,
                                                    settings.beta});
                        break;
                }
                map.chosen.push_back(settings.menu[pick]);
            } catch (const DomainError& e) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "at cell (y = " << y << ", p = " << p << "): " << e.what();
                throw DomainError(msg.str());
            }
        }
    }
    return map;
}

const char* to_string(DemandVariant v) noexcept {
    switch (v) {
        case DemandVariant::eu: return "eu";
        case DemandVariant::limit: return "limit";
        case DemandVariant::full: return "full";
    }
    return "?";
}

const char* to_string(LimitConstant c) noexcept {
    return c == LimitConstant::paper ? "paper" : "q-dependent";
}

const char* to_string(LossProbConvention c) noexcept {
    return c == LossProbConvention::table1 ? "table1" : "natural";
}

}  // namespace rlchoice
