#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "rlchoice/deviations.hpp"
#include "rlchoice/errors.hpp"
#include "rlchoice/learning.hpp"

using namespace rlchoice;

TEST_CASE("deviation probabilities equal the memory-one stationary solve") {
    testgen::Gen g(501);
    for (int t = 0; t < 50; ++t) {
        DeviationSpec d;
        const int q = g.integer(2, 4);
        for (int i = 0; i < q; ++i) d.lotteries.push_back(g.lottery(g.integer(1, 3), 0.0, 8.0));
        d.utility = framed_log_utility(g.uniform(1.0, 4.0));
        d.alpha = g.uniform(0.0, 3.0);
        d.beta = g.uniform(0.2, 2.0);
        const auto p = deviation_choice_probs(d);
        const auto exact = exact_marginals(d.as_model(), StateSpaceKind::extended);
        CHECK(testgen::linf(p, exact) <= 1e-10);
    }
}

TEST_CASE("alpha zero is a Luce rule over expected utility") {
    DeviationSpec d;
    d.lotteries = {Lottery::two_point(4, 0, 0.5), Lottery::sure(1.5), Lottery::two_point(3, 1, 0.5)};
    d.utility = framed_log_utility(1.0);
    d.beta = 0.7;
    const auto pr = d.priors();
    const auto p = deviation_choice_probs(d);
    double z = 0;
    for (double u : pr) z += std::exp(u / d.beta);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(std::exp(pr[i] / d.beta) / z));
    CHECK(choose(d) == 2);
}

TEST_CASE("deviation spec validation") {
    DeviationSpec d;
    CHECK_THROWS_AS(deviation_choice_probs(d), ConfigError);
    d.lotteries = {Lottery::sure(0)};
    d.alpha = -1;
    CHECK_THROWS_AS(deviation_choice_probs(d), ConfigError);
    d.alpha = 0;
    d.beta = 0;
    CHECK_THROWS_AS(deviation_choice_probs(d), ConfigError);
    d.beta = 1;
    CHECK(deviation_choice_probs(d) == std::vector<double>{1.0});
    d.lotteries = {Lottery::sure(0), Lottery::sure(-3)};
    d.utility = framed_log_utility(1.0);
    CHECK_THROWS_AS(deviation_choice_probs(d), DomainError);
}

TEST_CASE("limit score by hand") {
    const auto u = ResponseFunction::identity();
    const auto x = Lottery::two_point(1, -1, 0.25);
    const double want = 0.25 / (1 + std::exp(2.0)) + 0.75 / (1 + std::exp(-2.0));
    CHECK(limit_score(x, u, 2.0) == doctest::Approx(want).epsilon(1e-14));
    const double want_q = 0.25 / (2 + std::exp(2.0)) + 0.75 / (2 + std::exp(-2.0));
    CHECK(limit_score(x, u, 2.0, LimitConstant::q_dependent, 3) == doctest::Approx(want_q).epsilon(1e-14));
    CHECK_THROWS_AS(limit_score(x, u, 0.0), ConfigError);
    const std::vector<Lottery> menu{Lottery::sure(0), Lottery::sure(1), x};
    CHECK(limit_choose(menu, u, 1.0) == 1);
    CHECK_THROWS_AS(limit_choose(std::vector<Lottery>{}, u, 1.0), ConfigError);
    CHECK(std::string(to_string(LimitConstant::q_dependent)) == "q-dependent");
}

TEST_CASE("property: large alpha and beta approach the limit principle") {
    testgen::Gen g(502);
    const auto u = ResponseFunction::identity();
    int compared = 0;
    for (int t = 0; t < 200 && compared < 40; ++t) {
        std::vector<Lottery> menu;
        for (int i = 0; i < 2; ++i) menu.push_back(g.lottery(2, -1.0, 1.0));
        const double rho = g.uniform(0.5, 3.0);
        const double s0 = limit_score(menu[0], u, rho), s1 = limit_score(menu[1], u, rho);
        if (std::abs(s0 - s1) < 0.02) continue;
        ++compared;
        const double alpha = 200.0;
        CHECK(choose(DeviationSpec{menu, u, alpha, alpha / rho}) == limit_choose(menu, u, rho));
    }
    CHECK(compared == 40);
}

TEST_CASE("framed utility and certainty equivalents") {
    const auto u = framed_log_utility(2.0);
    CHECK(u(2.0) == doctest::Approx(0.0));
    CHECK(insurance_utility()(4.0) == doctest::Approx(0.0));
    CHECK(insurance_utility()(0.0) == doctest::Approx(std::log(0.5)));
    const auto x = Lottery::two_point(4, 2, 0.5);
    const double c_eu = eu_certainty_equivalent(x, u);
    CHECK(c_eu == doctest::Approx(std::sqrt(5.0 * 3.0) - 1.0));
    const double c_lim = limit_certainty_equivalent(x, u, 5.0);
    CHECK(limit_score(Lottery::sure(c_lim), u, 5.0) == doctest::Approx(limit_score(x, u, 5.0)).epsilon(1e-10));
    CHECK(limit_certainty_equivalent(Lottery::sure(3.0), u, 5.0) == 3.0);
}

TEST_CASE("framed certainty-equivalent curves") {
    const auto c = framed_ce_curves(2.0, 5.0, 11);
    REQUIRE(c.gains.size() == 11);
    CHECK(c.gains.front().c_eu == doctest::Approx(2.0));
    CHECK(c.gains.back().c_eu == doctest::Approx(4.0));
    CHECK(c.losses.front().c_limit == doctest::Approx(0.0));
    for (std::size_t i = 1; i + 1 < c.gains.size(); ++i) {
        // Expected-utility CE under a concave u sits below the mean payoff.
        CHECK(c.gains[i].c_eu < 2.0 + 2.0 * c.gains[i].p);
        CHECK(c.gains[i].c_limit > c.gains[i - 1].c_limit);
    }
    CHECK_THROWS_AS(framed_ce_curves(2.0, 5.0, 1), ConfigError);
}

TEST_CASE("insurance lotteries") {
    const InsuranceProblem prob{3.0, 2.0, 0.25, default_coverage_menu()};
    CHECK(prob.premium_rate() == 0.5);
    for (double a : default_coverage_menu()) {
        const auto l = insurance_lottery(prob, a);
        CHECK(expectation(l) == doctest::Approx(3.0 - 0.5));
        // Under-insured agents fare worst after a loss, over-insured ones without.
        if (a < 1.0) CHECK(l.cdf(l.min_payoff()) == doctest::Approx(0.25));
        if (a > 1.0) CHECK(l.cdf(l.min_payoff()) == doctest::Approx(0.75));
    }
    CHECK(insurance_lottery(prob, 1.0).degenerate());
    const auto t = insurance_lottery(prob, 0.0, LossProbConvention::table1);
    CHECK(t.cdf(1.0) == doctest::Approx(0.75));
    CHECK(expectation(t) == doctest::Approx(0.25 * 3.0 + 0.75 * 1.0));
    CHECK_THROWS_AS((InsuranceProblem{3.0, 2.0, 1.0, {}}).validate(), ConfigError);
    CHECK_THROWS_AS((InsuranceProblem{3.0, 2.0, 0.5, {3.0}}).validate(), ConfigError);
}

TEST_CASE("coverage grids") {
    CHECK(coverage_grid(0.5) == default_coverage_menu());
    const auto fine = coverage_grid(0.01);
    CHECK(fine.size() == 301);
    CHECK(fine.back() == 2.0);
    CHECK(std::count(fine.begin(), fine.end(), 1.0) == 1);
    CHECK_THROWS_AS(coverage_grid(0.0), ConfigError);
}

TEST_CASE("demand maps") {
    const std::vector<double> ys{0.0, 2.5, 10.0};
    const std::vector<double> ps{0.01, 0.5, 0.99};
    for (auto variant : {DemandVariant::eu, DemandVariant::limit, DemandVariant::full}) {
        DemandSettings s;
        s.variant = variant;
        const auto m = insurance_demand_map(ys, ps, s);
        REQUIRE(m.chosen.size() == 9);
        for (double a : m.chosen) CHECK(a == 1.0);
    }
    DemandSettings t;
    t.variant = DemandVariant::eu;
    t.convention = LossProbConvention::table1;
    const auto m = insurance_demand_map(ys, ps, t);
    CHECK(m.at(2, 0) != 1.0);
    DemandSettings bad;
    bad.menu.clear();
    CHECK_THROWS_AS(insurance_demand_map(ys, ps, bad), ConfigError);
    // Income too low for the worst outcome of a = -1 lies outside log(4 + s).
    DemandSettings low;
    low.loss = 5.0;
    CHECK_THROWS_AS(insurance_demand_map(ys, ps, low), DomainError);
}
