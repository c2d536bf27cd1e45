#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "rlchoice/errors.hpp"
#include "rlchoice/lottery.hpp"
#include "rlchoice/numeric.hpp"

using namespace rlchoice;

TEST_CASE("lottery construction normalizes outcomes") {
    const Lottery l({{1.0, 0.25}, {-2.0, 0.5}, {1.0 + 1e-15, 0.25}, {7.0, 0.0}});
    REQUIRE(l.size() == 2);
    CHECK(l.outcomes()[0] == Outcome{-2.0, 0.5});
    CHECK(l.outcomes()[1].payoff == doctest::Approx(1.0));
    CHECK(l.outcomes()[1].prob == doctest::Approx(0.5));
    CHECK(l.min_payoff() == -2.0);
    CHECK_FALSE(l.degenerate());
    CHECK(expectation(l) == doctest::Approx(-0.5));
}

TEST_CASE("two-point and sure lotteries") {
    const auto l = Lottery::two_point(1.0, 0.0, 0.3);
    CHECK(expectation(l) == doctest::Approx(0.3));
    CHECK(l.cdf(0.0) == doctest::Approx(0.7));
    CHECK(l.cdf(-1.0) == 0.0);
    CHECK(l.cdf(1.0) == doctest::Approx(1.0));
    CHECK(Lottery::two_point(2.0, 2.0, 0.4).degenerate());
    CHECK(Lottery::two_point(1.0, 0.0, 1.0) == Lottery::sure(1.0));
    CHECK(Lottery::sure(3.0).degenerate());
}

TEST_CASE("invalid lotteries are rejected") {
    CHECK_THROWS_AS(Lottery({}), ConfigError);
    CHECK_THROWS_AS(Lottery({{0.0, 0.5}, {1.0, 0.4}}), ConfigError);
    CHECK_THROWS_AS(Lottery({{0.0, -0.1}, {1.0, 1.1}}), ConfigError);
    CHECK_THROWS_AS(Lottery({{NAN, 1.0}}), ConfigError);
    CHECK_THROWS_AS(Lottery({{0.0, INFINITY}}), ConfigError);
    CHECK_THROWS_AS(Lottery::two_point(0.0, 1.0, 1.5), ConfigError);
    CHECK_THROWS_AS(Lottery::sure(INFINITY), ConfigError);
}

TEST_CASE("expect_fn reports non-finite values") {
    const auto l = Lottery::two_point(-2.0, 1.0, 0.5);
    CHECK(expect_fn(l, [](double s) { return s * s; }) == doctest::Approx(2.5));
    CHECK_THROWS_AS(expect_fn(l, [](double s) { return std::log(s); }), DomainError);
}

TEST_CASE("mix builds the compound lottery") {
    const auto m = mix(Lottery::sure(1.0), Lottery::two_point(1.0, 0.0, 0.5), 0.2);
    REQUIRE(m.size() == 2);
    CHECK(m.cdf(0.0) == doctest::Approx(0.4));
    CHECK_THROWS_AS(mix(Lottery::sure(1.0), Lottery::sure(0.0), 1.2), ConfigError);
    CHECK(mix(Lottery::sure(1.0), Lottery::sure(0.0), 1.0) == Lottery::sure(1.0));
}

TEST_CASE("first-order stochastic dominance") {
    const auto hi = Lottery::two_point(2.0, 0.0, 0.6);
    const auto lo = Lottery::two_point(2.0, 0.0, 0.4);
    CHECK(fosd_dominates(hi, lo));
    CHECK_FALSE(fosd_dominates(lo, hi));
    CHECK(fosd_dominates(hi, hi));
    CHECK_FALSE(fosd_dominates(Lottery::two_point(3.0, -1.0, 0.5), Lottery::sure(0.5)));
    CHECK_FALSE(fosd_dominates(Lottery::sure(0.5), Lottery::two_point(3.0, -1.0, 0.5)));
}

TEST_CASE("property: expectation lies in the payoff hull and mixing is linear") {
    testgen::Gen g(101);
    for (int t = 0; t < 300; ++t) {
        const auto x = g.lottery(g.integer(1, 5), -5.0, 5.0);
        const auto y = g.lottery(g.integer(1, 5), -5.0, 5.0);
        const double w = g.uniform(0.0, 1.0);
        CHECK(expectation(x) >= x.min_payoff() - 1e-12);
        CHECK(expectation(x) <= x.max_payoff() + 1e-12);
        CHECK(expectation(mix(x, y, w)) ==
              doctest::Approx(w * expectation(x) + (1 - w) * expectation(y)).epsilon(1e-12));
        double total = 0.0;
        for (const auto& o : x.outcomes()) total += o.prob;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("property: shifting probability mass upward dominates") {
    testgen::Gen g(102);
    for (int t = 0; t < 300; ++t) {
        const auto s = g.payoffs(2, -3.0, 3.0);
        const double a = std::max(s[0], s[1]), b = std::min(s[0], s[1]);
        const double p = g.uniform(0.0, 1.0), dp = g.uniform(0.0, 1.0 - p);
        CHECK(fosd_dominates(Lottery::two_point(a, b, p + dp), Lottery::two_point(a, b, p)));
    }
}

TEST_CASE("numeric helpers are stable at extreme arguments") {
    using namespace rlchoice::numeric;
    CHECK(logistic(800.0) == 1.0);
    CHECK(logistic(-800.0) == 0.0);
    CHECK(logistic(0.0) == 0.5);
    CHECK(softplus(1000.0) == doctest::Approx(1000.0));
    CHECK(softplus(-1000.0) == doctest::Approx(0.0));
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(log_expm1(1000.0) == doctest::Approx(1000.0));
    CHECK(log_expm1(1.0) == doctest::Approx(std::log(std::exp(1.0) - 1.0)));
    CHECK(std::isinf(log_expm1(0.0)));
    const std::vector<double> v{1000.0, 1000.0};
    CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("bisection finds roots and widens its bracket") {
    using namespace rlchoice::numeric;
    CHECK(bisect([](double x) { return x * x * x - 2.0; }, 0.0, 1.0) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    CHECK(bisect([](double x) { return 5.0 - x; }, 0.0, 0.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(bisect([](double x) { return x; }, -1.0, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bisect([](double) { return 1.0; }, 0.0, 1.0), SolverError);
    CHECK_THROWS_AS(bisect([](double) { return NAN; }, 0.0, 1.0), SolverError);
}
