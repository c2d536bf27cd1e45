#pragma once

// Seeded generators for property tests and the acceptance battery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rlchoice/lottery.hpp"
#include "rlchoice/model.hpp"

namespace rlchoice::testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, int(v.size()) - 1))]; }

    /// Probabilities bounded away from zero so that every support point survives.
    std::vector<double> simplex(int n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) total += (x = uniform(0.1, 1.0));
        for (auto& x : w) x /= total;
        return w;
    }

    /// n distinct payoffs in [lo, hi] (at least 1e-3 apart).
    std::vector<double> payoffs(int n, double lo, double hi) {
        std::vector<double> s;
        while (static_cast<int>(s.size()) < n) {
            const double v = uniform(lo, hi);
            if (std::all_of(s.begin(), s.end(), [&](double t) { return std::abs(t - v) > 1e-3; })) s.push_back(v);
        }
        return s;
    }

    Lottery lottery(int n, double lo, double hi) {
        const auto s = payoffs(n, lo, hi);
        const auto p = simplex(n);
        std::vector<Outcome> o;
        for (int i = 0; i < n; ++i) o.push_back({s[i], p[i]});
        // simplex() sums to 1 only up to rounding; fold the residue into the last entry.
        double rest = 1.0;
        for (int i = 0; i + 1 < n; ++i) rest -= o[i].prob;
        o.back().prob = rest;
        return Lottery(std::move(o));
    }

    /// Memory-k spec with linear response, q alternatives, reinforcements
    /// with 2..max_support points in [-amp, amp], priors in [-prior_amp, prior_amp].
    ModelSpec spec(int q, int memory, int max_support, double amp, double prior_amp, double beta_lo,
                   double beta_hi) {
        ModelSpec s;
        for (int i = 0; i < q; ++i) {
            Alternative a;
            a.id = "a" + std::to_string(i);
            a.prior = uniform(-prior_amp, prior_amp);
            a.reinforcement = lottery(integer(2, max_support), -amp, amp);
            s.alternatives.push_back(std::move(a));
        }
        s.response = ResponseFunction::linear(uniform(0.5, 1.5), uniform(-0.2, 0.2));
        s.scale = ScaleFunction(uniform(beta_lo, beta_hi));
        s.memory = memory;
        return s;
    }

private:
    std::mt19937_64 eng_;
};

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace rlchoice::testgen
