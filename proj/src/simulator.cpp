#include "rlchoice/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "rlchoice/errors.hpp"

namespace rlchoice {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

std::size_t sample(std::span<const double> cumulative, double u) noexcept {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
}

std::vector<double> cumulate(std::span<const double> p) {
    std::vector<double> c(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = (acc += p[i]);
    return c;
}

// Choice distributions cached by extended state index when the extended
// space is small; otherwise recomputed each step.
constexpr std::size_t kCacheStates = 1u << 16;

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t x = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t SimConfig::resolved_burn_in() const noexcept {
    if (burn_in) return *burn_in;
    return std::min<std::uint64_t>(std::max<std::uint64_t>(1000, steps / 100), steps / 2);
}

SimResult simulate(const SimConfig& cfg) {
    const ModelSpec& spec = cfg.spec;
    spec.validate();
    const std::uint64_t burn_in = cfg.resolved_burn_in();
    if (cfg.steps < 1 || cfg.steps <= burn_in) {
        throw ConfigError("simulation needs steps > burn_in");
    }
    const std::size_t q = spec.size();
    const int k = spec.memory;
    const auto uvals = spec.response_values();

    std::vector<std::vector<double>> reinforcement_cdf;
    for (const auto& alt : spec.alternatives) {
        std::vector<double> p;
        for (const auto& o : alt.reinforcement.outcomes()) p.push_back(o.prob);
        reinforcement_cdf.push_back(cumulate(p));
    }

    Rng rng(cfg.seed, cfg.stream);
    std::vector<Slot> memory;  // slot 0 most recent
    if (cfg.initial_state) {
        memory = *cfg.initial_state;
        if (memory.size() != static_cast<std::size_t>(k)) {
            throw ConfigError("initial state must have exactly k slots");
        }
        for (const auto& s : memory) {
            if (s.alternative < 0 || static_cast<std::size_t>(s.alternative) >= q ||
                s.support < 0 ||
                static_cast<std::size_t>(s.support) >= reinforcement_cdf[s.alternative].size()) {
                throw ConfigError("initial state slot out of range");
            }
        }
    } else {
        std::vector<double> priors;
        for (const auto& alt : spec.alternatives) priors.push_back(alt.prior);
        const auto prior_cdf = cumulate(choice_probabilities_given_responses(priors, spec.scale));
        for (int s = 0; s < k; ++s) {
            const auto j = static_cast<int>(sample(prior_cdf, rng.uniform()));
            const auto r = static_cast<int>(sample(reinforcement_cdf[j], rng.uniform()));
            memory.insert(memory.begin(), Slot{j, r});
        }
    }

    // Extended-space indexing lets the choice distribution be cached per state.
    std::optional<StateSpace> space;
    try {
        space.emplace(StateSpaceKind::extended, spec, kCacheStates * kCacheStates);
    } catch (const SizeError&) {
    }
    std::vector<std::vector<double>> cache(space ? space->size() : 0);
    std::size_t state_index = space ? space->index_of(memory) : 0;

    std::optional<StateSpace> tuple_space;
    SimResult result;
    if (cfg.track_transitions) {
        tuple_space.emplace(StateSpaceKind::paper, spec, kCacheStates * kCacheStates);
        result.transition_counts.assign(tuple_space->size(), std::vector<std::uint64_t>(q, 0));
    }

    result.counts.assign(q, 0);
    result.burn_in = burn_in;
    std::vector<double> scratch;
    for (std::uint64_t t = 0; t < cfg.steps; ++t) {
        const std::vector<double>* choice_cdf;
        if (space) {
            auto& entry = cache[state_index];
            if (entry.empty()) {
                entry = cumulate(choice_probabilities_given_responses(
                    state_responses(spec, uvals, memory), spec.scale));
            }
            choice_cdf = &entry;
        } else {
            scratch = cumulate(choice_probabilities_given_responses(
                state_responses(spec, uvals, memory), spec.scale));
            choice_cdf = &scratch;
        }
        const auto j = static_cast<int>(sample(*choice_cdf, rng.uniform()));
        const auto r = static_cast<int>(sample(reinforcement_cdf[j], rng.uniform()));

        if (t >= burn_in) {
            result.counts[j] += 1;
            if (tuple_space) {
                result.transition_counts[tuple_space->index_of(memory)][j] += 1;
            }
            const std::uint64_t counted = t - burn_in + 1;
            if (cfg.digest_window > 0 && counted % cfg.digest_window == 0) {
                std::vector<double> freq(q);
                for (std::size_t i = 0; i < q; ++i) {
                    freq[i] = static_cast<double>(result.counts[i]) / static_cast<double>(counted);
                }
                result.trajectory_digest.push_back(std::move(freq));
            }
        }

        std::rotate(memory.rbegin(), memory.rbegin() + 1, memory.rend());
        memory.front() = Slot{j, r};
        if (space) state_index = space->push_front(state_index, memory.front());
    }

    result.counted_steps = cfg.steps - burn_in;
    const auto n = static_cast<double>(result.counted_steps);
    for (std::size_t i = 0; i < q; ++i) {
        const double f = static_cast<double>(result.counts[i]) / n;
        result.frequencies.push_back(f);
        result.standard_errors.push_back(std::sqrt(f * (1.0 - f) / n));
    }
    return result;
}

}  // namespace rlchoice
