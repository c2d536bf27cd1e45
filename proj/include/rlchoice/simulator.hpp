#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rlchoice/learning.hpp"
#include "rlchoice/model.hpp"

namespace rlchoice {

/// xoshiro256** seeded through SplitMix64. Stream `s` of master seed `m`
/// is seeded from SplitMix64(m ^ (s * 0xD1B54A32D192ED03)), so replicas
/// derived from one master seed are reproducible on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 4> state_;
};

struct SimConfig {
    ModelSpec spec;
    std::uint64_t steps = 1'000'000;
    /// Default: max(1000, steps / 100), capped at steps / 2.
    std::optional<std::uint64_t> burn_in;
    std::uint64_t seed = 42;
    std::uint64_t stream = 0;
    /// Memory contents at step 0, slot 0 most recent, with support indices.
    /// Default: k warm-up draws from the prior-only choice probabilities.
    std::optional<std::vector<Slot>> initial_state;
    /// Record counted selections per (alternative k-tuple, next alternative).
    bool track_transitions = false;
    /// Emit running frequencies every `digest_window` counted steps (0: off).
    std::uint64_t digest_window = 0;

    std::uint64_t resolved_burn_in() const noexcept;
};

struct SimResult {
    std::vector<std::uint64_t> counts;
    std::vector<double> frequencies;
    std::vector<double> standard_errors;
    std::uint64_t counted_steps = 0;
    std::uint64_t burn_in = 0;
    /// Indexed [selection-tuple state index][next alternative]; empty unless tracked.
    std::vector<std::vector<std::uint64_t>> transition_counts;
    std::vector<std::vector<double>> trajectory_digest;
};

/// Runs the learning agent for cfg.steps trials. Throws ConfigError on an
/// invalid configuration.
SimResult simulate(const SimConfig& cfg);

}  // namespace rlchoice
