#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlchoice/model.hpp"

namespace rlchoice {

inline constexpr std::size_t kDefaultEntryCap = 2'000'000;

/// One memory slot: the alternative selected and, on the extended space, the
/// index of the realized reinforcement in that alternative's support.
struct Slot {
    int alternative = 0;
    int support = -1;

    bool operator==(const Slot&) const = default;
};

enum class StateSpaceKind { paper, extended };

/// Ordered k-tuples of memory slots; slot 0 is the most recent selection.
///
/// States are enumerated in mixed radix with slot 0 most significant, so the
/// shift (new, s_0, .., s_{k-2}) of state index n is new * B^{k-1} + n / B
/// where B is the number of distinct slot tokens.
class StateSpace {
public:
    /// Throws SizeError when (state count)^2 exceeds `entry_cap`.
    StateSpace(StateSpaceKind kind, const ModelSpec& spec, std::size_t entry_cap = kDefaultEntryCap);

    StateSpaceKind kind() const noexcept { return kind_; }
    int memory() const noexcept { return memory_; }
    std::size_t alternatives() const noexcept { return offsets_.size() - 1; }
    std::size_t size() const noexcept { return size_; }
    std::size_t token_count() const noexcept { return tokens_; }

    std::vector<Slot> state(std::size_t index) const;
    std::size_t index_of(std::span<const Slot> slots) const;
    /// Alternative selected most recently in state `index`.
    int first_alternative(std::size_t index) const noexcept;
    /// Index of the state reached by pushing `slot` to the front.
    std::size_t push_front(std::size_t index, Slot slot) const noexcept;

private:
    std::size_t token_of(Slot s) const noexcept;
    Slot slot_of(std::size_t token) const noexcept;

    StateSpaceKind kind_;
    int memory_;
    std::size_t tokens_;
    std::size_t size_;
    std::size_t lead_;                  // tokens_^(memory_-1)
    std::vector<std::size_t> offsets_;  // token offset per alternative
};

/// Column-stochastic: entries(to, from) = p(to : from).
struct TransitionMatrix {
    StateSpace space;
    Eigen::MatrixXd entries;
};

struct StationaryResult {
    StateSpace space;
    Eigen::VectorXd mu;
    std::vector<double> marginals;
    double residual = 0.0;  // max |M mu - mu|
    bool used_power_iteration = false;
};

/// P_i = Phi(U_i) / sum_j Phi(U_j), evaluated after subtracting max U.
std::vector<double> choice_probabilities_given_responses(std::span<const double> responses,
                                                         const ScaleFunction& scale);

/// Chain on alternative k-tuples with the reinforcements of each state's
/// selections drawn afresh at every step.
TransitionMatrix paper_transition_matrix(const ModelSpec& spec,
                                         std::size_t entry_cap = kDefaultEntryCap);

/// Exact chain on k-tuples of (alternative, realized reinforcement).
TransitionMatrix extended_transition_matrix(const ModelSpec& spec,
                                            std::size_t entry_cap = kDefaultEntryCap);

/// Dense LU on (M - I) with one row replaced by the normalization row; power
/// iteration if the solve leaves a residual above 1e-8. Throws
/// ConvergenceError if neither gets there.
StationaryResult stationary_distribution(const TransitionMatrix& m);

std::vector<double> marginal_choice_probabilities(const StationaryResult& st);

/// Responses U_l = U0_l + mean of u over the slots holding l, for a state of
/// the extended space (or of any slot list with support indices).
std::vector<double> state_responses(const ModelSpec& spec,
                                    const std::vector<std::vector<double>>& response_values,
                                    std::span<const Slot> slots);

/// k = 1 closed form mu(i) ~ Phi(U0_i) / E[K0 / (K0 + Phi(U0_i + u(R_i)) - Phi(U0_i))],
/// evaluated in the log domain. Throws ConfigError if k != 1.
std::vector<double> rl1_stationary_closed_form(const ModelSpec& spec);

/// mu(1)/mu(2) for a two-alternative k = 1 model. Throws ConfigError if q != 2.
double binary_stationary_ratio(const ModelSpec& spec);

/// Restriction to the alternatives named in `ids`, original order kept.
ModelSpec subset_model(const ModelSpec& spec, std::span<const std::string> ids);

/// max over subsets S and pairs i, j in S of |log((P_S(i)/P_S(j)) / (P_T(i)/P_T(j)))|
/// for a k = 1 model with q >= 3.
double lca_deviation(const ModelSpec& spec);

/// Luce probabilities with scales Phi(U0_i + E[u(R_i)]).
std::vector<double> long_memory_limit_probs(const ModelSpec& spec);

/// Marginals of the stationary law of the chosen chain.
std::vector<double> exact_marginals(const ModelSpec& spec, StateSpaceKind kind,
                                    std::size_t entry_cap = kDefaultEntryCap);

}  // namespace rlchoice
