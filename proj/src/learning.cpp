#include "rlchoice/learning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "rlchoice/errors.hpp"
#include "rlchoice/numeric.hpp"

namespace rlchoice {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kPowerTol = 1e-12;
constexpr long kPowerMaxIterations = 1'000'000;

}  // namespace

StateSpace::StateSpace(StateSpaceKind kind, const ModelSpec& spec, std::size_t entry_cap)
    : kind_(kind), memory_(spec.memory) {
    if (spec.alternatives.empty() || spec.memory < 1) {
        throw ConfigError("state space needs q >= 1 and k >= 1");
    }
    offsets_.push_back(0);
    for (const auto& alt : spec.alternatives) {
        const std::size_t width = kind == StateSpaceKind::paper ? 1 : alt.reinforcement.size();
        offsets_.push_back(offsets_.back() + width);
    }
    tokens_ = offsets_.back();

    // size^2 must stay within the entry cap
    const double limit = std::sqrt(static_cast<double>(entry_cap));
    double count = 1.0;
    for (int s = 0; s < memory_; ++s) {
        count *= static_cast<double>(tokens_);
        if (count > limit) {
            std::ostringstream msg;
            msg << "state space with " << tokens_ << "^" << memory_
                << " states exceeds the dense matrix cap of " << entry_cap << " entries";
            throw SizeError(msg.str());
        }
    }
    size_ = static_cast<std::size_t>(count);
    lead_ = size_ / tokens_;
}

std::size_t StateSpace::token_of(Slot s) const noexcept {
    return offsets_[s.alternative] + (kind_ == StateSpaceKind::paper ? 0 : s.support);
}

Slot StateSpace::slot_of(std::size_t token) const noexcept {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), token);
    const auto alt = static_cast<int>(std::distance(offsets_.begin(), it) - 1);
    if (kind_ == StateSpaceKind::paper) return {alt, -1};
    return {alt, static_cast<int>(token - offsets_[alt])};
}

std::vector<Slot> StateSpace::state(std::size_t index) const {
    std::vector<Slot> slots(memory_);
    for (int s = memory_ - 1; s >= 0; --s) {
        slots[s] = slot_of(index % tokens_);
        index /= tokens_;
    }
    return slots;
}

std::size_t StateSpace::index_of(std::span<const Slot> slots) const {
    if (slots.size() != static_cast<std::size_t>(memory_)) {
        throw ConfigError("state has the wrong number of memory slots");
    }
    std::size_t index = 0;
    for (const auto& s : slots) {
        if (s.alternative < 0 || static_cast<std::size_t>(s.alternative) >= alternatives()) {
            throw ConfigError("state slot names an unknown alternative");
        }
        if (kind_ == StateSpaceKind::extended &&
            (s.support < 0 ||
             offsets_[s.alternative] + s.support >= offsets_[s.alternative + 1])) {
            throw ConfigError("state slot has a support index outside the reinforcement lottery");
        }
        index = index * tokens_ + token_of(s);
    }
    return index;
}

int StateSpace::first_alternative(std::size_t index) const noexcept {
    return slot_of(index / lead_).alternative;
}

std::size_t StateSpace::push_front(std::size_t index, Slot slot) const noexcept {
    return token_of(slot) * lead_ + index / tokens_;
}

std::vector<double> choice_probabilities_given_responses(std::span<const double> responses,
                                                         const ScaleFunction& scale) {
    if (responses.empty()) {
        throw ConfigError("choice probabilities need at least one response");
    }
    double top = -std::numeric_limits<double>::infinity();
    for (double u : responses) {
        if (!std::isfinite(u)) throw DomainError("response value is not finite");
        top = std::max(top, scale.log_phi(u));
    }
    std::vector<double> p(responses.size());
    double total = 0.0;
    for (std::size_t i = 0; i < responses.size(); ++i) {
        p[i] = std::exp(scale.log_phi(responses[i]) - top);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<double> state_responses(const ModelSpec& spec,
                                    const std::vector<std::vector<double>>& response_values,
                                    std::span<const Slot> slots) {
    const std::size_t q = spec.size();
    std::vector<double> sums(q, 0.0);
    std::vector<int> counts(q, 0);
    for (const auto& s : slots) {
        sums[s.alternative] += response_values[s.alternative][s.support];
        counts[s.alternative] += 1;
    }
    std::vector<double> u(q);
    for (std::size_t l = 0; l < q; ++l) {
        u[l] = spec.alternatives[l].prior + (counts[l] > 0 ? sums[l] / counts[l] : 0.0);
    }
    return u;
}

TransitionMatrix paper_transition_matrix(const ModelSpec& spec, std::size_t entry_cap) {
    spec.validate();
    StateSpace space(StateSpaceKind::paper, spec, entry_cap);
    const auto uvals = spec.response_values();
    const int k = spec.memory;
    const std::size_t n = space.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));

    std::vector<Slot> slots;
    std::vector<double> column(spec.size());
    for (std::size_t from = 0; from < n; ++from) {
        slots = space.state(from);
        std::fill(column.begin(), column.end(), 0.0);
        // Enumerate every joint reinforcement outcome of the k selections.
        for (auto& s : slots) s.support = 0;
        while (true) {
            double weight = 1.0;
            for (const auto& s : slots) {
                weight *= spec.alternatives[s.alternative].reinforcement.outcomes()[s.support].prob;
            }
            const auto u = state_responses(spec, uvals, slots);
            const auto p = choice_probabilities_given_responses(u, spec.scale);
            for (std::size_t j = 0; j < p.size(); ++j) column[j] += weight * p[j];

            int pos = k - 1;
            for (; pos >= 0; --pos) {
                auto& s = slots[pos];
                if (++s.support <
                    static_cast<int>(spec.alternatives[s.alternative].reinforcement.size())) {
                    break;
                }
                s.support = 0;
            }
            if (pos < 0) break;
        }
        for (std::size_t j = 0; j < column.size(); ++j) {
            const auto to = space.push_front(from, Slot{static_cast<int>(j), -1});
            m(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) += column[j];
        }
    }
    return {std::move(space), std::move(m)};
}

TransitionMatrix extended_transition_matrix(const ModelSpec& spec, std::size_t entry_cap) {
    spec.validate();
    StateSpace space(StateSpaceKind::extended, spec, entry_cap);
    const auto uvals = spec.response_values();
    const std::size_t n = space.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t from = 0; from < n; ++from) {
        const auto slots = space.state(from);
        const auto p = choice_probabilities_given_responses(
            state_responses(spec, uvals, slots), spec.scale);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const auto outcomes = spec.alternatives[j].reinforcement.outcomes();
            for (std::size_t r = 0; r < outcomes.size(); ++r) {
                const auto to =
                    space.push_front(from, Slot{static_cast<int>(j), static_cast<int>(r)});
                m(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) +=
                    p[j] * outcomes[r].prob;
            }
        }
    }
    return {std::move(space), std::move(m)};
}

namespace {

double residual_of(const Eigen::MatrixXd& m, const Eigen::VectorXd& mu) {
    return (m * mu - mu).cwiseAbs().maxCoeff();
}

// Clip rounding-level negatives and renormalize; false if mu is not a
// probability vector up to that rounding.
bool tidy(Eigen::VectorXd& mu) {
    if (!mu.allFinite()) return false;
    if (mu.minCoeff() < -1e-10) return false;
    mu = mu.cwiseMax(0.0);
    const double total = mu.sum();
    if (!(total > 0.0)) return false;
    mu /= total;
    return true;
}

Eigen::VectorXd power_iteration(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (long it = 0; it < kPowerMaxIterations; ++it) {
        Eigen::VectorXd next = m * mu;
        next /= next.sum();
        const double change = (next - mu).cwiseAbs().maxCoeff();
        mu = std::move(next);
        if (change < kPowerTol) break;
    }
    return mu;
}

}  // namespace

StationaryResult stationary_distribution(const TransitionMatrix& m) {
    const auto n = m.entries.rows();
    if (n == 0 || m.entries.cols() != n) {
        throw ConfigError("transition matrix must be square and nonempty");
    }

    Eigen::MatrixXd a = m.entries - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd mu = a.partialPivLu().solve(rhs);

    bool fallback = false;
    if (!tidy(mu) || residual_of(m.entries, mu) > kResidualTol) {
        fallback = true;
        mu = power_iteration(m.entries);
        tidy(mu);
    }
    const double residual = mu.allFinite() ? residual_of(m.entries, mu) : INFINITY;
    if (!(residual <= kResidualTol)) {
        std::ostringstream msg;
        msg << "stationary solve did not converge (residual " << residual << ")";
        throw ConvergenceError(msg.str());
    }

    StationaryResult result{m.space, std::move(mu), {}, residual, fallback};
    result.marginals = marginal_choice_probabilities(result);
    return result;
}

std::vector<double> marginal_choice_probabilities(const StationaryResult& st) {
    std::vector<double> out(st.space.alternatives(), 0.0);
    for (Eigen::Index s = 0; s < st.mu.size(); ++s) {
        out[st.space.first_alternative(static_cast<std::size_t>(s))] += st.mu(s);
    }
    return out;
}

std::vector<double> rl1_stationary_closed_form(const ModelSpec& spec) {
    spec.validate();
    if (spec.memory != 1) {
        throw ConfigError("closed form applies only to memory span k = 1");
    }
    const std::size_t q = spec.size();
    if (q == 1) return {1.0};

    const double beta = spec.scale.beta();
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& alt : spec.alternatives) top = std::max(top, alt.prior / beta);
    // a_i = log Phi(U0_i) - max, log K0' = log sum_l e^{a_l}
    std::vector<double> a(q);
    for (std::size_t i = 0; i < q; ++i) a[i] = spec.alternatives[i].prior / beta - top;
    const double log_k0 = numeric::log_sum_exp(a);

    std::vector<double> log_weight(q);
    std::vector<double> terms;
    for (std::size_t i = 0; i < q; ++i) {
        const auto& alt = spec.alternatives[i];
        terms.clear();
        // log of K0 / (K0 + Phi(U0_i)(e^{u/beta} - 1)) = -log(1 + z)
        for (const auto& o : alt.reinforcement.outcomes()) {
            const double x = spec.response(o.payoff) / beta;
            double log_term;
            if (x >= 0.0) {
                log_term = -numeric::softplus(a[i] + numeric::log_expm1(x) - log_k0);
            } else {
                const double z = std::exp(a[i] - log_k0) * std::expm1(x);
                log_term = -std::log1p(z);
            }
            terms.push_back(std::log(o.prob) + log_term);
        }
        log_weight[i] = a[i] - numeric::log_sum_exp(terms);
    }
    const double norm = numeric::log_sum_exp(log_weight);
    std::vector<double> mu(q);
    for (std::size_t i = 0; i < q; ++i) mu[i] = std::exp(log_weight[i] - norm);
    return mu;
}

double binary_stationary_ratio(const ModelSpec& spec) {
    spec.validate();
    if (spec.size() != 2) {
        throw ConfigError("binary stationary ratio needs exactly two alternatives");
    }
    if (spec.memory != 1) {
        throw ConfigError("binary stationary ratio applies only to memory span k = 1");
    }
    // E[Phi(U0_other) / (Phi(U0_other) + Phi(U0_self + u(R_self)))]
    auto leave = [&](std::size_t self, std::size_t other) {
        const auto& s = spec.alternatives[self];
        const double other_prior = spec.alternatives[other].prior;
        double acc = 0.0;
        for (const auto& o : s.reinforcement.outcomes()) {
            acc += o.prob * numeric::logistic(
                                -(s.prior + spec.response(o.payoff) - other_prior) /
                                spec.scale.beta());
        }
        return acc;
    };
    return leave(1, 0) / leave(0, 1);
}

ModelSpec subset_model(const ModelSpec& spec, std::span<const std::string> ids) {
    if (ids.empty()) {
        throw ConfigError("subset of alternatives is empty");
    }
    std::set<std::string> wanted(ids.begin(), ids.end());
    for (const auto& id : wanted) {
        const bool known = std::any_of(spec.alternatives.begin(), spec.alternatives.end(),
                                       [&](const Alternative& a) { return a.id == id; });
        if (!known) throw ConfigError("unknown alternative id '" + id + "'");
    }
    ModelSpec out = spec;
    std::erase_if(out.alternatives,
                  [&](const Alternative& a) { return wanted.count(a.id) == 0; });
    return out;
}

double lca_deviation(const ModelSpec& spec) {
    spec.validate();
    const std::size_t q = spec.size();
    if (q < 3) {
        throw ConfigError("LCA deviation needs at least three alternatives");
    }
    if (spec.memory != 1) {
        throw ConfigError("LCA deviation is defined for memory span k = 1");
    }
    if (q > 20) {
        throw SizeError("LCA deviation enumerates all subsets; q > 20 is not supported");
    }
    const auto full = rl1_stationary_closed_form(spec);
    double worst = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<std::string> ids;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < q; ++i) {
            if (mask & (1u << i)) {
                ids.push_back(spec.alternatives[i].id);
                members.push_back(i);
            }
        }
        const auto sub = rl1_stationary_closed_form(subset_model(spec, ids));
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = 0; b < members.size(); ++b) {
                if (a == b) continue;
                const double dev = std::log(sub[a] / sub[b]) -
                                   std::log(full[members[a]] / full[members[b]]);
                worst = std::max(worst, std::abs(dev));
            }
        }
    }
    return worst;
}

std::vector<double> long_memory_limit_probs(const ModelSpec& spec) {
    spec.validate();
    std::vector<double> u;
    for (const auto& alt : spec.alternatives) {
        u.push_back(alt.prior + expect_fn(alt.reinforcement, [&](double s) { return spec.response(s); }));
    }
    return choice_probabilities_given_responses(u, spec.scale);
}

std::vector<double> exact_marginals(const ModelSpec& spec, StateSpaceKind kind,
                                    std::size_t entry_cap) {
    const auto m = kind == StateSpaceKind::paper ? paper_transition_matrix(spec, entry_cap)
                                                 : extended_transition_matrix(spec, entry_cap);
    return stationary_distribution(m).marginals;
}

}  // namespace rlchoice
