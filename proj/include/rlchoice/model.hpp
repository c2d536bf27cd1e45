#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rlchoice/lottery.hpp"

namespace rlchoice {

/// Maps a reinforcement payoff to the subject's response scale.
///
/// Every kind carries a multiplicative `factor` (1 unless built through
/// `scaled`), so alpha * u is representable for any base u.
class ResponseFunction {
public:
    enum class Kind { linear, framed_log, table };

    static ResponseFunction identity() { return linear(1.0, 0.0); }
    static ResponseFunction linear(double slope, double intercept);
    /// u(s) = log(shift + s) - log(shift + reference). Finite for s > -shift.
    static ResponseFunction framed_log(double reference, double shift = 1.0);
    /// Lookup table; evaluating at a payoff missing from the table is a DomainError.
    static ResponseFunction table(std::vector<std::pair<double, double>> entries);

    ResponseFunction scaled(double factor) const;

    /// Throws DomainError outside the function's domain.
    double operator()(double payoff) const;

    Kind kind() const noexcept { return kind_; }
    double slope() const noexcept { return slope_; }
    double intercept() const noexcept { return intercept_; }
    double reference() const noexcept { return reference_; }
    double shift() const noexcept { return shift_; }
    double factor() const noexcept { return factor_; }
    const std::vector<std::pair<double, double>>& entries() const noexcept { return entries_; }

private:
    ResponseFunction() = default;

    Kind kind_ = Kind::linear;
    double slope_ = 1.0;
    double intercept_ = 0.0;
    double reference_ = 0.0;
    double shift_ = 1.0;
    double factor_ = 1.0;
    std::vector<std::pair<double, double>> entries_;
};

/// Phi(v) = exp(v / beta).
class ScaleFunction {
public:
    explicit ScaleFunction(double beta);

    double beta() const noexcept { return beta_; }
    double log_phi(double v) const noexcept { return v / beta_; }
    double operator()(double v) const noexcept;

private:
    double beta_;
};

struct Alternative {
    std::string id;
    double prior = 0.0;
    Lottery reinforcement = Lottery::sure(0.0);
};

struct ModelSpec {
    std::vector<Alternative> alternatives;
    ResponseFunction response = ResponseFunction::identity();
    ScaleFunction scale{1.0};
    int memory = 1;

    std::size_t size() const noexcept { return alternatives.size(); }

    /// Checks q >= 1, k >= 1, finite priors, unique ids, and that the
    /// response is finite and nondecreasing over the union of all supports.
    /// Throws ConfigError or DomainError.
    void validate() const;

    /// u-values on each alternative's support, in support order.
    std::vector<std::vector<double>> response_values() const;
};

}  // namespace rlchoice
