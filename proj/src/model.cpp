#include "rlchoice/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rlchoice/errors.hpp"

namespace rlchoice {

ResponseFunction ResponseFunction::linear(double slope, double intercept) {
    if (!std::isfinite(slope) || !std::isfinite(intercept)) {
        throw ConfigError("linear response coefficients must be finite");
    }
    ResponseFunction u;
    u.kind_ = Kind::linear;
    u.slope_ = slope;
    u.intercept_ = intercept;
    return u;
}

ResponseFunction ResponseFunction::framed_log(double reference, double shift) {
    if (!(reference > 0.0) || !std::isfinite(reference)) {
        throw ConfigError("framed_log reference payoff must be positive");
    }
    if (!(shift > 0.0) || !std::isfinite(shift)) {
        throw ConfigError("framed_log shift must be positive");
    }
    ResponseFunction u;
    u.kind_ = Kind::framed_log;
    u.reference_ = reference;
    u.shift_ = shift;
    return u;
}

ResponseFunction ResponseFunction::table(std::vector<std::pair<double, double>> entries) {
    if (entries.empty()) {
        throw ConfigError("response table is empty");
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!std::isfinite(entries[i].first) || !std::isfinite(entries[i].second)) {
            throw ConfigError("response table entries must be finite");
        }
        if (i > 0 && entries[i].first == entries[i - 1].first) {
            throw ConfigError("response table has duplicate payoffs");
        }
    }
    ResponseFunction u;
    u.kind_ = Kind::table;
    u.entries_ = std::move(entries);
    return u;
}

ResponseFunction ResponseFunction::scaled(double factor) const {
    if (!std::isfinite(factor)) {
        throw ConfigError("response scale factor must be finite");
    }
    ResponseFunction u = *this;
    u.factor_ *= factor;
    return u;
}

double ResponseFunction::operator()(double payoff) const {
    switch (kind_) {
        case Kind::linear:
            return factor_ * (slope_ * payoff + intercept_);
        case Kind::framed_log: {
            if (!(payoff > -shift_)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "framed_log utility undefined at payoff " << payoff << " (needs payoff > "
                    << -shift_ << ")";
                throw DomainError(msg.str());
            }
            return factor_ * (std::log(shift_ + payoff) - std::log(shift_ + reference_));
        }
        case Kind::table: {
            auto it = std::lower_bound(entries_.begin(), entries_.end(), payoff,
                                       [](const auto& e, double v) { return e.first < v; });
            for (auto cand : {it, it == entries_.begin() ? it : std::prev(it)}) {
                if (cand != entries_.end() &&
                    std::abs(cand->first - payoff) <=
                        1e-12 * std::max({1.0, std::abs(payoff), std::abs(cand->first)})) {
                    return factor_ * cand->second;
                }
            }
            std::ostringstream msg;
            msg.precision(17);
            msg << "response table has no entry for payoff " << payoff;
            throw DomainError(msg.str());
        }
    }
    return 0.0;
}

ScaleFunction::ScaleFunction(double beta) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("scale parameter beta must be a positive finite number");
    }
}

double ScaleFunction::operator()(double v) const noexcept { return std::exp(v / beta_); }

void ModelSpec::validate() const {
    if (alternatives.empty()) {
        throw ConfigError("model needs at least one alternative");
    }
    if (memory < 1) {
        throw ConfigError("memory span must be at least 1");
    }
    std::set<std::string> ids;
    std::vector<double> payoffs;
    for (const auto& alt : alternatives) {
        if (!ids.insert(alt.id).second) {
            throw ConfigError("duplicate alternative id '" + alt.id + "'");
        }
        if (!std::isfinite(alt.prior)) {
            throw ConfigError("prior of alternative '" + alt.id + "' is not finite");
        }
        for (const auto& o : alt.reinforcement.outcomes()) payoffs.push_back(o.payoff);
    }
    std::sort(payoffs.begin(), payoffs.end());
    payoffs.erase(std::unique(payoffs.begin(), payoffs.end()), payoffs.end());
    double last = -INFINITY;
    for (double s : payoffs) {
        const double v = response(s);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "response is not finite at payoff " << s;
            throw DomainError(msg.str());
        }
        if (v < last) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "response is decreasing at payoff " << s;
            throw ConfigError(msg.str());
        }
        last = v;
    }
}

std::vector<std::vector<double>> ModelSpec::response_values() const {
    std::vector<std::vector<double>> out;
    out.reserve(alternatives.size());
    for (const auto& alt : alternatives) {
        std::vector<double> row;
        for (const auto& o : alt.reinforcement.outcomes()) row.push_back(response(o.payoff));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace rlchoice
