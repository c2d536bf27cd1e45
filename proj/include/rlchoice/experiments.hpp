#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rlchoice/deviations.hpp"

namespace rlchoice {

enum class OutputFormat { csv, json };

/// Unset optionals fall back to per-experiment defaults: beta = 0.1 for
/// figure1/figure2/prefer/ce, rho = 5 for figure3, rho = 0.4 for figure4,
/// alpha = 0.4 and beta = 1 for figure5, beta = 1 for intransitivity.
struct ExperimentConfig {
    std::string experiment;
    std::optional<double> beta;
    std::optional<double> alpha;
    std::optional<double> rho;
    std::optional<double> mix_weight;
    std::optional<double> loss;
    std::optional<double> reference;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> steps;
    std::optional<std::uint64_t> burn_in;
    std::optional<std::size_t> grid;
    std::optional<std::string> menu;
    LossProbConvention convention = LossProbConvention::natural;
    LimitConstant limit_constant = LimitConstant::paper;
    std::string chain = "extended";
    std::string spec;  // ModelSpec JSON file or inline text
    std::string x;     // Lottery JSON for prefer / ce
    std::string y;
    std::string out;   // output directory; empty writes to the stream
    OutputFormat format = OutputFormat::csv;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

const std::vector<std::string>& experiment_ids();

/// Runs one experiment. Writes files under cfg.out (created if missing) or,
/// when cfg.out is empty, the same content to `out`. Diagnostics go to
/// `err`. Returns kExitOk, kExitConfig or kExitSolver.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Comma-separated coverage levels, or a single step size over [-1, 2].
std::vector<double> parse_menu(const std::string& text);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace rlchoice
