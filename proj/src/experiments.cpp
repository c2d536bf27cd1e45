#include "rlchoice/experiments.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rlchoice/errors.hpp"
#include "rlchoice/json_io.hpp"
#include "rlchoice/learning.hpp"
#include "rlchoice/preference.hpp"
#include "rlchoice/simulator.hpp"

namespace rlchoice {

namespace {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

struct Report {
    Json parameters = Json::object();
    Json summary = Json::object();
    std::vector<Table> tables;
};

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // no "-0" in output
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const Json& cell) {
    if (cell.is_number_float()) return format_double(cell.get<double>());
    if (cell.is_string()) return cell.get<std::string>();
    return cell.dump();
}

std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
        s += "\n";
    }
    return s;
}

Json table_json(const Table& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    return {{"columns", t.columns}, {"rows", rows}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

void emit(const std::string& experiment, const Report& report, const ExperimentConfig& cfg,
          std::ostream& out) {
    if (cfg.out.empty()) {
        if (cfg.format == OutputFormat::json) {
            Json doc = {{"experiment", experiment},
                        {"parameters", report.parameters},
                        {"summary", report.summary},
                        {"tables", Json::object()}};
            for (const auto& t : report.tables) doc["tables"][t.name] = table_json(t);
            out << doc.dump(2) << "\n";
        } else {
            out << "# experiment: " << experiment << "\n";
            out << "# parameters: " << report.parameters.dump() << "\n";
            if (!report.summary.empty()) out << "# summary: " << report.summary.dump() << "\n";
            for (const auto& t : report.tables) out << "# table: " << t.name << "\n" << to_csv(t);
        }
        return;
    }

    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "': " + ec.message());
    for (const auto& t : report.tables) {
        Json meta = {{"experiment", experiment},
                     {"table", t.name},
                     {"parameters", report.parameters},
                     {"summary", report.summary}};
        if (cfg.format == OutputFormat::json) {
            meta.update(table_json(t));
            write_file(dir / (t.name + ".json"), meta.dump(2) + "\n");
        } else {
            meta["columns"] = t.columns;
            write_file(dir / (t.name + ".csv"), to_csv(t));
            write_file(dir / (t.name + ".params.json"), meta.dump(2) + "\n");
        }
    }
}

// Flags each experiment accepts beyond --out/--format.
const std::map<std::string, std::set<std::string>>& schemas() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"figure1", {"beta", "mix", "grid"}},
        {"figure2", {"beta", "grid"}},
        {"figure3", {"rho", "reference", "grid", "limit-constant"}},
        {"figure4", {"rho", "loss", "grid", "menu", "limit-constant", "loss-prob-convention"}},
        {"figure5", {"alpha", "beta", "loss", "grid", "menu", "loss-prob-convention"}},
        {"simulate", {"spec", "steps", "seed", "burn-in"}},
        {"stationary", {"spec", "chain"}},
        {"prefer", {"x", "y", "beta"}},
        {"ce", {"x", "beta"}},
        {"intransitivity", {"beta"}},
        {"lca-deviation", {"spec"}},
    };
    return s;
}

void check_schema(const ExperimentConfig& cfg) {
    const auto it = schemas().find(cfg.experiment);
    if (it == schemas().end()) {
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }
    std::vector<std::string> given;
    if (cfg.beta) given.push_back("beta");
    if (cfg.alpha) given.push_back("alpha");
    if (cfg.rho) given.push_back("rho");
    if (cfg.mix_weight) given.push_back("mix");
    if (cfg.loss) given.push_back("loss");
    if (cfg.reference) given.push_back("reference");
    if (cfg.seed) given.push_back("seed");
    if (cfg.steps) given.push_back("steps");
    if (cfg.burn_in) given.push_back("burn-in");
    if (cfg.grid) given.push_back("grid");
    if (cfg.menu) given.push_back("menu");
    if (cfg.convention != LossProbConvention::natural) given.push_back("loss-prob-convention");
    if (cfg.limit_constant != LimitConstant::paper) given.push_back("limit-constant");
    if (cfg.chain != "extended") given.push_back("chain");
    if (!cfg.spec.empty()) given.push_back("spec");
    if (!cfg.x.empty()) given.push_back("x");
    if (!cfg.y.empty()) given.push_back("y");
    for (const auto& flag : given) {
        if (!it->second.count(flag)) {
            throw ConfigError("--" + flag + " does not apply to experiment '" + cfg.experiment + "'");
        }
    }
}

std::size_t grid_points(const ExperimentConfig& cfg, std::size_t fallback) {
    const std::size_t n = cfg.grid.value_or(fallback);
    if (n < 2) throw ConfigError("--grid needs at least 2 points");
    return n;
}

Table curve_table(const std::string& name, std::span<const double> xs, std::span<const double> cs) {
    Table t{name, {"x", "c"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({xs[i], cs[i]});
    return t;
}

Report figure1(const ExperimentConfig& cfg) {
    const double beta = cfg.beta.value_or(0.1);
    const double w = cfg.mix_weight.value_or(0.2);
    const auto xs = linspace(0.0, 1.0, grid_points(cfg, 201));
    const auto res = allais_curves(beta, w, xs, xs);
    Report r;
    r.parameters = {{"beta", beta}, {"mix_weight", w}, {"grid", xs.size()},
                    {"x_range", {0.0, 1.0}}, {"c_range", {0.0, 1.0}}};
    r.summary = {{"reversal_cells", res.reversal.size()}};
    r.tables.push_back(curve_table("allais_raw", res.raw.grid, res.raw.values));
    r.tables.push_back(curve_table("allais_mixed", res.mixed.grid, res.mixed.values));
    Table rev{"allais_reversal", {"c", "x"}, {}};
    for (const auto& [c, x] : res.reversal) rev.rows.push_back({c, x});
    r.tables.push_back(std::move(rev));
    return r;
}

Report figure2(const ExperimentConfig& cfg) {
    const double beta = cfg.beta.value_or(0.1);
    const auto xs = linspace(0.0, 1.0, grid_points(cfg, 201));
    const auto res = gain_loss_curves(beta, xs);
    Report r;
    r.parameters = {{"beta", beta}, {"grid", xs.size()}, {"x_range", {0.0, 1.0}}};
    r.tables.push_back(curve_table("gains", res.gains.grid, res.gains.values));
    r.tables.push_back(curve_table("losses", res.losses.grid, res.losses.values));
    r.tables.push_back(curve_table("expected_gains", xs, res.expected_gains));
    r.tables.push_back(curve_table("expected_losses", xs, res.expected_losses));
    return r;
}

Report figure3(const ExperimentConfig& cfg) {
    const double s0 = cfg.reference.value_or(2.0);
    const double rho = cfg.rho.value_or(1.0 / 0.2);
    const std::size_t n = grid_points(cfg, 201);
    const auto res = framed_ce_curves(s0, rho, n, cfg.limit_constant);
    Report r;
    r.parameters = {{"reference", s0}, {"rho", rho}, {"grid", n},
                    {"limit_constant", to_string(cfg.limit_constant)},
                    {"utility", "log(1+s)-log(1+reference)"}};
    for (const auto& [label, pts] :
         {std::pair{std::string("gains"), &res.gains}, std::pair{std::string("losses"), &res.losses}}) {
        Table lim{label + "_limit", {"x", "c"}, {}};
        Table eu{label + "_eu", {"x", "c"}, {}};
        for (const auto& p : *pts) {
            lim.rows.push_back({p.x, p.c_limit});
            eu.rows.push_back({p.x, p.c_eu});
        }
        r.tables.push_back(std::move(lim));
        r.tables.push_back(std::move(eu));
    }
    return r;
}

Report insurance(const ExperimentConfig& cfg, DemandSettings settings, const std::string& default_menu) {
    settings.loss = cfg.loss.value_or(2.0);
    settings.convention = cfg.convention;
    settings.limit_constant = cfg.limit_constant;
    settings.menu = parse_menu(cfg.menu.value_or(default_menu));
    const std::size_t n = grid_points(cfg, 101);
    const auto ys = linspace(0.0, 10.0, n);
    const auto ps = linspace(0.01, 0.99, n);
    const auto map = insurance_demand_map(ys, ps, settings);

    Report r;
    r.parameters = {{"variant", to_string(settings.variant)},
                    {"loss", settings.loss},
                    {"grid", n},
                    {"income_range", {0.0, 10.0}},
                    {"loss_prob_range", {0.01, 0.99}},
                    {"menu", settings.menu},
                    {"loss_prob_convention", to_string(settings.convention)},
                    {"utility", "log(4+s)-log(8)"}};
    if (settings.variant == DemandVariant::limit) {
        r.parameters["rho"] = settings.rho;
        r.parameters["limit_constant"] = to_string(settings.limit_constant);
    } else {
        r.parameters["alpha"] = settings.alpha;
        r.parameters["beta"] = settings.beta;
    }
    std::map<std::string, std::size_t> histogram;
    Table t{"phase_map", {"y", "p", "a_chosen"}, {}};
    for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            t.rows.push_back({ys[i], ps[j], map.at(i, j)});
            histogram[format_double(map.at(i, j))] += 1;
        }
    }
    r.summary = {{"cells_per_choice", histogram}};
    r.tables.push_back(std::move(t));
    return r;
}

Report figure4(const ExperimentConfig& cfg) {
    DemandSettings s;
    s.variant = DemandVariant::limit;
    s.rho = cfg.rho.value_or(0.4);
    return insurance(cfg, s, "0.01");
}

Report figure5(const ExperimentConfig& cfg) {
    DemandSettings s;
    s.variant = DemandVariant::full;
    s.alpha = cfg.alpha.value_or(0.4);
    s.beta = cfg.beta.value_or(1.0);
    return insurance(cfg, s, "-1,-0.5,0,0.5,1,1.5,2");
}

ModelSpec required_spec(const ExperimentConfig& cfg) {
    if (cfg.spec.empty()) throw ConfigError("--spec is required for '" + cfg.experiment + "'");
    return model_spec_from_json(load_json(cfg.spec));
}

Lottery required_lottery(const std::string& text, const char* flag) {
    if (text.empty()) throw ConfigError(std::string("--") + flag + " is required");
    return lottery_from_json(load_json(text), flag);
}

Report simulate_experiment(const ExperimentConfig& cfg) {
    SimConfig sc;
    sc.spec = required_spec(cfg);
    sc.steps = cfg.steps.value_or(1'000'000);
    sc.seed = cfg.seed.value_or(42);
    sc.burn_in = cfg.burn_in;
    const auto res = simulate(sc);
    Report r;
    r.parameters = {{"spec", to_json(sc.spec)},
                    {"steps", sc.steps},
                    {"burn_in", res.burn_in},
                    {"seed", sc.seed},
                    {"rng", "xoshiro256** seeded by splitmix64, stream 0"}};
    r.summary = {{"counted_steps", res.counted_steps},
                 {"counts", res.counts},
                 {"frequencies", res.frequencies},
                 {"standard_errors", res.standard_errors}};
    Table t{"simulation", {"id", "count", "frequency", "standard_error"}, {}};
    for (std::size_t i = 0; i < res.counts.size(); ++i) {
        t.rows.push_back({sc.spec.alternatives[i].id, res.counts[i], res.frequencies[i],
                          res.standard_errors[i]});
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report stationary_experiment(const ExperimentConfig& cfg) {
    const auto spec = required_spec(cfg);
    Report r;
    r.parameters = {{"spec", to_json(spec)}, {"chain", cfg.chain}};
    std::vector<double> marginals;
    if (cfg.chain == "closed-form") {
        marginals = rl1_stationary_closed_form(spec);
    } else if (cfg.chain == "paper" || cfg.chain == "extended") {
        const auto m = cfg.chain == "paper" ? paper_transition_matrix(spec)
                                            : extended_transition_matrix(spec);
        const auto st = stationary_distribution(m);
        marginals = st.marginals;
        r.summary = {{"states", st.space.size()},
                     {"residual", st.residual},
                     {"power_iteration", st.used_power_iteration}};
    } else {
        throw ConfigError("--chain must be one of paper, extended, closed-form");
    }
    Table t{"stationary", {"id", "marginal"}, {}};
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        t.rows.push_back({spec.alternatives[i].id, marginals[i]});
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report prefer_experiment(const ExperimentConfig& cfg) {
    const auto x = required_lottery(cfg.x, "x");
    const auto y = required_lottery(cfg.y, "y");
    const double beta = cfg.beta.value_or(0.1);
    const auto v = prefers(x, y, beta);
    Report r;
    r.parameters = {{"x", to_json(x)}, {"y", to_json(y)}, {"beta", beta}};
    r.summary = {{"agrees_with_rl1_chain", equivalence_with_rl1(x, y, beta)}};
    r.tables.push_back(Table{"preference", {"relation", "lhs", "rhs"}, {{to_string(v.relation), v.lhs, v.rhs}}});
    return r;
}

Report ce_experiment(const ExperimentConfig& cfg) {
    const auto x = required_lottery(cfg.x, "x");
    const double beta = cfg.beta.value_or(0.1);
    const double c = certainty_equivalent(x, beta);
    Report r;
    r.parameters = {{"x", to_json(x)}, {"beta", beta}, {"tolerance", 1e-12}};
    r.tables.push_back(Table{"certainty_equivalent",
                             {"c", "expectation", "residual"},
                             {{c, expectation(x), certainty_equivalent_gap(x, beta, c)}}});
    return r;
}

TwoPointGrid default_intransitivity_grid() {
    TwoPointGrid g;
    for (int i = 0; i <= 12; ++i) {
        g.a.push_back(0.25 * i);
        g.b.push_back(-3.0 + 0.25 * i);
    }
    for (int i = 1; i <= 9; ++i) g.p.push_back(i / 10.0);
    return g;
}

Report intransitivity_experiment(const ExperimentConfig& cfg) {
    const double beta = cfg.beta.value_or(1.0);
    const auto grid = default_intransitivity_grid();
    const auto family = grid.lotteries();
    const auto res = find_intransitive_triple(family, beta);
    Report r;
    r.parameters = {{"beta", beta}, {"grid", grid.describe()},
                    {"a", grid.a}, {"b", grid.b}, {"p", grid.p}};
    r.summary = {{"found", res.triple.has_value()}, {"family_size", res.family_size}};
    Table lotteries{"cycle_lotteries", {"role", "payoff", "prob"}, {}};
    Table verdicts{"cycle_verdicts", {"pair", "relation", "lhs", "rhs"}, {}};
    if (res.triple) {
        const auto& t = *res.triple;
        for (const auto& [role, lot] : {std::pair{"X", &t.x}, std::pair{"Y", &t.y}, std::pair{"Z", &t.z}}) {
            for (const auto& o : lot->outcomes()) lotteries.rows.push_back({role, o.payoff, o.prob});
        }
        for (const auto& [pair, v] : {std::pair{"X>Y", &t.x_over_y}, std::pair{"Z>X", &t.z_over_x},
                                      std::pair{"Y>Z", &t.y_over_z}}) {
            verdicts.rows.push_back({pair, to_string(v->relation), v->lhs, v->rhs});
        }
    }
    r.tables.push_back(std::move(lotteries));
    r.tables.push_back(std::move(verdicts));
    return r;
}

Report lca_experiment(const ExperimentConfig& cfg) {
    const auto spec = required_spec(cfg);
    Report r;
    r.parameters = {{"spec", to_json(spec)}};
    r.tables.push_back(Table{"lca_deviation", {"deviation"}, {{lca_deviation(spec)}}});
    return r;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) v.back() = hi;
    return v;
}

std::vector<double> parse_menu(const std::string& text) {
    auto parse = [&](const std::string& s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError("--menu: cannot parse '" + s + "' as a number");
        }
        return v;
    };
    if (text.find(',') == std::string::npos) return coverage_grid(parse(text));
    std::vector<double> menu;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) menu.push_back(parse(item));
    for (double a : menu) {
        if (!(a >= -1.0 && a <= 2.0)) throw ConfigError("--menu: coverage levels must lie in [-1,2]");
    }
    return menu;
}

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : schemas()) v.push_back(k);
        return v;
    }();
    return ids;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        check_schema(cfg);
        Report report;
        const auto& e = cfg.experiment;
        if (e == "figure1") report = figure1(cfg);
        else if (e == "figure2") report = figure2(cfg);
        else if (e == "figure3") report = figure3(cfg);
        else if (e == "figure4") report = figure4(cfg);
        else if (e == "figure5") report = figure5(cfg);
        else if (e == "simulate") report = simulate_experiment(cfg);
        else if (e == "stationary") report = stationary_experiment(cfg);
        else if (e == "prefer") report = prefer_experiment(cfg);
        else if (e == "ce") report = ce_experiment(cfg);
        else if (e == "intransitivity") report = intransitivity_experiment(cfg);
        else if (e == "lca-deviation") report = lca_experiment(cfg);
        emit(e, report, cfg, out);
        return kExitOk;
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const SizeError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& ex) {
        err << "solver error in " << cfg.experiment << ": " << ex.what() << "\n";
        return kExitSolver;
    } catch (const DomainError& ex) {
        err << "solver error in " << cfg.experiment << ": " << ex.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace rlchoice
