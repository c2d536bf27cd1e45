#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlchoice/experiments.hpp"
#include "rlchoice/json_io.hpp"

using namespace rlchoice;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const ExperimentConfig& cfg) {
    std::ostringstream out, err;
    const int code = run_experiment(cfg, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& table) {
    std::istringstream in(text);
    std::vector<std::vector<std::string>> rows;
    bool inside = false;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("# table: ", 0) == 0) {
            inside = line == "# table: " + table;
            std::getline(in, line);  // header
            continue;
        }
        if (!inside || line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kZeroSpec =
    R"({"alternatives":[{"id":"A","prior":0,"reinforcement":{"sure":0}},{"id":"B","prior":1,"reinforcement":{"sure":0}}]})";

}  // namespace

TEST_CASE("helpers") {
    CHECK(linspace(0, 1, 3) == std::vector<double>{0, 0.5, 1});
    CHECK(parse_menu("0.5").size() == 7);
    CHECK(parse_menu("-1,1,2") == std::vector<double>{-1, 1, 2});
    CHECK_THROWS(parse_menu("a,b"));
    CHECK_THROWS(parse_menu("-2,1"));
    CHECK(experiment_ids().size() == 11);
}

TEST_CASE("figure 2 orientation") {
    ExperimentConfig cfg;
    cfg.experiment = "figure2";
    cfg.grid = 21;
    const auto r = run(cfg);
    REQUIRE(r.code == kExitOk);
    const auto gains = csv_rows(r.out, "gains");
    const auto losses = csv_rows(r.out, "losses");
    REQUIRE(gains.size() == 21);
    for (std::size_t i = 1; i + 1 < gains.size(); ++i) {
        CHECK(std::stod(gains[i][1]) < std::stod(gains[i][0]));
        CHECK(std::stod(losses[i][1]) > -std::stod(losses[i][0]));
    }
}

TEST_CASE("stationary on a zero-reinforcement spec gives prior odds") {
    ExperimentConfig cfg;
    cfg.experiment = "stationary";
    cfg.spec = kZeroSpec;
    for (std::string chain : {"extended", "paper", "closed-form"}) {
        cfg.chain = chain;
        const auto r = run(cfg);
        REQUIRE(r.code == kExitOk);
        const auto rows = csv_rows(r.out, "stationary");
        REQUIRE(rows.size() == 2);
        CHECK(std::stod(rows[0][1]) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-12));
    }
}

TEST_CASE("simulate output is byte-identical across runs") {
    ExperimentConfig cfg;
    cfg.experiment = "simulate";
    cfg.spec = kZeroSpec;
    cfg.steps = 20000;
    cfg.seed = 9;
    const auto a = run(cfg);
    const auto b = run(cfg);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    cfg.seed = 10;
    CHECK(run(cfg).out != a.out);
}

TEST_CASE("file output writes tables and sidecars") {
    const std::filesystem::path dir = "experiments_test_out";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg;
    cfg.experiment = "ce";
    cfg.x = R"({"two_point":{"a":1,"b":0,"p":0.5}})";
    cfg.out = dir.string();
    REQUIRE(run(cfg).code == kExitOk);
    CHECK(slurp(dir / "certainty_equivalent.csv").rfind("c,expectation,residual\n0.36032365", 0) == 0);
    const auto meta = Json::parse(slurp(dir / "certainty_equivalent.params.json"));
    CHECK(meta["parameters"]["beta"] == 0.1);
    cfg.format = OutputFormat::json;
    REQUIRE(run(cfg).code == kExitOk);
    const auto doc = Json::parse(slurp(dir / "certainty_equivalent.json"));
    CHECK(doc["columns"][0] == "c");
    CHECK(doc["rows"][0][1] == 0.5);
}

TEST_CASE("error exit codes") {
    ExperimentConfig cfg;
    cfg.experiment = "nope";
    CHECK(run(cfg).code == kExitConfig);
    cfg.experiment = "figure1";
    cfg.alpha = 1.0;
    const auto r = run(cfg);
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("--alpha") != std::string::npos);
    cfg = {};
    cfg.experiment = "simulate";
    CHECK(run(cfg).code == kExitConfig);
    cfg.spec = "{bad json";
    CHECK(run(cfg).code == kExitConfig);
    cfg = {};
    cfg.experiment = "figure5";
    cfg.loss = 6.0;  // pushes a = -1 payoffs below the utility's domain
    cfg.grid = 3;
    const auto d = run(cfg);
    CHECK(d.code == kExitSolver);
    CHECK(d.err.find("cell") != std::string::npos);
    cfg = {};
    cfg.experiment = "figure2";
    cfg.grid = 1;
    CHECK(run(cfg).code == kExitConfig);
}
