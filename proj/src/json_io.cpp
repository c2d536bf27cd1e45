#include "rlchoice/json_io.hpp"

#include <fstream>
#include <sstream>

#include "rlchoice/errors.hpp"

namespace rlchoice {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double number_field(const Json& j, const char* key, const std::string& path) {
    return number(field(j, key, path), path + "." + key);
}

// Constructors validate; rethrow their messages with the field path.
template <class F>
auto at_path(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
}

}  // namespace

Lottery lottery_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("sure")) {
        const double c = number(j["sure"], path + ".sure");
        return at_path(path, [&] { return Lottery::sure(c); });
    }
    if (j.contains("two_point")) {
        const auto& tp = j["two_point"];
        const std::string p = path + ".two_point";
        const double a = number_field(tp, "a", p);
        const double b = number_field(tp, "b", p);
        const double prob = number_field(tp, "p", p);
        return at_path(p, [&] { return Lottery::two_point(a, b, prob); });
    }
    if (j.contains("outcomes")) {
        const auto& arr = j["outcomes"];
        const std::string p = path + ".outcomes";
        if (!arr.is_array()) fail(p, "expected an array");
        std::vector<Outcome> outcomes;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string item = p + "[" + std::to_string(i) + "]";
            outcomes.push_back({number_field(arr[i], "payoff", item), number_field(arr[i], "prob", item)});
        }
        return at_path(p, [&] { return Lottery(std::move(outcomes)); });
    }
    fail(path, "expected one of 'outcomes', 'two_point', 'sure'");
}

Json to_json(const Lottery& lottery) {
    Json outcomes = Json::array();
    for (const auto& o : lottery.outcomes()) {
        outcomes.push_back({{"payoff", o.payoff}, {"prob", o.prob}});
    }
    return {{"outcomes", outcomes}};
}

ResponseFunction response_from_json(const Json& j, const std::string& path) {
    const auto& kind_json = field(j, "kind", path);
    if (!kind_json.is_string()) fail(path + ".kind", "expected a string");
    const auto kind = kind_json.get<std::string>();
    ResponseFunction u = ResponseFunction::identity();
    if (kind == "linear") {
        const double a = j.contains("a") ? number(j["a"], path + ".a") : 1.0;
        const double b = j.contains("b") ? number(j["b"], path + ".b") : 0.0;
        u = at_path(path, [&] { return ResponseFunction::linear(a, b); });
    } else if (kind == "framed_log") {
        const double s0 = number_field(j, "s0", path);
        const double shift = j.contains("shift") ? number(j["shift"], path + ".shift") : 1.0;
        u = at_path(path, [&] { return ResponseFunction::framed_log(s0, shift); });
    } else if (kind == "table") {
        const auto& arr = field(j, "entries", path);
        if (!arr.is_array()) fail(path + ".entries", "expected an array");
        std::vector<std::pair<double, double>> entries;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string item = path + ".entries[" + std::to_string(i) + "]";
            if (!arr[i].is_array() || arr[i].size() != 2) fail(item, "expected [payoff, response]");
            entries.emplace_back(number(arr[i][0], item), number(arr[i][1], item));
        }
        u = at_path(path, [&] { return ResponseFunction::table(std::move(entries)); });
    } else {
        fail(path + ".kind", "unknown response kind '" + kind + "'");
    }
    if (j.contains("factor")) {
        const double f = number(j["factor"], path + ".factor");
        u = at_path(path, [&] { return u.scaled(f); });
    }
    return u;
}

Json to_json(const ResponseFunction& u) {
    Json j;
    switch (u.kind()) {
        case ResponseFunction::Kind::linear:
            j = {{"kind", "linear"}, {"a", u.slope()}, {"b", u.intercept()}};
            break;
        case ResponseFunction::Kind::framed_log:
            j = {{"kind", "framed_log"}, {"s0", u.reference()}, {"shift", u.shift()}};
            break;
        case ResponseFunction::Kind::table: {
            Json entries = Json::array();
            for (const auto& [s, v] : u.entries()) entries.push_back({s, v});
            j = {{"kind", "table"}, {"entries", entries}};
            break;
        }
    }
    if (u.factor() != 1.0) j["factor"] = u.factor();
    return j;
}

ModelSpec model_spec_from_json(const Json& j) {
    const std::string root = "spec";
    const auto& alts = field(j, "alternatives", root);
    if (!alts.is_array()) fail("alternatives", "expected an array");
    ModelSpec spec;
    for (std::size_t i = 0; i < alts.size(); ++i) {
        const std::string p = "alternatives[" + std::to_string(i) + "]";
        const auto& a = alts[i];
        Alternative alt;
        const auto& id = field(a, "id", p);
        if (!id.is_string()) fail(p + ".id", "expected a string");
        alt.id = id.get<std::string>();
        alt.prior = a.contains("prior") ? number(a["prior"], p + ".prior") : 0.0;
        alt.reinforcement = lottery_from_json(field(a, "reinforcement", p), p + ".reinforcement");
        spec.alternatives.push_back(std::move(alt));
    }
    if (j.contains("response")) spec.response = response_from_json(j["response"], "response");
    if (j.contains("scale")) {
        const double beta = number_field(j["scale"], "beta", "scale");
        spec.scale = at_path("scale", [&] { return ScaleFunction(beta); });
    }
    if (j.contains("memory")) {
        if (!j["memory"].is_number_integer()) fail("memory", "expected an integer");
        spec.memory = j["memory"].get<int>();
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        fail(root, e.what());
    } catch (const std::domain_error& e) {
        fail(root, e.what());
    }
    return spec;
}

Json to_json(const ModelSpec& spec) {
    Json alts = Json::array();
    for (const auto& a : spec.alternatives) {
        alts.push_back({{"id", a.id}, {"prior", a.prior}, {"reinforcement", to_json(a.reinforcement)}});
    }
    return {{"alternatives", alts},
            {"response", to_json(spec.response)},
            {"scale", {{"beta", spec.scale.beta()}}},
            {"memory", spec.memory}};
}

Json load_json(const std::string& file_or_inline) {
    std::string text = file_or_inline;
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool inline_json = first != std::string::npos && (text[first] == '{' || text[first] == '[');
    if (!inline_json) {
        std::ifstream in(file_or_inline);
        if (!in) throw ConfigError("cannot open '" + file_or_inline + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError((inline_json ? std::string("inline JSON") : file_or_inline) + ": " + e.what());
    }
}

}  // namespace rlchoice
