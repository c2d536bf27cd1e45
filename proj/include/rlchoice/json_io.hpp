#pragma once

#include <string>

#include <json.hpp>

#include "rlchoice/lottery.hpp"
#include "rlchoice/model.hpp"

namespace rlchoice {

using Json = nlohmann::json;

// Readers throw ConfigError naming the offending field path, e.g.
// "alternatives[1].reinforcement.two_point.p: expected a number".

/// {"outcomes": [{"payoff": s, "prob": p}, ...]}, {"two_point": {"a", "b", "p"}} or {"sure": c}
Lottery lottery_from_json(const Json& j, const std::string& path = "lottery");
Json to_json(const Lottery& lottery);

/// {"kind": "linear", "a", "b"} | {"kind": "framed_log", "s0", "shift"?}
/// | {"kind": "table", "entries": [[payoff, response], ...]}; optional "factor".
ResponseFunction response_from_json(const Json& j, const std::string& path = "response");
Json to_json(const ResponseFunction& u);

ModelSpec model_spec_from_json(const Json& j);
Json to_json(const ModelSpec& spec);

/// Parses `text` as JSON if it starts with '{', otherwise reads it as a file
/// path. Syntax errors carry nlohmann's line/column context.
Json load_json(const std::string& file_or_inline);

}  // namespace rlchoice
