#pragma once

#include "desync/conditions.hpp"
#include "desync/equivalence.hpp"
#include "desync/lts.hpp"

#include <json.hpp>

#include <string>

namespace desync {

/// Graphviz rendering. States by index, edges by (source, action, target).
std::string to_dot(const Lts& lts);

/// `{states:[...], initial, transitions:[{src, action, dst}]}`.
nlohmann::json to_json(const Lts& lts);

/// `{equivalent, relation:[[i, j], ...], counterexample:{left, right, action, detail}}`.
nlohmann::json to_json(const EquivalenceResult& result);

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const Verdict& verdict);

std::string to_text(const ConditionReport& report);
std::string to_text(const Verdict& verdict);
std::string to_text(const EquivalenceResult& result);

/// Actions joined with "." ("<>" for the empty trace).
std::string trace_str(const std::vector<Action>& trace);

} // namespace desync
