#pragma once

#include "desync/term.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace desync {

/// A closed system of recursive definitions plus the supervisory-control roles.
///
/// Plant, supervisor and requirement name definitions in `defs`; the definitions reachable
/// from them are regular (deadlock, prefix, choice, variables). Any definition may be used as
/// the root of an exploration.
struct SystemSpec {
    std::map<std::string, Term> defs;
    std::optional<std::string> plant;
    std::optional<std::string> supervisor;
    std::optional<std::string> requirement;
    std::map<std::string, std::int64_t> options;

    /// Looks up a definition by name; throws std::out_of_range for unknown names.
    const Term& def(const std::string& name) const;

    Term plant_term() const;
    Term supervisor_term() const;
    Term requirement_term() const;

    std::optional<std::int64_t> option(const std::string& name) const;

    friend bool operator==(const SystemSpec& a, const SystemSpec& b);
};

/// Parses the spec language:
///
///     spec   := { decl }
///     decl   := role ident "=" term ";" | "option" ident "=" integer ";"
///     role   := "plant" | "supervisor" | "requirement" | "process"
///     term   := seq { "+" seq }
///     seq    := action "." seq | atom
///     atom   := "0" | ident | "(" term ")"
///             | ("par" | "merge") "(" term "," term ")"
///             | ("encap" | "hide") "{" [ action { "," action } ] "}" "(" term ")"
///             | "rename" "{" [ action "->" action { "," ... } ] "}" "(" term ")"
///     action := ("?" | "!" | "~") ident [ "^" ] | "tau"
///
/// `#` starts a comment that runs to the end of the line.
SystemSpec parse_spec(std::string_view text);

/// Parses a single term against the definitions of `context` (used for ad-hoc roots).
Term parse_term(std::string_view text, const SystemSpec& context);

/// Pretty-prints a spec such that parse_spec(print_spec(s)) == s.
std::string print_spec(const SystemSpec& spec);

/// Throws UnguardedRecursion or UnboundVariable if the definitions are not closed and guarded.
void validate_definitions(const SystemSpec& spec);

} // namespace desync
