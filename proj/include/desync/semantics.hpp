#pragma once

#include "desync/lts.hpp"
#include "desync/spec.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace desync {

inline constexpr std::size_t kDefaultMaxStates = 100000;

/// Outgoing SOS transitions of `t`; targets are canonical. Sorted by (action, target key),
/// duplicate-free.
std::vector<std::pair<Action, CanonicalTerm>> sos_successors(const SystemSpec& spec, const Term& t);

/// Breadth-first exploration from canonicalize(root). States are labelled with their
/// canonical keys and numbered in discovery order.
Lts generate_lts(const SystemSpec& spec, const Term& root, std::size_t budget = kDefaultMaxStates);

/// Exploration budget for a spec: `option max_states`, else kDefaultMaxStates.
std::size_t state_budget(const SystemSpec& spec);

struct Alphabet {
    ActionSet all;

    /// Receive actions.
    ActionSet inputs() const;
    /// Send actions.
    ActionSet outputs() const;
};

/// Visible actions on reachable transitions (tau excluded).
Alphabet alphabet(const Lts& lts);
Alphabet alphabet(const SystemSpec& spec, const Term& root, std::size_t budget = kDefaultMaxStates);

} // namespace desync
