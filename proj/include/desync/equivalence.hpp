#pragma once

#include "desync/closed_loop.hpp"
#include "desync/lts.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace desync {

/// Pairs (state of the left LTS, state of the right LTS).
struct Relation {
    std::vector<std::pair<StateId, StateId>> pairs;

    bool contains(StateId left, StateId right) const;
};

/// Distinguishing information for a pair of inequivalent states.
struct Counterexample {
    StateId left = 0;
    StateId right = 0;
    /// Action one side can perform (possibly after inert silent steps) and the other cannot match.
    Action action;
    std::string detail;
};

struct EquivalenceResult {
    bool equivalent = false;
    std::optional<Relation> witness;
    std::optional<Counterexample> counterexample;
};

/// Strong bisimilarity by partition refinement over the disjoint union.
EquivalenceResult strong_bisim(const Lts& left, const Lts& right);

/// Branching bisimilarity (non-rooted, divergence blind) by partition refinement over the
/// disjoint union: silent cycles are collapsed first, then blocks are split by
/// (action, target block) pairs reachable through inert silent steps.
EquivalenceResult branching_bisim(const Lts& left, const Lts& right);

/// Branching-bisimilarity classes of a single LTS. Class ids are numbered by first state.
std::vector<std::size_t> branching_classes(const Lts& lts);
std::vector<std::size_t> strong_classes(const Lts& lts);

/// Reference checker: greatest fixpoint of the four transfer clauses over all state pairs.
/// Throws SizeLimit when |left| * |right| exceeds `max_pairs`.
EquivalenceResult naive_branching_oracle(const Lts& left, const Lts& right,
                                         std::size_t max_pairs = 1000000);

/// True iff every pair in `relation` satisfies the four transfer clauses with respect to
/// `relation` itself.
bool is_branching_bisimulation(const Lts& left, const Lts& right, const Relation& relation);

struct TauInertness {
    bool inert = true;
    std::optional<Transition> witness;
};

/// Every silent step connects branching-bisimilar states.
TauInertness is_tau_inert(const Lts& lts);

/// One state per class of `classes`. Silent steps inside a class are dropped unless
/// `keep_inner_silent` is set, as strong classes need.
Lts quotient(const Lts& lts, const std::vector<std::size_t>& classes, bool keep_inner_silent = false);

enum class Direction { In, Out };

/// ~a -> ?a (In) or ~a -> !a (Out), order preserved.
std::vector<Action> project_trace(const std::vector<Action>& trace, Direction direction);

/// Replays `trace` in the loop and checks that plant and supervisor can perform their projections
/// (plant receives the plant-input side, sends the plant-output side; supervisor mirrored) and
/// end in the component states of every loop state the trace reaches.
/// Throws TraceNotExecutable if the loop cannot perform the trace.
bool check_trace_projection(const SyncLoop& sync, const std::vector<Action>& trace);
bool check_trace_projection(const SystemSpec& spec, const std::vector<Action>& trace);

} // namespace desync
