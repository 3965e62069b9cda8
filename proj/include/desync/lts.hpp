#pragma once

#include "desync/action.hpp"
#include "desync/term.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace desync {

using StateId = std::uint32_t;

struct Transition {
    StateId src = 0;
    Action action;
    StateId dst = 0;

    friend auto operator<=>(const Transition&, const Transition&) = default;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Finite labelled transition system.
///
/// Every state is reachable from the initial state; states that are not are dropped on
/// construction (surviving states keep their relative order). Transitions are a sorted set
/// ordered by (source, action, target).
class Lts {
public:
    /// One state, no transitions.
    Lts();

    Lts(std::vector<std::string> state_labels, StateId initial, std::vector<Transition> transitions,
        std::map<Transition, Action> silent_origin = {});

    std::size_t size() const { return labels_.size(); }
    StateId initial() const { return initial_; }
    const std::string& label(StateId s) const { return labels_.at(s); }
    const std::vector<std::string>& labels() const { return labels_; }

    const std::vector<Transition>& transitions() const { return transitions_; }
    std::span<const Transition> outgoing(StateId s) const;

    /// Actions occurring on transitions.
    const ActionSet& actions() const { return actions_; }

    /// For tau transitions produced by abstraction: the action that was hidden.
    std::optional<Action> silent_origin(const Transition& t) const;
    const std::map<Transition, Action>& silent_origins() const { return silent_origin_; }

    bool enables(StateId s, const Action& a) const;
    std::vector<StateId> successors(StateId s, const Action& a) const;

    friend bool operator==(const Lts& a, const Lts& b) {
        return a.labels_ == b.labels_ && a.initial_ == b.initial_ &&
               a.transitions_ == b.transitions_;
    }

private:
    std::vector<std::string> labels_;
    StateId initial_ = 0;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_;
    ActionSet actions_;
    std::map<Transition, Action> silent_origin_;
};

/// States with a (possibly empty) path from `from`, ascending.
std::vector<StateId> reachable(const Lts& lts, StateId from);

struct NondeterminismWitness {
    StateId state;
    Action action;
    StateId first;
    StateId second;
};

struct DeterminismResult {
    bool deterministic = true;
    std::optional<NondeterminismWitness> witness;
};

DeterminismResult is_deterministic(const Lts& lts);

/// Applies `f` to every action label. Silent-origin metadata is kept for tau results.
Lts relabel(const Lts& lts, const std::function<Action(const Action&)>& f);

/// Parallel composition of two LTSs: interleaving plus communication through `comm`.
Lts parallel(const Lts& left, const Lts& right, const CommunicationFunction& comm,
             std::size_t budget);

/// Removes transitions labelled with any action in `blocked`; prunes unreachable states.
Lts encapsulate(const Lts& lts, const ActionSet& blocked);
Lts encapsulate(const Lts& lts, const std::function<bool(const Action&)>& blocked);

/// Renames actions in `hidden` to tau, remembering which action each tau hides.
Lts abstract(const Lts& lts, const ActionSet& hidden);

} // namespace desync
