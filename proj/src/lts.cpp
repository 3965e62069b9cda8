#include "desync/lts.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace desync {

Lts::Lts() : Lts({"0"}, 0, {}) {}

Lts::Lts(std::vector<std::string> state_labels, StateId initial, std::vector<Transition> transitions,
         std::map<Transition, Action> silent_origin) {
    const std::size_t n = state_labels.size();
    if (initial >= n) {
        throw std::invalid_argument("initial state out of range");
    }
    for (const Transition& t : transitions) {
        if (t.src >= n || t.dst >= n) {
            throw std::invalid_argument("transition endpoint out of range");
        }
    }
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());

    // Reachability on the raw graph.
    std::vector<std::size_t> first(n + 1, 0);
    for (const Transition& t : transitions) {
        ++first[t.src + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        first[i + 1] += first[i];
    }
    std::vector<char> seen(n, 0);
    std::vector<StateId> todo = {initial};
    seen[initial] = 1;
    while (!todo.empty()) {
        StateId s = todo.back();
        todo.pop_back();
        for (std::size_t k = first[s]; k < first[s + 1]; ++k) {
            StateId d = transitions[k].dst;
            if (!seen[d]) {
                seen[d] = 1;
                todo.push_back(d);
            }
        }
    }
    std::vector<StateId> renumber(n, 0);
    StateId next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) {
            renumber[i] = next++;
            labels_.push_back(std::move(state_labels[i]));
        }
    }
    initial_ = renumber[initial];
    std::vector<Action> used;
    for (const Transition& t : transitions) {
        if (!seen[t.src]) {
            continue;
        }
        Transition moved{renumber[t.src], t.action, renumber[t.dst]};
        if (auto it = silent_origin.find(t); it != silent_origin.end()) {
            silent_origin_.emplace(moved, it->second);
        }
        transitions_.push_back(std::move(moved));
        used.push_back(t.action);
    }
    // Renumbering is monotone, so the order is preserved.
    actions_ = ActionSet(std::move(used));
    offsets_.assign(labels_.size() + 1, 0);
    for (const Transition& t : transitions_) {
        ++offsets_[t.src + 1];
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        offsets_[i + 1] += offsets_[i];
    }
}

std::span<const Transition> Lts::outgoing(StateId s) const {
    if (s >= size()) {
        throw std::out_of_range("state out of range");
    }
    return std::span<const Transition>(transitions_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

std::optional<Action> Lts::silent_origin(const Transition& t) const {
    auto it = silent_origin_.find(t);
    if (it == silent_origin_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool Lts::enables(StateId s, const Action& a) const {
    for (const Transition& t : outgoing(s)) {
        if (t.action == a) {
            return true;
        }
    }
    return false;
}

std::vector<StateId> Lts::successors(StateId s, const Action& a) const {
    std::vector<StateId> out;
    for (const Transition& t : outgoing(s)) {
        if (t.action == a) {
            out.push_back(t.dst);
        }
    }
    return out;
}

std::vector<StateId> reachable(const Lts& lts, StateId from) {
    std::vector<char> seen(lts.size(), 0);
    std::vector<StateId> todo = {from};
    seen.at(from) = 1;
    while (!todo.empty()) {
        StateId s = todo.back();
        todo.pop_back();
        for (const Transition& t : lts.outgoing(s)) {
            if (!seen[t.dst]) {
                seen[t.dst] = 1;
                todo.push_back(t.dst);
            }
        }
    }
    std::vector<StateId> out;
    for (StateId s = 0; s < lts.size(); ++s) {
        if (seen[s]) {
            out.push_back(s);
        }
    }
    return out;
}

DeterminismResult is_deterministic(const Lts& lts) {
    for (StateId s = 0; s < lts.size(); ++s) {
        auto out = lts.outgoing(s);
        // Sorted by action then target: a repeated action with another target is adjacent.
        for (std::size_t k = 1; k < out.size(); ++k) {
            if (out[k].action == out[k - 1].action && out[k].dst != out[k - 1].dst) {
                return {false, NondeterminismWitness{s, out[k].action, out[k - 1].dst, out[k].dst}};
            }
        }
    }
    return {};
}

Lts relabel(const Lts& lts, const std::function<Action(const Action&)>& f) {
    std::vector<Transition> ts;
    std::map<Transition, Action> origin;
    for (const Transition& t : lts.transitions()) {
        Transition r{t.src, f(t.action), t.dst};
        if (r.action.is_tau()) {
            if (auto o = lts.silent_origin(t)) {
                origin.emplace(r, *o);
            } else if (!t.action.is_tau()) {
                origin.emplace(r, t.action);
            }
        }
        ts.push_back(std::move(r));
    }
    return Lts(lts.labels(), lts.initial(), std::move(ts), std::move(origin));
}

Lts parallel(const Lts& left, const Lts& right, const CommunicationFunction& comm,
             std::size_t budget) {
    using Pair = std::pair<StateId, StateId>;
    struct PairHash {
        std::size_t operator()(const Pair& p) const {
            return std::hash<std::uint64_t>()((std::uint64_t(p.first) << 32) | p.second);
        }
    };
    std::unordered_map<Pair, StateId, PairHash> index;
    std::vector<Pair> states;
    std::vector<std::string> labels;
    std::deque<StateId> frontier;
    auto intern = [&](Pair p) {
        auto [it, fresh] = index.emplace(p, static_cast<StateId>(states.size()));
        if (fresh) {
            if (states.size() >= budget) {
                throw BudgetExceeded(budget, states.size() + 1);
            }
            states.push_back(p);
            labels.push_back("(" + left.label(p.first) + " || " + right.label(p.second) + ")");
            frontier.push_back(it->second);
        }
        return it->second;
    };
    std::vector<Transition> ts;
    std::map<Transition, Action> origin;
    intern({left.initial(), right.initial()});
    while (!frontier.empty()) {
        StateId id = frontier.front();
        frontier.pop_front();
        auto [l, r] = states[id];
        for (const Transition& t : left.outgoing(l)) {
            Transition out{id, t.action, intern({t.dst, r})};
            if (auto o = left.silent_origin(t)) {
                origin.emplace(out, *o);
            }
            ts.push_back(std::move(out));
        }
        for (const Transition& t : right.outgoing(r)) {
            Transition out{id, t.action, intern({l, t.dst})};
            if (auto o = right.silent_origin(t)) {
                origin.emplace(out, *o);
            }
            ts.push_back(std::move(out));
        }
        for (const Transition& x : left.outgoing(l)) {
            for (const Transition& y : right.outgoing(r)) {
                if (auto c = comm.communicate(x.action, y.action)) {
                    ts.push_back({id, *c, intern({x.dst, y.dst})});
                }
            }
        }
    }
    return Lts(std::move(labels), 0, std::move(ts), std::move(origin));
}

Lts encapsulate(const Lts& lts, const std::function<bool(const Action&)>& blocked) {
    std::vector<Transition> ts;
    for (const Transition& t : lts.transitions()) {
        if (!blocked(t.action)) {
            ts.push_back(t);
        }
    }
    return Lts(lts.labels(), lts.initial(), std::move(ts), lts.silent_origins());
}

Lts encapsulate(const Lts& lts, const ActionSet& blocked) {
    return encapsulate(lts, [&](const Action& a) { return blocked.contains(a); });
}

Lts abstract(const Lts& lts, const ActionSet& hidden) {
    return relabel(lts, [&](const Action& a) { return hidden.contains(a) ? Action::tau() : a; });
}

} // namespace desync
