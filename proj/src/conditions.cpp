#include "desync/conditions.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace desync {

namespace {

std::set<StateId> step(const Lts& lts, const std::set<StateId>& from, const Action& a) {
    std::set<StateId> out;
    for (StateId s : from) {
        for (StateId d : lts.successors(s, a)) {
            out.insert(d);
        }
    }
    return out;
}

std::set<StateId> after(const Lts& lts, StateId from, const std::vector<Action>& word) {
    std::set<StateId> states = {from};
    for (const Action& a : word) {
        states = step(lts, states, a);
        if (states.empty()) {
            break;
        }
    }
    return states;
}

struct Trace {
    std::vector<Action> word;
    std::set<StateId> ends;
};

// Every executable trace over `alphabet` of length <= k from q, the empty trace included.
std::vector<Trace> traces_from(const Lts& lts, StateId q, const ActionSet& alphabet, std::size_t k) {
    std::vector<Trace> out = {{{}, {q}}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].word.size() == k) {
            continue;
        }
        for (const Action& a : alphabet) {
            auto next = step(lts, out[i].ends, a);
            if (next.empty()) {
                continue;
            }
            Trace t{out[i].word, std::move(next)};
            t.word.push_back(a);
            out.push_back(std::move(t));
        }
    }
    return out;
}

bool intersects(const std::set<StateId>& a, const std::set<StateId>& b) {
    for (StateId x : a) {
        if (b.count(x) != 0) {
            return true;
        }
    }
    return false;
}

HiddenPartition compute_partition(const SyncLoop& sync) {
    HiddenPartition out;
    for (const Action& a : sync.context.plant_in) {
        out.hpi.insert(Action::comm(a.label.name()));
    }
    for (const Action& a : sync.context.plant_out) {
        out.hpo.insert(Action::comm(a.label.name()));
    }
    return out;
}

// One direction of the reordering and prefix-swap properties.
struct Side {
    const ActionSet* actions;
    const Lts* party;  // the component that receives on this side
    std::function<StateId(StateId)> component;
};

Side input_side(const SyncLoop& sync, const HiddenPartition& partition) {
    return {&partition.hpi, &sync.plant, [&sync](StateId q) { return sync.plant_state(q); }};
}

Side output_side(const SyncLoop& sync, const HiddenPartition& partition) {
    return {&partition.hpo, &sync.supervisor, [&sync](StateId q) { return sync.supervisor_state(q); }};
}

// The party at q receives a into `target`: q must perform ~a into a state with that component.
bool immediate_step(const SyncLoop& sync, const Side& side, StateId q, const Action& comm, StateId target) {
    for (StateId d : sync.loop.successors(q, comm)) {
        if (side.component(d) == target) {
            return true;
        }
    }
    return false;
}

std::optional<ReorderingViolation> reorder_closure(const SyncLoop& sync, const Side& side) {
    const Lts& loop = sync.loop;
    for (StateId q = 0; q < loop.size(); ++q) {
        // Breadth-first over same-side steps, with the first path found to every state.
        std::map<StateId, std::vector<Action>> path = {{q, {}}};
        std::deque<StateId> todo = {q};
        std::map<Action, std::vector<Action>> enabled;
        while (!todo.empty()) {
            StateId r = todo.front();
            todo.pop_front();
            for (const Transition& t : loop.outgoing(r)) {
                if (!side.actions->contains(t.action)) {
                    continue;
                }
                enabled.emplace(t.action, path[r]);
                if (path.count(t.dst) == 0) {
                    auto p = path[r];
                    p.push_back(t.action);
                    path.emplace(t.dst, std::move(p));
                    todo.push_back(t.dst);
                }
            }
        }
        for (const auto& [comm, mu] : enabled) {
            Action receive = comm.with_kind(ActionKind::Receive);
            for (StateId target : side.party->successors(side.component(q), receive)) {
                if (!immediate_step(sync, side, q, comm, target)) {
                    return ReorderingViolation{q, comm, mu};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ReorderingViolation> reorder_enumerate(const SyncLoop& sync, const Side& side,
                                                     std::size_t max_length) {
    const Lts& loop = sync.loop;
    for (StateId q = 0; q < loop.size(); ++q) {
        std::optional<ReorderingViolation> found;
        std::vector<Action> mu;
        std::function<void(const std::set<StateId>&)> visit = [&](const std::set<StateId>& states) {
            for (StateId r : states) {
                for (const Transition& t : loop.outgoing(r)) {
                    if (found || !side.actions->contains(t.action)) {
                        continue;
                    }
                    Action receive = t.action.with_kind(ActionKind::Receive);
                    for (StateId target : side.party->successors(side.component(q), receive)) {
                        if (!immediate_step(sync, side, q, t.action, target)) {
                            found = ReorderingViolation{q, t.action, mu};
                            return;
                        }
                    }
                }
            }
            if (found || mu.size() == max_length) {
                return;
            }
            for (const Action& a : *side.actions) {
                auto next = step(loop, states, a);
                if (next.empty()) {
                    continue;
                }
                mu.push_back(a);
                visit(next);
                mu.pop_back();
                if (found) {
                    return;
                }
            }
        };
        visit({q});
        if (found) {
            return found;
        }
    }
    return std::nullopt;
}

PrefixSwapResult prefix_swap(const SyncLoop& sync, const Side& side, std::size_t k) {
    const Lts& loop = sync.loop;
    for (StateId q = 0; q < loop.size(); ++q) {
        for (const Trace& mu : traces_from(loop, q, *side.actions, k)) {
            for (StateId r : mu.ends) {
                for (const Transition& t : loop.outgoing(r)) {
                    if (!side.actions->contains(t.action)) {
                        continue;
                    }
                    Action receive = t.action.with_kind(ActionKind::Receive);
                    for (StateId target : side.party->successors(side.component(q), receive)) {
                        bool ok = false;
                        for (StateId q1 : loop.successors(q, t.action)) {
                            if (side.component(q1) == target && after(loop, q1, mu.word).count(t.dst) != 0) {
                                ok = true;
                                break;
                            }
                        }
                        if (!ok) {
                            return {false, PrefixSwapViolation{q, t.action, mu.word}};
                        }
                    }
                }
            }
        }
    }
    return {};
}

std::optional<WellPosedViolation> send_unmatched(const Lts& sender, StateId from, const Lts& receiver,
                                                 StateId to, const std::function<bool(StateId, StateId)>& rel) {
    for (const Transition& t : sender.outgoing(from)) {
        if (!t.action.is_send()) {
            continue;
        }
        bool matched = false;
        for (StateId d : receiver.successors(to, t.action.with_kind(ActionKind::Receive))) {
            if (rel(t.dst, d)) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            return WellPosedViolation{0, 0, t.action, {}};
        }
    }
    return std::nullopt;
}

} // namespace

IoCheck is_io_process(const Lts& lts) {
    Alphabet alpha = alphabet(lts);
    for (const Action& in : alpha.inputs()) {
        for (const Action& out : alpha.outputs()) {
            if (in.label == out.label) {
                return {false, "label '" + in.label.name() + "' is both received and sent"};
            }
        }
    }
    for (const Action& a : lts.actions()) {
        if (a.is_comm()) {
            return {false, "communicated action " + a.str() + " occurs"};
        }
        if (a.is_tau()) {
            return {false, "silent action occurs"};
        }
    }
    return {};
}

IoCheck is_io_process(const SystemSpec& spec, const Term& root, std::size_t budget) {
    return is_io_process(generate_lts(spec, root, budget));
}

bool is_requirement(const Lts& lts) {
    for (const Action& a : lts.actions()) {
        if (!a.is_comm()) {
            return false;
        }
    }
    return is_deterministic(lts).deterministic;
}

bool is_requirement(const SystemSpec& spec, const Term& root, std::size_t budget) {
    return is_requirement(generate_lts(spec, root, budget));
}

EquivalenceResult check_requirement_equation(const SystemSpec& spec, std::size_t budget) {
    Term r = spec.requirement_term();
    return branching_bisim(compose_sync(spec, budget), generate_lts(spec, r, budget));
}

HiddenPartition partition_hidden(const SyncLoop& sync) {
    HiddenPartition out = compute_partition(sync);
    if ((out.hpi.empty() || out.hpo.empty()) && !sync.loop.transitions().empty()) {
        throw NonEmptinessViolation(std::string("the plant has no ") + (out.hpi.empty() ? "inputs" : "outputs") +
                                    ", so the hidden actions cannot be split into two non-empty sides");
    }
    return out;
}

HiddenPartition partition_hidden(const SystemSpec& spec, std::size_t budget) {
    return partition_hidden(build_sync_loop(spec, budget));
}

WellPosedResult check_well_posed(const Lts& plant, const Lts& supervisor) {
    const std::size_t np = plant.size();
    const std::size_t ns = supervisor.size();
    std::vector<char> in(np * ns, 1);
    std::vector<std::optional<Action>> first_round(np * ns);
    auto idx = [ns](StateId p, StateId s) { return std::size_t(p) * ns + s; };
    auto plant_rel = [&](StateId p, StateId s) { return in[idx(p, s)] != 0; };
    auto sup_rel = [&](StateId s, StateId p) { return in[idx(p, s)] != 0; };
    bool first = true;
    while (true) {
        std::vector<std::size_t> removed;
        for (StateId p = 0; p < np; ++p) {
            for (StateId s = 0; s < ns; ++s) {
                if (!in[idx(p, s)]) {
                    continue;
                }
                auto bad = send_unmatched(plant, p, supervisor, s, plant_rel);
                if (!bad) {
                    bad = send_unmatched(supervisor, s, plant, p, sup_rel);
                }
                if (bad) {
                    removed.push_back(idx(p, s));
                    if (first) {
                        first_round[idx(p, s)] = bad->action;
                    }
                }
            }
        }
        if (removed.empty()) {
            break;
        }
        for (std::size_t i : removed) {
            in[i] = 0;
        }
        first = false;
    }

    // Paired moves of the synchronous product, optionally restricted to the relation.
    auto explore = [&](bool restricted, const std::function<bool(StateId, StateId)>& stop)
        -> std::pair<std::vector<std::pair<StateId, StateId>>, std::vector<Action>> {
        std::map<std::pair<StateId, StateId>, std::pair<std::pair<StateId, StateId>, Action>> parent;
        std::pair<StateId, StateId> start{plant.initial(), supervisor.initial()};
        std::set<std::pair<StateId, StateId>> seen = {start};
        std::deque<std::pair<StateId, StateId>> todo = {start};
        while (!todo.empty()) {
            auto cur = todo.front();
            todo.pop_front();
            if (stop(cur.first, cur.second)) {
                std::vector<Action> path;
                for (auto at = cur; at != start; at = parent.at(at).first) {
                    path.push_back(parent.at(at).second);
                }
                std::reverse(path.begin(), path.end());
                return {{cur}, path};
            }
            for (const Transition& x : plant.outgoing(cur.first)) {
                for (const Transition& y : supervisor.outgoing(cur.second)) {
                    auto c = gamma(x.action, y.action);
                    if (!c) {
                        continue;
                    }
                    std::pair<StateId, StateId> next{x.dst, y.dst};
                    if (restricted && !in[idx(next.first, next.second)]) {
                        continue;
                    }
                    if (seen.insert(next).second) {
                        parent.emplace(next, std::make_pair(cur, *c));
                        todo.push_back(next);
                    }
                }
            }
        }
        return {std::vector<std::pair<StateId, StateId>>(seen.begin(), seen.end()), {}};
    };

    WellPosedResult result;
    result.pass = in[idx(plant.initial(), supervisor.initial())] != 0;
    if (result.pass) {
        result.witness = explore(true, [](StateId, StateId) { return false; }).first;
    } else {
        auto [hit, path] = explore(false, [&](StateId p, StateId s) { return first_round[idx(p, s)].has_value(); });
        auto [p, s] = hit.front();
        result.violation = WellPosedViolation{p, s, *first_round[idx(p, s)], std::move(path)};
    }
    return result;
}

WellPosedResult check_well_posed(const SystemSpec& spec, std::size_t budget) {
    SyncLoop sync = build_sync_loop(spec, budget);
    return check_well_posed(sync.plant, sync.supervisor);
}

ReorderingResult check_reordering(const SyncLoop& sync, const HiddenPartition& partition) {
    for (const Side& side : {input_side(sync, partition), output_side(sync, partition)}) {
        if (auto v = reorder_closure(sync, side)) {
            return {false, std::move(v)};
        }
    }
    return {};
}

ReorderingResult check_reordering(const SystemSpec& spec, std::size_t budget) {
    SyncLoop sync = build_sync_loop(spec, budget);
    return check_reordering(sync, compute_partition(sync));
}

ReorderingResult check_reordering_brute_force(const SyncLoop& sync, const HiddenPartition& partition,
                                              std::optional<std::size_t> max_length) {
    std::size_t limit = max_length.value_or(sync.loop.size());
    for (const Side& side : {input_side(sync, partition), output_side(sync, partition)}) {
        if (auto v = reorder_enumerate(sync, side, limit)) {
            return {false, std::move(v)};
        }
    }
    return {};
}

DiamondResult check_diamond(const Lts& loop) {
    for (StateId q = 0; q < loop.size(); ++q) {
        auto out = loop.outgoing(q);
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                const Action& a = out[i].action;
                const Action& b = out[j].action;
                if (a == b) {
                    continue;
                }
                auto left = loop.successors(out[i].dst, b);
                auto right = loop.successors(out[j].dst, a);
                bool closed = std::any_of(left.begin(), left.end(), [&](StateId s) {
                    return std::find(right.begin(), right.end(), s) != right.end();
                });
                if (!closed) {
                    return {false, DiamondViolation{q, a, b}};
                }
            }
        }
    }
    return {};
}

GeneralizedDiamondResult test_generalized_diamond(const Lts& loop, const HiddenPartition& partition,
                                                  std::size_t k) {
    for (StateId q = 0; q < loop.size(); ++q) {
        auto ins = traces_from(loop, q, partition.hpi, k);
        auto outs = traces_from(loop, q, partition.hpo, k);
        for (const Trace& xi : ins) {
            for (const Trace& xo : outs) {
                for (StateId q1 : xi.ends) {
                    auto from_left = after(loop, q1, xo.word);
                    for (StateId q2 : xo.ends) {
                        if (!intersects(from_left, after(loop, q2, xi.word))) {
                            return {false, GeneralizedDiamondViolation{q, xi.word, xo.word}};
                        }
                    }
                }
            }
        }
    }
    return {};
}

PrefixSwapResult test_input_prefix_swap(const SyncLoop& sync, const HiddenPartition& partition, std::size_t k) {
    return prefix_swap(sync, input_side(sync, partition), k);
}

PrefixSwapResult test_output_prefix_swap(const SyncLoop& sync, const HiddenPartition& partition, std::size_t k) {
    return prefix_swap(sync, output_side(sync, partition), k);
}

bool ConditionReport::all_pass() const {
    return io_plant.io && io_supervisor.io && deterministic.plant && deterministic.supervisor &&
           deterministic.loop && partition.pass && well_posed.pass && reordering.pass && diamond.pass;
}

ConditionReport check_conditions(const SyncLoop& sync) {
    ConditionReport report;
    report.io_plant = is_io_process(sync.plant);
    report.io_supervisor = is_io_process(sync.supervisor);
    report.deterministic = {is_deterministic(sync.plant).deterministic,
                            is_deterministic(sync.supervisor).deterministic,
                            is_deterministic(sync.loop).deterministic};
    report.partition.partition = compute_partition(sync);
    try {
        partition_hidden(sync);
        auto& p = report.partition.partition;
        if (p.hpi.empty() || p.hpo.empty()) {
            report.partition.message = "warning: one side of the hidden partition is empty; the loop has no transitions";
        }
    } catch (const NonEmptinessViolation& e) {
        report.partition.pass = false;
        report.partition.message = e.what();
    }
    report.well_posed = check_well_posed(sync.plant, sync.supervisor);
    report.reordering = check_reordering(sync, report.partition.partition);
    report.diamond = check_diamond(sync.loop);
    return report;
}

Verdict desync_verdict(const SystemSpec& spec, const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                       std::size_t budget) {
    SyncLoop sync = build_sync_loop(spec, budget);
    Verdict verdict;
    verdict.conditions = check_conditions(sync);
    verdict.theorem_applies = verdict.conditions.all_pass();
    if (verdict.theorem_applies) {
        verdict.tau_inert = true;
    }
    for (auto [m, n] : sizes) {
        Lts async = compose_async(sync, m, n, budget);
        bool eq = branching_bisim(sync.loop, async).equivalent;
        verdict.direct.push_back({m, n, eq});
        if (!verdict.theorem_applies) {
            continue;
        }
        std::string size = std::to_string(m) + "x" + std::to_string(n);
        if (!eq) {
            throw InvariantViolation("all conditions hold but the loop with bags " + size +
                                     " is not branching bisimilar to the synchronous loop");
        }
        TauInertness inert = is_tau_inert(async);
        if (!inert.inert) {
            throw InvariantViolation("all conditions hold but the loop with bags " + size +
                                     " has a non-inert silent step");
        }
    }
    return verdict;
}

} // namespace desync
