#include "desync/equivalence.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace desync {

namespace {

constexpr std::size_t kTau = 0;

// Integer-labelled graph; action id 0 is tau.
struct Graph {
    std::vector<Action> actions{Action::tau()};
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;

    std::size_t size() const { return out.size(); }
};

Graph disjoint_union(const Lts& left, const Lts* right) {
    std::set<Action> visible;
    for (const Lts* l : {&left, right}) {
        if (!l) {
            continue;
        }
        for (const Action& a : l->actions()) {
            if (!a.is_tau()) {
                visible.insert(a);
            }
        }
    }
    Graph g;
    g.actions.insert(g.actions.end(), visible.begin(), visible.end());
    std::map<Action, std::size_t> id;
    for (std::size_t i = 0; i < g.actions.size(); ++i) {
        id[g.actions[i]] = i;
    }
    std::size_t n1 = left.size();
    g.out.resize(n1 + (right ? right->size() : 0));
    for (const Transition& t : left.transitions()) {
        g.out[t.src].emplace_back(id.at(t.action), t.dst);
    }
    if (right) {
        for (const Transition& t : right->transitions()) {
            g.out[n1 + t.src].emplace_back(id.at(t.action), n1 + t.dst);
        }
    }
    return g;
}

// Tarjan over silent edges, iterative. Returns component id per node.
std::vector<std::size_t> tau_components(const Graph& g) {
    const std::size_t n = g.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;
    std::size_t ncomp = 0;
    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) {
            continue;
        }
        std::vector<Frame> call = {{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& edges = g.out[f.node];
            if (f.edge < edges.size()) {
                auto [a, w] = edges[f.edge++];
                if (a != kTau) {
                    continue;
                }
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            call.pop_back();
            if (!call.empty()) {
                low[call.back().node] = std::min(low[call.back().node], low[v]);
            }
        }
    }
    return comp;
}

struct Separation {
    Action action;
    bool left_has_it = true;
};

std::vector<std::size_t> renumber_by_first(const std::vector<std::size_t>& block) {
    std::map<std::size_t, std::size_t> seen;
    std::vector<std::size_t> out(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
        auto [it, _] = seen.emplace(block[i], seen.size());
        out[i] = it->second;
    }
    return out;
}

// Branching-bisimulation classes of every node of g. When `watch` is set, records the first
// split that separates its two nodes.
std::vector<std::size_t> branching_refine(const Graph& g,
                                          std::optional<std::pair<std::size_t, std::size_t>> watch,
                                          std::optional<Separation>* separation) {
    std::vector<std::size_t> comp = tau_components(g);
    std::size_t nc = 0;
    for (std::size_t c : comp) {
        nc = std::max(nc, c + 1);
    }
    // Contracted graph: silent steps inside a component are dropped.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(nc);
    for (std::size_t v = 0; v < g.size(); ++v) {
        for (auto [a, w] : g.out[v]) {
            if (a == kTau && comp[v] == comp[w]) {
                continue;
            }
            out[comp[v]].emplace_back(a, comp[w]);
        }
    }
    std::vector<std::vector<std::size_t>> tau_in(nc);
    for (std::size_t v = 0; v < nc; ++v) {
        std::sort(out[v].begin(), out[v].end());
        out[v].erase(std::unique(out[v].begin(), out[v].end()), out[v].end());
        for (auto [a, w] : out[v]) {
            if (a == kTau) {
                tau_in[w].push_back(v);
            }
        }
    }

    std::vector<std::size_t> block(nc, 0);
    std::size_t nblocks = nc == 0 ? 0 : 1;
    std::vector<char> pos(nc, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t b = 0; b < nblocks; ++b) {
            std::vector<std::size_t> members;
            for (std::size_t v = 0; v < nc; ++v) {
                if (block[v] == b) {
                    members.push_back(v);
                }
            }
            std::set<std::pair<std::size_t, std::size_t>> splitters;
            for (std::size_t v : members) {
                for (auto [a, w] : out[v]) {
                    if (!(a == kTau && block[w] == b)) {
                        splitters.emplace(a, block[w]);
                    }
                }
            }
            for (auto [a, target] : splitters) {
                std::vector<std::size_t> work;
                for (std::size_t v : members) {
                    pos[v] = 0;
                    for (auto [x, w] : out[v]) {
                        if (x == a && block[w] == target) {
                            pos[v] = 1;
                            work.push_back(v);
                            break;
                        }
                    }
                }
                // Backwards along inert silent steps.
                while (!work.empty()) {
                    std::size_t v = work.back();
                    work.pop_back();
                    for (std::size_t u : tau_in[v]) {
                        if (block[u] == b && !pos[u]) {
                            pos[u] = 1;
                            work.push_back(u);
                        }
                    }
                }
                std::size_t hits = 0;
                for (std::size_t v : members) {
                    hits += pos[v];
                }
                if (hits == members.size()) {
                    continue;
                }
                if (watch && separation && !*separation) {
                    std::size_t l = comp[watch->first];
                    std::size_t r = comp[watch->second];
                    if (block[l] == b && block[r] == b && pos[l] != pos[r]) {
                        *separation = Separation{g.actions[a], pos[l] != 0};
                    }
                }
                for (std::size_t v : members) {
                    if (!pos[v]) {
                        block[v] = nblocks;
                    }
                }
                ++nblocks;
                changed = true;
                break;
            }
        }
    }
    std::vector<std::size_t> result(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        result[v] = block[comp[v]];
    }
    return renumber_by_first(result);
}

std::vector<std::size_t> strong_refine(const Graph& g,
                                       std::optional<std::pair<std::size_t, std::size_t>> watch,
                                       std::optional<Separation>* separation) {
    const std::size_t n = g.size();
    std::vector<std::size_t> block(n, 0);
    std::size_t nblocks = n == 0 ? 0 : 1;
    using Signature = std::vector<std::pair<std::size_t, std::size_t>>;
    while (true) {
        std::vector<Signature> sig(n);
        for (std::size_t v = 0; v < n; ++v) {
            for (auto [a, w] : g.out[v]) {
                sig[v].emplace_back(a, block[w]);
            }
            std::sort(sig[v].begin(), sig[v].end());
            sig[v].erase(std::unique(sig[v].begin(), sig[v].end()), sig[v].end());
        }
        std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t v = 0; v < n; ++v) {
            auto [it, _] = ids.emplace(std::make_pair(block[v], sig[v]), ids.size());
            next[v] = it->second;
        }
        if (watch && separation && !*separation) {
            auto [l, r] = *watch;
            if (block[l] == block[r] && next[l] != next[r]) {
                Signature only_left;
                Signature only_right;
                std::set_difference(sig[l].begin(), sig[l].end(), sig[r].begin(), sig[r].end(),
                                    std::back_inserter(only_left));
                std::set_difference(sig[r].begin(), sig[r].end(), sig[l].begin(), sig[l].end(),
                                    std::back_inserter(only_right));
                if (!only_left.empty()) {
                    *separation = Separation{g.actions[only_left.front().first], true};
                } else {
                    *separation = Separation{g.actions[only_right.front().first], false};
                }
            }
        }
        std::size_t count = ids.size();
        block = std::move(next);
        if (count == nblocks) {
            break;
        }
        nblocks = count;
    }
    return renumber_by_first(block);
}

using Refiner = std::vector<std::size_t> (*)(const Graph&,
                                             std::optional<std::pair<std::size_t, std::size_t>>,
                                             std::optional<Separation>*);

EquivalenceResult compare(const Lts& left, const Lts& right, Refiner refine, const char* flavour) {
    Graph g = disjoint_union(left, &right);
    const std::size_t n1 = left.size();
    std::optional<Separation> sep;
    auto classes = refine(g, std::make_pair(std::size_t(left.initial()), n1 + right.initial()), &sep);
    EquivalenceResult result;
    result.equivalent = classes[left.initial()] == classes[n1 + right.initial()];
    if (result.equivalent) {
        Relation rel;
        for (StateId i = 0; i < n1; ++i) {
            for (StateId j = 0; j < right.size(); ++j) {
                if (classes[i] == classes[n1 + j]) {
                    rel.pairs.emplace_back(i, j);
                }
            }
        }
        result.witness = std::move(rel);
    } else {
        Counterexample cex;
        cex.left = left.initial();
        cex.right = right.initial();
        if (sep) {
            cex.action = sep->action;
            cex.detail = std::string(sep->left_has_it ? "left" : "right") + " initial state can perform " +
                         sep->action.str() + " into a " + flavour +
                         " class the other side cannot reach";
        } else {
            cex.detail = "initial states are in different classes";
        }
        result.counterexample = std::move(cex);
    }
    return result;
}

// Silent closure: tau_star[q] = states reachable from q by zero or more tau steps.
std::vector<std::vector<StateId>> tau_closure(const Lts& lts) {
    std::vector<std::vector<StateId>> out(lts.size());
    for (StateId q = 0; q < lts.size(); ++q) {
        std::vector<char> seen(lts.size(), 0);
        std::vector<StateId> todo = {q};
        seen[q] = 1;
        while (!todo.empty()) {
            StateId s = todo.back();
            todo.pop_back();
            out[q].push_back(s);
            for (const Transition& t : lts.outgoing(s)) {
                if (t.action.is_tau() && !seen[t.dst]) {
                    seen[t.dst] = 1;
                    todo.push_back(t.dst);
                }
            }
        }
        std::sort(out[q].begin(), out[q].end());
    }
    return out;
}

// Shared by the oracle and the witness re-checker: evaluates the four clauses for (q, qp) with
// `rel(i, j)` as the current relation. Returns the first unmatched action, if any.
template <typename Rel>
std::optional<Action> violated_clause(const Lts& left, const Lts& right,
                                      const std::vector<std::vector<StateId>>& left_star,
                                      const std::vector<std::vector<StateId>>& right_star, StateId q,
                                      StateId qp, const Rel& rel) {
    // Clauses 1 and 2: moves of the left state.
    for (const Transition& t : left.outgoing(q)) {
        if (t.action.is_tau() && rel(t.dst, qp)) {
            continue;
        }
        bool matched = false;
        for (StateId q1p : right_star[qp]) {
            if (!rel(q, q1p)) {
                continue;
            }
            for (const Transition& u : right.outgoing(q1p)) {
                if (u.action == t.action && rel(t.dst, u.dst)) {
                    matched = true;
                    break;
                }
            }
            if (matched) {
                break;
            }
        }
        if (!matched) {
            return t.action;
        }
    }
    // Clauses 3 and 4: moves of the right state.
    for (const Transition& u : right.outgoing(qp)) {
        if (u.action.is_tau() && rel(q, u.dst)) {
            continue;
        }
        bool matched = false;
        for (StateId q1 : left_star[q]) {
            if (!rel(q1, qp)) {
                continue;
            }
            for (const Transition& t : left.outgoing(q1)) {
                if (t.action == u.action && rel(t.dst, u.dst)) {
                    matched = true;
                    break;
                }
            }
            if (matched) {
                break;
            }
        }
        if (!matched) {
            return u.action;
        }
    }
    return std::nullopt;
}

} // namespace

bool Relation::contains(StateId left, StateId right) const {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(left, right)) != pairs.end();
}

EquivalenceResult strong_bisim(const Lts& left, const Lts& right) {
    return compare(left, right, &strong_refine, "strong");
}

EquivalenceResult branching_bisim(const Lts& left, const Lts& right) {
    return compare(left, right, &branching_refine, "branching");
}

std::vector<std::size_t> branching_classes(const Lts& lts) {
    return branching_refine(disjoint_union(lts, nullptr), std::nullopt, nullptr);
}

std::vector<std::size_t> strong_classes(const Lts& lts) {
    return strong_refine(disjoint_union(lts, nullptr), std::nullopt, nullptr);
}

EquivalenceResult naive_branching_oracle(const Lts& left, const Lts& right, std::size_t max_pairs) {
    const std::size_t n1 = left.size();
    const std::size_t n2 = right.size();
    if (n1 * n2 > max_pairs) {
        throw SizeLimit("naive oracle limited to " + std::to_string(max_pairs) + " state pairs, got " +
                        std::to_string(n1 * n2));
    }
    auto ls = tau_closure(left);
    auto rs = tau_closure(right);
    std::vector<char> phi(n1 * n2, 1);
    auto rel = [&](StateId i, StateId j) { return phi[i * n2 + j] != 0; };
    std::optional<Action> initial_failure;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId i = 0; i < n1; ++i) {
            for (StateId j = 0; j < n2; ++j) {
                if (!phi[i * n2 + j]) {
                    continue;
                }
                if (auto bad = violated_clause(left, right, ls, rs, i, j, rel)) {
                    phi[i * n2 + j] = 0;
                    changed = true;
                    if (i == left.initial() && j == right.initial()) {
                        initial_failure = bad;
                    }
                }
            }
        }
    }
    EquivalenceResult result;
    result.equivalent = rel(left.initial(), right.initial());
    if (result.equivalent) {
        Relation r;
        for (StateId i = 0; i < n1; ++i) {
            for (StateId j = 0; j < n2; ++j) {
                if (rel(i, j)) {
                    r.pairs.emplace_back(i, j);
                }
            }
        }
        result.witness = std::move(r);
    } else {
        Counterexample cex;
        cex.left = left.initial();
        cex.right = right.initial();
        cex.action = initial_failure.value_or(Action::tau());
        cex.detail = "transfer clause fails for " + cex.action.str();
        result.counterexample = std::move(cex);
    }
    return result;
}

bool is_branching_bisimulation(const Lts& left, const Lts& right, const Relation& relation) {
    std::set<std::pair<StateId, StateId>> pairs(relation.pairs.begin(), relation.pairs.end());
    auto rel = [&](StateId i, StateId j) { return pairs.count({i, j}) != 0; };
    auto ls = tau_closure(left);
    auto rs = tau_closure(right);
    for (auto [i, j] : pairs) {
        if (i >= left.size() || j >= right.size()) {
            return false;
        }
        if (violated_clause(left, right, ls, rs, i, j, rel)) {
            return false;
        }
    }
    return true;
}

TauInertness is_tau_inert(const Lts& lts) {
    auto classes = branching_classes(lts);
    for (const Transition& t : lts.transitions()) {
        if (t.action.is_tau() && classes[t.src] != classes[t.dst]) {
            return {false, t};
        }
    }
    return {};
}

Lts quotient(const Lts& lts, const std::vector<std::size_t>& classes, bool keep_inner_silent) {
    std::size_t count = 0;
    for (std::size_t c : classes) {
        count = std::max(count, c + 1);
    }
    std::vector<std::string> labels(count);
    for (StateId s = 0; s < lts.size(); ++s) {
        if (labels[classes[s]].empty()) {
            labels[classes[s]] = lts.label(s);
        }
    }
    std::vector<Transition> ts;
    for (const Transition& t : lts.transitions()) {
        StateId a = static_cast<StateId>(classes[t.src]);
        StateId b = static_cast<StateId>(classes[t.dst]);
        if (t.action.is_tau() && a == b && !keep_inner_silent) {
            continue;
        }
        ts.push_back({a, t.action, b});
    }
    return Lts(std::move(labels), static_cast<StateId>(classes[lts.initial()]), std::move(ts));
}

std::vector<Action> project_trace(const std::vector<Action>& trace, Direction direction) {
    std::vector<Action> out;
    out.reserve(trace.size());
    for (const Action& a : trace) {
        if (!a.is_comm()) {
            throw std::invalid_argument("trace projection expects communicated actions, got " + a.str());
        }
        out.push_back(a.with_kind(direction == Direction::In ? ActionKind::Receive : ActionKind::Send));
    }
    return out;
}

namespace {

std::set<StateId> replay(const Lts& lts, std::set<StateId> from, const std::vector<Action>& word) {
    for (const Action& a : word) {
        std::set<StateId> next;
        for (StateId s : from) {
            for (StateId d : lts.successors(s, a)) {
                next.insert(d);
            }
        }
        from = std::move(next);
    }
    return from;
}

} // namespace

bool check_trace_projection(const SyncLoop& sync, const std::vector<Action>& trace) {
    std::set<StateId> targets = replay(sync.loop, {sync.loop.initial()}, trace);
    if (targets.empty()) {
        throw TraceNotExecutable("the closed loop cannot perform the given trace");
    }
    std::vector<Action> plant_word;
    std::vector<Action> sup_word;
    for (const Action& a : trace) {
        Action receive = a.with_kind(ActionKind::Receive).with_hat(false);
        bool plant_input = sync.context.plant_in.contains(receive);
        Direction plant_dir = plant_input ? Direction::In : Direction::Out;
        Direction sup_dir = plant_input ? Direction::Out : Direction::In;
        plant_word.push_back(project_trace({a}, plant_dir).front());
        sup_word.push_back(project_trace({a}, sup_dir).front());
    }
    std::set<StateId> plant_end = replay(sync.plant, {sync.plant.initial()}, plant_word);
    std::set<StateId> sup_end = replay(sync.supervisor, {sync.supervisor.initial()}, sup_word);
    for (StateId q : targets) {
        if (plant_end.count(sync.plant_state(q)) == 0 || sup_end.count(sync.supervisor_state(q)) == 0) {
            return false;
        }
    }
    return true;
}

bool check_trace_projection(const SystemSpec& spec, const std::vector<Action>& trace) {
    return check_trace_projection(build_sync_loop(spec), trace);
}

} // namespace desync
