#include "desync/semantics.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace desync {

namespace {

using Step = std::pair<Action, Term>;

// Raw SOS derivation; guardedness of the definitions makes the Var case terminate.
void derive(const SystemSpec& spec, const Term& t, std::vector<Step>& out) {
    switch (t->kind) {
    case TermKind::Deadlock:
        return;
    case TermKind::Prefix:
        out.emplace_back(t->action, t->left);
        return;
    case TermKind::Choice:
        derive(spec, t->left, out);
        derive(spec, t->right, out);
        return;
    case TermKind::Var:
        derive(spec, spec.def(t->name), out);
        return;
    case TermKind::Parallel: {
        std::vector<Step> ls;
        std::vector<Step> rs;
        derive(spec, t->left, ls);
        derive(spec, t->right, rs);
        for (const auto& [x, l2] : ls) {
            out.emplace_back(x, term::parallel(l2, t->right, t->comm));
        }
        for (const auto& [y, r2] : rs) {
            out.emplace_back(y, term::parallel(t->left, r2, t->comm));
        }
        for (const auto& [x, l2] : ls) {
            for (const auto& [y, r2] : rs) {
                if (auto c = t->comm->communicate(x, y)) {
                    out.emplace_back(*c, term::parallel(l2, r2, t->comm));
                }
            }
        }
        return;
    }
    case TermKind::Encapsulate: {
        std::vector<Step> inner;
        derive(spec, t->left, inner);
        for (auto& [x, p] : inner) {
            if (!t->set.contains(x)) {
                out.emplace_back(x, term::encapsulate(t->set, p));
            }
        }
        return;
    }
    case TermKind::Abstract: {
        std::vector<Step> inner;
        derive(spec, t->left, inner);
        for (auto& [x, p] : inner) {
            out.emplace_back(t->set.contains(x) ? Action::tau() : x, term::abstract(t->set, p));
        }
        return;
    }
    case TermKind::Rename: {
        std::vector<Step> inner;
        derive(spec, t->left, inner);
        for (auto& [x, p] : inner) {
            auto it = t->renaming.find(x);
            out.emplace_back(it == t->renaming.end() ? x : it->second,
                             term::rename(t->renaming, p));
        }
        return;
    }
    }
}

} // namespace

std::vector<std::pair<Action, CanonicalTerm>> sos_successors(const SystemSpec& spec, const Term& t) {
    std::vector<Step> raw;
    derive(spec, t, raw);
    std::vector<std::pair<Action, CanonicalTerm>> out;
    out.reserve(raw.size());
    for (auto& [a, p] : raw) {
        out.emplace_back(a, canonicalize(p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Lts generate_lts(const SystemSpec& spec, const Term& root, std::size_t budget) {
    std::unordered_map<std::string, StateId> index;
    std::vector<Term> terms;
    std::vector<std::string> labels;
    std::deque<StateId> frontier;
    auto intern = [&](const CanonicalTerm& c) {
        auto [it, fresh] = index.emplace(c.key, static_cast<StateId>(terms.size()));
        if (fresh) {
            if (terms.size() >= budget) {
                throw BudgetExceeded(budget, terms.size() + 1);
            }
            terms.push_back(c.term);
            labels.push_back(c.key);
            frontier.push_back(it->second);
        }
        return it->second;
    };
    intern(canonicalize(root));
    std::vector<Transition> ts;
    while (!frontier.empty()) {
        StateId s = frontier.front();
        frontier.pop_front();
        for (const auto& [a, target] : sos_successors(spec, terms[s])) {
            ts.push_back({s, a, intern(target)});
        }
    }
    return Lts(std::move(labels), 0, std::move(ts));
}

std::size_t state_budget(const SystemSpec& spec) {
    if (auto v = spec.option("max_states"); v && *v > 0) {
        return static_cast<std::size_t>(*v);
    }
    return kDefaultMaxStates;
}

ActionSet Alphabet::inputs() const {
    ActionSet out;
    for (const Action& a : all) {
        if (a.is_receive()) {
            out.insert(a);
        }
    }
    return out;
}

ActionSet Alphabet::outputs() const {
    ActionSet out;
    for (const Action& a : all) {
        if (a.is_send()) {
            out.insert(a);
        }
    }
    return out;
}

Alphabet alphabet(const Lts& lts) {
    Alphabet out;
    for (const Action& a : lts.actions()) {
        if (!a.is_tau()) {
            out.all.insert(a);
        }
    }
    return out;
}

Alphabet alphabet(const SystemSpec& spec, const Term& root, std::size_t budget) {
    return alphabet(generate_lts(spec, root, budget));
}

} // namespace desync
