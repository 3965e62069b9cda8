#include "desync/term.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace desync {

namespace {

class StandardGamma final : public CommunicationFunction {
public:
    std::optional<Action> communicate(const Action& x, const Action& y) const override {
        if (x.hatted || y.hatted || x.label != y.label) {
            return std::nullopt;
        }
        if ((x.is_send() && y.is_receive()) || (x.is_receive() && y.is_send())) {
            return Action{ActionKind::Comm, x.label, false};
        }
        return std::nullopt;
    }
    std::string name() const override { return "par"; }
};

class FreeMerge final : public CommunicationFunction {
public:
    std::optional<Action> communicate(const Action&, const Action&) const override {
        return std::nullopt;
    }
    std::string name() const override { return "merge"; }
};

Term make(TermNode node) { return std::make_shared<const TermNode>(std::move(node)); }

void print_into(const Term& t, bool allow_choice, std::string& out);

void print_set(const ActionSet& set, std::string& out) {
    out += '{';
    bool first = true;
    for (const Action& a : set) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += a.str();
    }
    out += '}';
}

void print_into(const Term& t, bool allow_choice, std::string& out) {
    switch (t->kind) {
    case TermKind::Deadlock:
        out += '0';
        return;
    case TermKind::Var:
        out += t->name;
        return;
    case TermKind::Prefix:
        out += t->action.str();
        out += " . ";
        print_into(t->left, false, out);
        return;
    case TermKind::Choice:
        if (!allow_choice) {
            out += '(';
        }
        print_into(t->left, true, out);
        out += " + ";
        print_into(t->right, false, out);
        if (!allow_choice) {
            out += ')';
        }
        return;
    case TermKind::Parallel:
        out += t->comm->name();
        out += '(';
        print_into(t->left, true, out);
        out += ", ";
        print_into(t->right, true, out);
        out += ')';
        return;
    case TermKind::Encapsulate:
    case TermKind::Abstract:
        out += t->kind == TermKind::Encapsulate ? "encap" : "hide";
        print_set(t->set, out);
        out += '(';
        print_into(t->left, true, out);
        out += ')';
        return;
    case TermKind::Rename: {
        out += "rename{";
        bool first = true;
        for (const auto& [from, to] : t->renaming) {
            if (!first) {
                out += ", ";
            }
            first = false;
            out += from.str();
            out += " -> ";
            out += to.str();
        }
        out += "}(";
        print_into(t->left, true, out);
        out += ')';
        return;
    }
    }
}

void flatten_choice(const Term& t, std::vector<Term>& branches) {
    if (t->kind == TermKind::Choice) {
        flatten_choice(t->left, branches);
        flatten_choice(t->right, branches);
    } else {
        branches.push_back(t);
    }
}

Term canon(const Term& t);

Term canon_choice(const Term& t) {
    std::vector<Term> raw;
    flatten_choice(t, raw);
    std::vector<std::pair<std::string, Term>> keyed;
    keyed.reserve(raw.size());
    for (const Term& b : raw) {
        Term c = canon(b);
        if (c->kind == TermKind::Deadlock) {
            continue;
        }
        keyed.emplace_back(print(c), std::move(c));
    }
    if (keyed.empty()) {
        return term::deadlock();
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    Term result = keyed.front().second;
    for (std::size_t i = 1; i < keyed.size(); ++i) {
        result = term::choice(result, keyed[i].second);
    }
    return result;
}

Term canon(const Term& t) {
    switch (t->kind) {
    case TermKind::Deadlock:
    case TermKind::Var:
        return t;
    case TermKind::Prefix:
        return term::prefix(t->action, canon(t->left));
    case TermKind::Choice:
        return canon_choice(t);
    case TermKind::Parallel:
        return term::parallel(canon(t->left), canon(t->right), t->comm);
    case TermKind::Encapsulate:
        return term::encapsulate(t->set, canon(t->left));
    case TermKind::Abstract:
        return term::abstract(t->set, canon(t->left));
    case TermKind::Rename:
        return term::rename(t->renaming, canon(t->left));
    }
    return t;
}

} // namespace

std::shared_ptr<const CommunicationFunction> standard_gamma() {
    static const auto instance = std::make_shared<const StandardGamma>();
    return instance;
}

std::shared_ptr<const CommunicationFunction> free_merge() {
    static const auto instance = std::make_shared<const FreeMerge>();
    return instance;
}

namespace term {

Term deadlock() {
    static const Term instance = make(TermNode{});
    return instance;
}

Term prefix(Action a, Term body) {
    TermNode n;
    n.kind = TermKind::Prefix;
    n.action = std::move(a);
    n.left = std::move(body);
    return make(std::move(n));
}

Term choice(Term left, Term right) {
    TermNode n;
    n.kind = TermKind::Choice;
    n.left = std::move(left);
    n.right = std::move(right);
    return make(std::move(n));
}

Term parallel(Term left, Term right, std::shared_ptr<const CommunicationFunction> comm) {
    TermNode n;
    n.kind = TermKind::Parallel;
    n.left = std::move(left);
    n.right = std::move(right);
    n.comm = std::move(comm);
    return make(std::move(n));
}

Term encapsulate(ActionSet blocked, Term body) {
    TermNode n;
    n.kind = TermKind::Encapsulate;
    n.set = std::move(blocked);
    n.left = std::move(body);
    return make(std::move(n));
}

Term abstract(ActionSet hidden, Term body) {
    TermNode n;
    n.kind = TermKind::Abstract;
    n.set = std::move(hidden);
    n.left = std::move(body);
    return make(std::move(n));
}

Term rename(RenameMap renaming, Term body) {
    TermNode n;
    n.kind = TermKind::Rename;
    n.renaming = std::move(renaming);
    n.left = std::move(body);
    return make(std::move(n));
}

Term var(std::string name) {
    TermNode n;
    n.kind = TermKind::Var;
    n.name = std::move(name);
    return make(std::move(n));
}

Term sum(const std::vector<Term>& branches) {
    if (branches.empty()) {
        return deadlock();
    }
    Term result = branches.front();
    for (std::size_t i = 1; i < branches.size(); ++i) {
        result = choice(result, branches[i]);
    }
    return result;
}

} // namespace term

bool equal(const Term& a, const Term& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    switch (a->kind) {
    case TermKind::Deadlock:
        return true;
    case TermKind::Var:
        return a->name == b->name;
    case TermKind::Prefix:
        return a->action == b->action && equal(a->left, b->left);
    case TermKind::Choice:
        return equal(a->left, b->left) && equal(a->right, b->right);
    case TermKind::Parallel:
        return a->comm->name() == b->comm->name() && equal(a->left, b->left) &&
               equal(a->right, b->right);
    case TermKind::Encapsulate:
    case TermKind::Abstract:
        return a->set == b->set && equal(a->left, b->left);
    case TermKind::Rename:
        return a->renaming == b->renaming && equal(a->left, b->left);
    }
    return false;
}

std::string print(const Term& t) {
    std::string out;
    print_into(t, true, out);
    return out;
}

bool is_regular(const Term& t) {
    switch (t->kind) {
    case TermKind::Deadlock:
    case TermKind::Var:
        return true;
    case TermKind::Prefix:
        return is_regular(t->left);
    case TermKind::Choice:
        return is_regular(t->left) && is_regular(t->right);
    default:
        return false;
    }
}

CanonicalTerm canonicalize(const Term& t) {
    Term c = canon(t);
    std::string key = print(c);
    return {std::move(c), std::move(key)};
}

} // namespace desync
