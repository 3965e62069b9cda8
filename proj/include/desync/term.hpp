#pragma once

#include "desync/action.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace desync {

/// Partial, symmetric function deciding which pairs of actions synchronise in a parallel
/// composition and what they synchronise into.
class CommunicationFunction {
public:
    virtual ~CommunicationFunction() = default;

    virtual std::optional<Action> communicate(const Action& x, const Action& y) const = 0;

    /// Stable identifier; also the operator keyword used when printing terms.
    virtual std::string name() const = 0;
};

/// gamma(?a, !a) = gamma(!a, ?a) = ~a on unhatted actions.
std::shared_ptr<const CommunicationFunction> standard_gamma();

/// No pair communicates; pure interleaving.
std::shared_ptr<const CommunicationFunction> free_merge();

enum class TermKind { Deadlock, Prefix, Choice, Parallel, Encapsulate, Abstract, Rename, Var };

/// Explicit finite renaming; actions not in the map are left unchanged.
using RenameMap = std::map<Action, Action>;

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

/// Immutable node of the process-term syntax tree. Unary operators keep their operand in `left`.
struct TermNode {
    TermKind kind = TermKind::Deadlock;
    Action action;
    Term left;
    Term right;
    std::shared_ptr<const CommunicationFunction> comm;
    ActionSet set;
    RenameMap renaming;
    std::string name;
};

namespace term {

Term deadlock();
Term prefix(Action a, Term body);
Term choice(Term left, Term right);
Term parallel(Term left, Term right,
              std::shared_ptr<const CommunicationFunction> comm = standard_gamma());
Term encapsulate(ActionSet blocked, Term body);
Term abstract(ActionSet hidden, Term body);
Term rename(RenameMap renaming, Term body);
Term var(std::string name);

/// Choice over all of `branches`, deadlock when empty.
Term sum(const std::vector<Term>& branches);

} // namespace term

/// Structural equality.
bool equal(const Term& a, const Term& b);

/// Concrete syntax accepted by the spec parser (except for communication functions that
/// have no keyword, such as the M1 function, which still print unambiguously).
std::string print(const Term& t);

/// True iff the term uses only deadlock, prefix, choice and variables.
bool is_regular(const Term& t);

/// A term in canonical form together with its printed key; keys decide state identity.
struct CanonicalTerm {
    Term term;
    std::string key;

    friend bool operator==(const CanonicalTerm& a, const CanonicalTerm& b) { return a.key == b.key; }
    friend auto operator<=>(const CanonicalTerm& a, const CanonicalTerm& b) { return a.key <=> b.key; }
};

/// Normalises choice modulo associativity, commutativity, idempotence and deadlock as unit.
/// No other equations are applied.
CanonicalTerm canonicalize(const Term& t);

} // namespace desync
