#pragma once

#include "desync/lts.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace desync {

/// Multiset over communicated actions, stored as a sorted (action, count) vector without zero
/// counts.
class Multiset {
public:
    Multiset() = default;

    bool contains(const Action& a) const;
    std::size_t count(const Action& a) const;
    std::size_t total() const;
    bool empty() const { return entries_.empty(); }

    const std::vector<std::pair<Action, std::size_t>>& entries() const { return entries_; }

    /// `{~a:2, ~b:1}`, or `{}` for the empty multiset.
    std::string str() const;

    friend auto operator<=>(const Multiset&, const Multiset&) = default;
    friend bool operator==(const Multiset&, const Multiset&) = default;

private:
    friend Multiset ms_add(const Multiset&, const Action&);
    friend Multiset ms_remove(const Multiset&, const Action&);

    std::vector<std::pair<Action, std::size_t>> entries_;
};

/// xi (+) a. Throws std::invalid_argument unless `a` is a communicated action.
Multiset ms_add(const Multiset& xi, const Action& a);

/// xi (-) a. Throws ElementAbsent if a is not in xi.
Multiset ms_remove(const Multiset& xi, const Action& a);

inline bool ms_contains(const Multiset& xi, const Action& a) { return xi.contains(a); }

using LabelSet = std::set<Label>;

/// One buffer state: contents bounded by the capacity.
struct BagState {
    Multiset contents;
    std::size_t capacity = 1;
    LabelSet labels;
};

/// Bounded bag over `labels` with room for `capacity` messages.
///
/// Receiving `?a^` adds `~a` while there is room; sending `!a^` removes a stored `~a`.
/// States are labelled by their contents; the initial state is the empty bag.
Lts build_bag(const LabelSet& labels, std::size_t capacity);

/// Free interleaving of an input-side bag and an output-side bag.
/// Throws OverlappingLabelSets if the label sets intersect.
Lts build_double_bag(const LabelSet& in_labels, const LabelSet& out_labels, std::size_t m,
                     std::size_t n);

/// Which component of the M1 wiring an LTS plays.
enum class PortSide { Plant, Supervisor, Bag };

/// Hats plain send/receive actions on bag ports; plant and supervisor are left unchanged.
Lts hat_ports(const Lts& lts, PortSide side);

} // namespace desync
