#include "desync/buffers.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace desync {

namespace {

struct EntryLess {
    bool operator()(const std::pair<Action, std::size_t>& e, const Action& a) const { return e.first < a; }
};

} // namespace

bool Multiset::contains(const Action& a) const { return count(a) > 0; }

std::size_t Multiset::count(const Action& a) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), a, EntryLess{});
    return it != entries_.end() && it->first == a ? it->second : 0;
}

std::size_t Multiset::total() const {
    std::size_t sum = 0;
    for (const auto& [_, c] : entries_) {
        sum += c;
    }
    return sum;
}

std::string Multiset::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += entries_[i].first.str() + ":" + std::to_string(entries_[i].second);
    }
    return out + "}";
}

Multiset ms_add(const Multiset& xi, const Action& a) {
    if (!a.is_comm()) {
        throw std::invalid_argument("multisets hold communicated actions only, got " + a.str());
    }
    Multiset out = xi;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), a, EntryLess{});
    if (it != out.entries_.end() && it->first == a) {
        ++it->second;
    } else {
        out.entries_.insert(it, {a, 1});
    }
    return out;
}

Multiset ms_remove(const Multiset& xi, const Action& a) {
    Multiset out = xi;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), a, EntryLess{});
    if (it == out.entries_.end() || it->first != a) {
        throw ElementAbsent(a.str() + " is not in " + xi.str());
    }
    if (--it->second == 0) {
        out.entries_.erase(it);
    }
    return out;
}

Lts build_bag(const LabelSet& labels, std::size_t capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("bag capacity must be positive");
    }
    std::map<Multiset, StateId> index;
    std::vector<Multiset> states;
    std::deque<StateId> frontier;
    auto intern = [&](const Multiset& m) {
        auto [it, fresh] = index.emplace(m, static_cast<StateId>(states.size()));
        if (fresh) {
            states.push_back(m);
            frontier.push_back(it->second);
        }
        return it->second;
    };
    intern(Multiset{});
    std::vector<Transition> ts;
    while (!frontier.empty()) {
        StateId id = frontier.front();
        frontier.pop_front();
        const Multiset xi = states[id];
        for (const auto& [stored, _] : xi.entries()) {
            ts.push_back({id, Action::send(stored.label.name(), true), intern(ms_remove(xi, stored))});
        }
        if (xi.total() < capacity) {
            for (const Label& b : labels) {
                ts.push_back({id, Action::receive(b.name(), true),
                              intern(ms_add(xi, Action::comm(b.name())))});
            }
        }
    }
    std::vector<std::string> names;
    names.reserve(states.size());
    for (const Multiset& m : states) {
        names.push_back(m.str());
    }
    return Lts(std::move(names), 0, std::move(ts));
}

Lts build_double_bag(const LabelSet& in_labels, const LabelSet& out_labels, std::size_t m,
                     std::size_t n) {
    for (const Label& l : in_labels) {
        if (out_labels.count(l) != 0) {
            throw OverlappingLabelSets("label '" + l.name() + "' is served by both bags");
        }
    }
    Lts in_bag = build_bag(in_labels, m);
    Lts out_bag = build_bag(out_labels, n);
    return parallel(in_bag, out_bag, *free_merge(), in_bag.size() * out_bag.size());
}

Lts hat_ports(const Lts& lts, PortSide side) {
    if (side != PortSide::Bag) {
        return lts;
    }
    return relabel(lts, [](const Action& a) {
        return a.is_send() || a.is_receive() ? a.with_hat(true) : a;
    });
}

} // namespace desync
