#include "desync/action.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace desync {

Label::Label(std::string name) : name_(std::move(name)) {
    if (!is_valid(name_)) {
        throw std::invalid_argument("invalid action label '" + name_ + "'");
    }
}

bool Label::is_valid(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

Action Action::send(std::string_view a, bool hat) {
    return {ActionKind::Send, Label(std::string(a)), hat};
}

Action Action::receive(std::string_view a, bool hat) {
    return {ActionKind::Receive, Label(std::string(a)), hat};
}

Action Action::comm(std::string_view a, bool hat) {
    return {ActionKind::Comm, Label(std::string(a)), hat};
}

Action Action::with_hat(bool hat) const {
    if (is_tau()) {
        return *this;
    }
    Action copy = *this;
    copy.hatted = hat;
    return copy;
}

Action Action::with_kind(ActionKind k) const {
    if (k == ActionKind::Tau) {
        return tau();
    }
    Action copy = *this;
    copy.kind = k;
    return copy;
}

std::string Action::str() const {
    std::string out;
    switch (kind) {
    case ActionKind::Send: out = "!"; break;
    case ActionKind::Receive: out = "?"; break;
    case ActionKind::Comm: out = "~"; break;
    case ActionKind::Tau: return "tau";
    }
    out += label.name();
    if (hatted) {
        out += '^';
    }
    return out;
}

std::optional<Action> Action::parse(std::string_view text) {
    if (text == "tau") {
        return tau();
    }
    if (text.size() < 2) {
        return std::nullopt;
    }
    ActionKind kind;
    switch (text.front()) {
    case '!': kind = ActionKind::Send; break;
    case '?': kind = ActionKind::Receive; break;
    case '~': kind = ActionKind::Comm; break;
    default: return std::nullopt;
    }
    text.remove_prefix(1);
    bool hat = false;
    if (text.back() == '^') {
        hat = true;
        text.remove_suffix(1);
    }
    if (!Label::is_valid(text)) {
        return std::nullopt;
    }
    return Action{kind, Label(std::string(text)), hat};
}

ActionSet::ActionSet(std::initializer_list<Action> actions) : ActionSet(std::vector<Action>(actions)) {}

ActionSet::ActionSet(std::vector<Action> actions) : items_(std::move(actions)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool ActionSet::contains(const Action& a) const {
    return std::binary_search(items_.begin(), items_.end(), a);
}

void ActionSet::insert(const Action& a) {
    auto it = std::lower_bound(items_.begin(), items_.end(), a);
    if (it == items_.end() || *it != a) {
        items_.insert(it, a);
    }
}

ActionSet ActionSet::united(const ActionSet& other) const {
    std::vector<Action> out;
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out));
    ActionSet result;
    result.items_ = std::move(out);
    return result;
}

ActionSet ActionSet::intersected(const ActionSet& other) const {
    std::vector<Action> out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out));
    ActionSet result;
    result.items_ = std::move(out);
    return result;
}

std::string ActionSet::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += items_[i].str();
    }
    out += "}";
    return out;
}

} // namespace desync
