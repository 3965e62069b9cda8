#pragma once

#include <compare>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace desync {

/// An action name. Letters, digits and underscores, starting with a letter.
class Label {
public:
    Label() = default;
    explicit Label(std::string name);

    const std::string& name() const { return name_; }
    bool empty() const { return name_.empty(); }

    static bool is_valid(std::string_view name);

    friend auto operator<=>(const Label&, const Label&) = default;
    friend bool operator==(const Label&, const Label&) = default;

private:
    std::string name_;
};

enum class ActionKind { Send, Receive, Comm, Tau };

/// A send `!a`, receive `?a`, communicated `~a`, their hatted buffer-port variants, or `tau`.
///
/// Declaration order of the members gives the required total order:
/// kind first (Send < Receive < Comm < Tau), then label, then hat.
struct Action {
    ActionKind kind = ActionKind::Tau;
    Label label;
    bool hatted = false;

    static Action send(std::string_view a, bool hat = false);
    static Action receive(std::string_view a, bool hat = false);
    static Action comm(std::string_view a, bool hat = false);
    static Action tau() { return {}; }

    bool is_tau() const { return kind == ActionKind::Tau; }
    bool is_send() const { return kind == ActionKind::Send; }
    bool is_receive() const { return kind == ActionKind::Receive; }
    bool is_comm() const { return kind == ActionKind::Comm; }

    Action with_hat(bool hat) const;
    Action with_kind(ActionKind k) const;

    /// `?a`, `!a`, `~a`, `tau`; hatted actions get a trailing `^`.
    std::string str() const;

    /// Inverse of str(). Returns nullopt on malformed input.
    static std::optional<Action> parse(std::string_view text);

    friend auto operator<=>(const Action&, const Action&) = default;
    friend bool operator==(const Action&, const Action&) = default;
};

/// Sorted, duplicate-free set of actions.
class ActionSet {
public:
    ActionSet() = default;
    ActionSet(std::initializer_list<Action> actions);
    explicit ActionSet(std::vector<Action> actions);

    bool contains(const Action& a) const;
    void insert(const Action& a);
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Action>& items() const { return items_; }

    ActionSet united(const ActionSet& other) const;
    ActionSet intersected(const ActionSet& other) const;

    std::string str() const;

    friend bool operator==(const ActionSet&, const ActionSet&) = default;
    friend auto operator<=>(const ActionSet&, const ActionSet&) = default;

private:
    std::vector<Action> items_;
};

} // namespace desync
