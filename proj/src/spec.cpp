#include "desync/spec.hpp"

#include "desync/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace desync {

namespace {

enum class Tok { Ident, Integer, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Integer: return "integer '" + t.text + "'";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Symbol: return "'" + t.text + "'";
    }
    return t.text;
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                advance(1);
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            tok.kind = Tok::Integer;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            tok.kind = Tok::Symbol;
            tok.text = "->";
            advance(2);
        } else if (std::string_view("?!~^.+(){},;=").find(c) != std::string_view::npos) {
            tok.kind = Tok::Symbol;
            tok.text = std::string(1, c);
            advance(1);
        } else {
            throw SyntaxError("unexpected character '" + std::string(1, c) + "'", line, col, {});
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

const std::set<std::string, std::less<>> kKeywords = {
    "plant", "supervisor", "requirement", "process", "option",
    "tau",   "par",        "merge",       "encap",   "hide",   "rename"};

struct VarUse {
    std::string name;
    std::size_t line;
    std::size_t column;
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    SystemSpec parse_spec() {
        SystemSpec spec;
        while (peek().kind != Tok::End) {
            parse_decl(spec);
        }
        return spec;
    }

    Term parse_standalone_term() {
        Term t = parse_choice();
        expect_end();
        return t;
    }

    const std::vector<VarUse>& var_uses() const { return var_uses_; }

    struct DefSite {
        std::size_t line;
        std::size_t column;
    };
    const std::map<std::string, DefSite>& def_sites() const { return def_sites_; }

private:
    const Token& peek() const { return tokens_[pos_]; }

    Token take() { return tokens_[pos_++]; }

    bool at_symbol(std::string_view s) const {
        return peek().kind == Tok::Symbol && peek().text == s;
    }

    bool at_keyword(std::string_view s) const {
        return peek().kind == Tok::Ident && peek().text == s;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i > 0) {
                msg += i + 1 == expected.size() ? " or " : ", ";
            }
            msg += expected[i];
        }
        msg += ", found " + describe(t);
        throw SyntaxError(msg, t.line, t.column, std::move(expected));
    }

    void expect_symbol(std::string_view s) {
        if (!at_symbol(s)) {
            fail({"'" + std::string(s) + "'"});
        }
        take();
    }

    void expect_end() {
        if (peek().kind != Tok::End) {
            fail({"end of input"});
        }
    }

    Token expect_identifier() {
        if (peek().kind != Tok::Ident || kKeywords.count(peek().text) != 0) {
            fail({"identifier"});
        }
        return take();
    }

    void parse_decl(SystemSpec& spec) {
        if (at_keyword("option")) {
            take();
            Token name = expect_identifier();
            expect_symbol("=");
            if (peek().kind != Tok::Integer) {
                fail({"integer"});
            }
            Token value = take();
            expect_symbol(";");
            if (spec.options.count(name.text) != 0) {
                throw DuplicateDefinition("option '" + name.text + "' set twice", name.line,
                                          name.column);
            }
            try {
                spec.options[name.text] = std::stoll(value.text);
            } catch (const std::out_of_range&) {
                throw SyntaxError("integer out of range", value.line, value.column, {"integer"});
            }
            return;
        }
        static const std::vector<std::string> roles = {"plant", "supervisor", "requirement",
                                                       "process"};
        std::string role;
        for (const auto& r : roles) {
            if (at_keyword(r)) {
                role = r;
            }
        }
        if (role.empty()) {
            fail({"'plant'", "'supervisor'", "'requirement'", "'process'", "'option'"});
        }
        Token role_tok = take();
        Token name = expect_identifier();
        expect_symbol("=");
        Term body = parse_choice();
        expect_symbol(";");

        if (spec.defs.count(name.text) != 0) {
            throw DuplicateDefinition("'" + name.text + "' is defined twice", name.line,
                                      name.column);
        }
        spec.defs.emplace(name.text, std::move(body));
        def_sites_[name.text] = {name.line, name.column};

        auto assign = [&](std::optional<std::string>& slot) {
            if (slot) {
                throw DuplicateDefinition("a " + role + " is already declared ('" + *slot + "')",
                                          role_tok.line, role_tok.column);
            }
            slot = name.text;
        };
        if (role == "plant") {
            assign(spec.plant);
        } else if (role == "supervisor") {
            assign(spec.supervisor);
        } else if (role == "requirement") {
            assign(spec.requirement);
        }
    }

    Term parse_choice() {
        Term left = parse_seq();
        while (at_symbol("+")) {
            take();
            Term right = parse_seq();
            left = term::choice(std::move(left), std::move(right));
        }
        return left;
    }

    bool at_action() const {
        return at_symbol("?") || at_symbol("!") || at_symbol("~") || at_keyword("tau");
    }

    Action parse_action() {
        if (at_keyword("tau")) {
            take();
            return Action::tau();
        }
        ActionKind kind;
        if (at_symbol("?")) {
            kind = ActionKind::Receive;
        } else if (at_symbol("!")) {
            kind = ActionKind::Send;
        } else if (at_symbol("~")) {
            kind = ActionKind::Comm;
        } else {
            fail({"'?'", "'!'", "'~'", "'tau'"});
        }
        take();
        if (peek().kind != Tok::Ident || peek().text == "tau") {
            fail({"action label"});
        }
        Token label = take();
        bool hat = false;
        if (at_symbol("^")) {
            take();
            hat = true;
        }
        return Action{kind, Label(label.text), hat};
    }

    Term parse_seq() {
        if (at_action()) {
            Action a = parse_action();
            expect_symbol(".");
            Term body = parse_seq();
            return term::prefix(std::move(a), std::move(body));
        }
        return parse_atom();
    }

    ActionSet parse_action_set() {
        expect_symbol("{");
        ActionSet set;
        if (!at_symbol("}")) {
            set.insert(parse_action());
            while (at_symbol(",")) {
                take();
                set.insert(parse_action());
            }
        }
        expect_symbol("}");
        return set;
    }

    RenameMap parse_rename_map() {
        expect_symbol("{");
        RenameMap map;
        auto entry = [&] {
            const Token& at = peek();
            std::size_t line = at.line;
            std::size_t column = at.column;
            Action from = parse_action();
            expect_symbol("->");
            Action to = parse_action();
            if (!map.emplace(from, to).second) {
                throw DuplicateDefinition("action " + from.str() + " renamed twice", line, column);
            }
        };
        if (!at_symbol("}")) {
            entry();
            while (at_symbol(",")) {
                take();
                entry();
            }
        }
        expect_symbol("}");
        return map;
    }

    Term parse_parenthesised() {
        expect_symbol("(");
        Term t = parse_choice();
        expect_symbol(")");
        return t;
    }

    Term parse_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Integer) {
            if (t.text != "0") {
                fail({"'0'", "identifier", "'('", "action"});
            }
            take();
            return term::deadlock();
        }
        if (at_symbol("(")) {
            return parse_parenthesised();
        }
        if (at_keyword("par") || at_keyword("merge")) {
            bool gamma = peek().text == "par";
            take();
            expect_symbol("(");
            Term l = parse_choice();
            expect_symbol(",");
            Term r = parse_choice();
            expect_symbol(")");
            return term::parallel(std::move(l), std::move(r),
                                  gamma ? standard_gamma() : free_merge());
        }
        if (at_keyword("encap") || at_keyword("hide")) {
            bool encap = peek().text == "encap";
            take();
            ActionSet set = parse_action_set();
            Term body = parse_parenthesised();
            return encap ? term::encapsulate(std::move(set), std::move(body))
                         : term::abstract(std::move(set), std::move(body));
        }
        if (at_keyword("rename")) {
            take();
            RenameMap map = parse_rename_map();
            Term body = parse_parenthesised();
            return term::rename(std::move(map), std::move(body));
        }
        if (t.kind == Tok::Ident && kKeywords.count(t.text) == 0) {
            Token name = take();
            var_uses_.push_back({name.text, name.line, name.column});
            return term::var(name.text);
        }
        fail({"'0'", "identifier", "'('", "action"});
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<VarUse> var_uses_;
    std::map<std::string, DefSite> def_sites_;
};

void collect_unguarded(const Term& t, std::set<std::string>& out) {
    switch (t->kind) {
    case TermKind::Var:
        out.insert(t->name);
        return;
    case TermKind::Prefix:
    case TermKind::Deadlock:
        return;
    case TermKind::Choice:
    case TermKind::Parallel:
        collect_unguarded(t->left, out);
        collect_unguarded(t->right, out);
        return;
    case TermKind::Encapsulate:
    case TermKind::Abstract:
    case TermKind::Rename:
        collect_unguarded(t->left, out);
        return;
    }
}

void collect_vars(const Term& t, std::set<std::string>& out) {
    if (!t) {
        return;
    }
    if (t->kind == TermKind::Var) {
        out.insert(t->name);
    }
    collect_vars(t->left, out);
    collect_vars(t->right, out);
}

// Returns the first unguarded cycle as a list of definitions, or empty.
std::vector<std::string> find_unguarded_cycle(const SystemSpec& spec) {
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& [name, body] : spec.defs) {
        collect_unguarded(body, edges[name]);
    }
    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    std::vector<std::string> stack;
    std::vector<std::string> cycle;
    std::function<bool(const std::string&)> visit = [&](const std::string& n) {
        mark[n] = Mark::Grey;
        stack.push_back(n);
        for (const auto& m : edges[n]) {
            if (spec.defs.count(m) == 0) {
                continue;
            }
            if (mark[m] == Mark::Grey) {
                auto it = std::find(stack.begin(), stack.end(), m);
                cycle.assign(it, stack.end());
                cycle.push_back(m);
                return true;
            }
            if (mark[m] == Mark::White && visit(m)) {
                return true;
            }
        }
        stack.pop_back();
        mark[n] = Mark::Black;
        return false;
    };
    for (const auto& [name, _] : spec.defs) {
        if (mark[name] == Mark::White && visit(name)) {
            return cycle;
        }
    }
    return {};
}

void check_bound(const std::vector<VarUse>& uses, const SystemSpec& spec) {
    for (const auto& use : uses) {
        if (spec.defs.count(use.name) == 0) {
            throw UnboundVariable("'" + use.name + "' is not defined", use.line, use.column);
        }
    }
}

void check_regular_roles(const SystemSpec& spec, const std::map<std::string, Parser::DefSite>& sites) {
    for (const auto& role : {spec.plant, spec.supervisor, spec.requirement}) {
        if (!role) {
            continue;
        }
        std::set<std::string> seen;
        std::vector<std::string> todo = {*role};
        while (!todo.empty()) {
            std::string n = todo.back();
            todo.pop_back();
            if (!seen.insert(n).second) {
                continue;
            }
            const Term& body = spec.def(n);
            if (!is_regular(body)) {
                auto site = sites.count(n) ? sites.at(n) : Parser::DefSite{0, 0};
                throw NonRegularRole("'" + n + "' is used by '" + *role +
                                         "' but is not built from 0, prefix, choice and variables",
                                     site.line, site.column);
            }
            std::set<std::string> vars;
            collect_vars(body, vars);
            todo.insert(todo.end(), vars.begin(), vars.end());
        }
    }
}

} // namespace

const Term& SystemSpec::def(const std::string& name) const {
    auto it = defs.find(name);
    if (it == defs.end()) {
        throw std::out_of_range("no definition named '" + name + "'");
    }
    return it->second;
}

Term SystemSpec::plant_term() const {
    if (!plant) {
        throw Error("spec declares no plant");
    }
    return term::var(*plant);
}

Term SystemSpec::supervisor_term() const {
    if (!supervisor) {
        throw Error("spec declares no supervisor");
    }
    return term::var(*supervisor);
}

Term SystemSpec::requirement_term() const {
    if (!requirement) {
        throw MissingRequirement("spec declares no requirement");
    }
    return term::var(*requirement);
}

std::optional<std::int64_t> SystemSpec::option(const std::string& name) const {
    auto it = options.find(name);
    if (it == options.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
    if (a.plant != b.plant || a.supervisor != b.supervisor || a.requirement != b.requirement ||
        a.options != b.options || a.defs.size() != b.defs.size()) {
        return false;
    }
    for (auto ia = a.defs.begin(), ib = b.defs.begin(); ia != a.defs.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !equal(ia->second, ib->second)) {
            return false;
        }
    }
    return true;
}

void validate_definitions(const SystemSpec& spec) {
    for (const auto& [name, body] : spec.defs) {
        std::set<std::string> vars;
        collect_vars(body, vars);
        for (const auto& v : vars) {
            if (spec.defs.count(v) == 0) {
                throw UnboundVariable("'" + v + "' is not defined (used by '" + name + "')", 0, 0);
            }
        }
    }
    auto cycle = find_unguarded_cycle(spec);
    if (!cycle.empty()) {
        std::string path;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            path += (i ? " -> " : "") + cycle[i];
        }
        throw UnguardedRecursion("unguarded recursion: " + path, 0, 0);
    }
}

SystemSpec parse_spec(std::string_view text) {
    Parser parser(text);
    SystemSpec spec = parser.parse_spec();
    check_bound(parser.var_uses(), spec);
    auto cycle = find_unguarded_cycle(spec);
    if (!cycle.empty()) {
        std::string path;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            path += (i ? " -> " : "") + cycle[i];
        }
        const auto& site = parser.def_sites().at(cycle.front());
        throw UnguardedRecursion("unguarded recursion: " + path, site.line, site.column);
    }
    check_regular_roles(spec, parser.def_sites());
    return spec;
}

Term parse_term(std::string_view text, const SystemSpec& context) {
    Parser parser(text);
    Term t = parser.parse_standalone_term();
    check_bound(parser.var_uses(), context);
    return t;
}

std::string print_spec(const SystemSpec& spec) {
    std::ostringstream out;
    for (const auto& [name, value] : spec.options) {
        out << "option " << name << " = " << value << ";\n";
    }
    for (const auto& [name, body] : spec.defs) {
        std::string role = "process";
        if (spec.plant == name) {
            role = "plant";
        } else if (spec.supervisor == name) {
            role = "supervisor";
        } else if (spec.requirement == name) {
            role = "requirement";
        }
        out << role << ' ' << name << " = " << print(body) << ";\n";
    }
    return out.str();
}

} // namespace desync
