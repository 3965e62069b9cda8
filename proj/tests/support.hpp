#pragma once

#include "desync/lts.hpp"
#include "desync/spec.hpp"
#include "desync/term.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace desync::testing {

inline std::string corpus_path(const std::string& name) {
    return std::string(DESYNC_CORPUS_DIR) + "/" + name;
}

inline SystemSpec load_corpus(const std::string& name) {
    std::ifstream in(corpus_path(name));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

/// Systems that pass every condition.
inline const std::vector<std::string>& passing_corpus() {
    static const std::vector<std::string> names = {"pingpong.spec", "seq_two.spec", "diamond_ok.spec"};
    return names;
}

/// Systems that fail at least one condition.
inline const std::vector<std::string>& failing_corpus() {
    static const std::vector<std::string> names = {"no_diamond.spec", "choice.spec", "not_wellposed.spec",
                                                   "reorder_fail.spec"};
    return names;
}

inline std::vector<std::string> whole_corpus() {
    auto all = passing_corpus();
    all.insert(all.end(), failing_corpus().begin(), failing_corpus().end());
    return all;
}

/// Shorthand LTS builder: transitions as (src, "action", dst).
inline Lts make_lts(std::size_t states, std::vector<std::tuple<StateId, std::string, StateId>> edges,
                    StateId initial = 0) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < states; ++i) {
        labels.push_back("q" + std::to_string(i));
    }
    std::vector<Transition> ts;
    for (auto& [s, a, d] : edges) {
        ts.push_back({s, *Action::parse(a), d});
    }
    return Lts(std::move(labels), initial, std::move(ts));
}

/// Random LTS over up to `labels` communicated actions plus tau.
inline Lts random_lts(std::mt19937& rng, std::size_t max_states, std::size_t labels, double tau_density) {
    std::uniform_int_distribution<std::size_t> size(1, max_states);
    std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> state(0, n - 1);
    std::uniform_int_distribution<std::size_t> fanout(0, 3);
    std::uniform_int_distribution<std::size_t> label(0, labels - 1);
    std::bernoulli_distribution silent(tau_density);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("q" + std::to_string(i));
    }
    std::vector<Transition> ts;
    for (StateId s = 0; s < n; ++s) {
        for (std::size_t k = fanout(rng); k > 0; --k) {
            Action a = silent(rng) ? Action::tau() : Action::comm(std::string(1, char('a' + label(rng))));
            ts.push_back({s, a, static_cast<StateId>(state(rng))});
        }
    }
    return Lts(std::move(names), 0, std::move(ts));
}

/// Random action over labels a..c, any kind (tau included).
inline Action random_action(std::mt19937& rng, bool allow_tau = true) {
    std::uniform_int_distribution<int> kind(0, allow_tau ? 3 : 2);
    std::uniform_int_distribution<int> label(0, 2);
    std::string l(1, char('a' + label(rng)));
    switch (kind(rng)) {
    case 0:
        return Action::send(l);
    case 1:
        return Action::receive(l);
    case 2:
        return Action::comm(l);
    default:
        return Action::tau();
    }
}

/// Random regular term; variables from `vars` appear only under a prefix.
inline Term random_regular(std::mt19937& rng, int depth, const std::vector<std::string>& vars,
                           bool guarded = false) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 3);
    int c = pick(rng);
    if (c == 0 || (c == 1 && (!guarded || vars.empty()))) {
        return depth <= 0 ? term::deadlock() : term::prefix(random_action(rng), random_regular(rng, depth - 1, vars, true));
    }
    if (c == 1) {
        std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
        return term::var(vars[v(rng)]);
    }
    if (c == 2) {
        return term::prefix(random_action(rng), random_regular(rng, depth - 1, vars, true));
    }
    return term::choice(random_regular(rng, depth - 1, vars, guarded), random_regular(rng, depth - 1, vars, guarded));
}

/// Random spec with definitions X0..X(k-1); X0 is the plant.
inline SystemSpec random_spec(std::mt19937& rng, std::size_t k) {
    SystemSpec spec;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < k; ++i) {
        vars.push_back("X" + std::to_string(i));
    }
    for (const auto& v : vars) {
        spec.defs[v] = random_regular(rng, 3, vars);
    }
    spec.plant = "X0";
    return spec;
}

/// Random term mixing every operator over the variables `vars`.
inline Term random_term(std::mt19937& rng, int depth, const std::vector<std::string>& vars) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 6);
    switch (pick(rng)) {
    case 0:
        return random_regular(rng, 2, vars);
    case 1:
        return term::prefix(random_action(rng), random_term(rng, depth - 1, vars));
    case 2:
        return term::choice(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars));
    case 3:
        return term::parallel(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars));
    case 4:
        return term::encapsulate({random_action(rng, false), random_action(rng, false)},
                                 random_term(rng, depth - 1, vars));
    case 5:
        return term::abstract({random_action(rng, false)}, random_term(rng, depth - 1, vars));
    default:
        return term::rename({{random_action(rng, false), random_action(rng, false)}},
                            random_term(rng, depth - 1, vars));
    }
}

} // namespace desync::testing
