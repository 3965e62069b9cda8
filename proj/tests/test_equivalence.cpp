#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "desync/closed_loop.hpp"
#include "desync/equivalence.hpp"
#include "desync/errors.hpp"
#include "desync/export.hpp"
#include "support.hpp"

using namespace desync;
using testing::make_lts;

namespace {

Lts lts(const std::string& body) {
    SystemSpec spec = parse_spec("process X = " + body + ";");
    return generate_lts(spec, term::var("X"));
}

bool has_tau(const Lts& l) {
    for (const Transition& t : l.transitions()) {
        if (t.action.is_tau()) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("strong bisimulation examples") {
    CHECK(strong_bisim(lts("~a.0"), lts("~a.0")).equivalent);
    CHECK_FALSE(strong_bisim(lts("~a.0"), lts("~a.~a.0")).equivalent);
    CHECK(strong_bisim(lts("~a.0 + ~b.0"), lts("~b.0 + ~a.0")).equivalent);
    // Unfolded loop.
    CHECK(strong_bisim(lts("~a.X"), lts("~a.~a.X")).equivalent);
    CHECK_FALSE(strong_bisim(lts("~a.(~b.0 + ~c.0)"), lts("~a.~b.0 + ~a.~c.0")).equivalent);
}

TEST_CASE("branching bisimulation examples") {
    CHECK(branching_bisim(lts("tau.~a.0"), lts("~a.0")).equivalent);
    CHECK_FALSE(branching_bisim(lts("~a.0 + tau.~b.0"), lts("~a.0 + ~b.0")).equivalent);
    CHECK(branching_bisim(lts("~a.(tau.~b.0 + ~b.0)"), lts("~a.~b.0")).equivalent);
    CHECK_FALSE(branching_bisim(lts("~a.0"), lts("~b.0")).equivalent);
}

TEST_CASE("silent cycles and divergence") {
    auto root = [](const std::string& text) {
        SystemSpec spec = parse_spec(text);
        return generate_lts(spec, term::var("X"));
    };
    Lts target = root("process X = ~a.Z; process Z = ~b.Z;");
    std::vector<std::pair<std::string, bool>> cases = {
        {"process X = ~a.Y; process Y = tau.Y;", false},
        {"process X = ~a.Y; process Y = tau.Y + tau.Z; process Z = ~b.Z;", true},
        {"process X = ~a.Y; process Y = tau.W + tau.Z; process W = tau.Y; process Z = ~b.Z;", true},
        {"process X = ~a.Y; process Y = tau.Y + tau.Z + ~c.0; process Z = ~b.Z;", false},
    };
    for (const auto& [text, expected] : cases) {
        Lts l = root(text);
        CAPTURE(text);
        CHECK(branching_bisim(l, target).equivalent == expected);
        CHECK(naive_branching_oracle(l, target).equivalent == expected);
    }
    // A silent loop before a deadlock is equated with the deadlock.
    CHECK(branching_bisim(root("process X = ~a.Y; process Y = tau.Y;"), lts("~a.0")).equivalent);
}

TEST_CASE("counterexamples name the initial states and an action") {
    EquivalenceResult r = branching_bisim(lts("~a.0 + tau.~b.0"), lts("~a.0 + ~b.0"));
    REQUIRE(r.counterexample);
    CHECK(r.counterexample->left == 0);
    CHECK(r.counterexample->right == 0);
    CHECK_FALSE(r.witness);
    auto j = to_json(r);
    CHECK(j["equivalent"] == false);
    CHECK(j["counterexample"].contains("action"));

    EquivalenceResult s = strong_bisim(lts("~a.0"), lts("~b.0"));
    REQUIRE(s.counterexample);
    CHECK((s.counterexample->action == Action::comm("a") || s.counterexample->action == Action::comm("b")));
}

TEST_CASE("witnesses contain the initial pair and are bisimulations") {
    Lts l = lts("~a.(tau.~b.0 + ~b.0)");
    Lts r = lts("~a.~b.0");
    EquivalenceResult res = branching_bisim(l, r);
    REQUIRE(res.equivalent);
    REQUIRE(res.witness);
    CHECK(res.witness->contains(l.initial(), r.initial()));
    CHECK(is_branching_bisimulation(l, r, *res.witness));
    Relation broken = *res.witness;
    broken.pairs.emplace_back(0, 1);
    CHECK_FALSE(is_branching_bisimulation(l, r, broken));
}

TEST_CASE("naive oracle") {
    CHECK(naive_branching_oracle(lts("tau.~a.0"), lts("~a.0")).equivalent);
    CHECK_FALSE(naive_branching_oracle(lts("~a.0"), lts("~b.0")).equivalent);
    CHECK_FALSE(naive_branching_oracle(lts("~a.0 + tau.~b.0"), lts("~a.0 + ~b.0")).equivalent);
    CHECK(naive_branching_oracle(lts("~a.(tau.~b.0 + ~b.0)"), lts("~a.~b.0")).equivalent);
    Lts big = lts("~a.~a.~a.~a.0");
    CHECK_THROWS_AS(naive_branching_oracle(big, big, 24), SizeLimit);
    CHECK_NOTHROW(naive_branching_oracle(big, big, 25));
}

TEST_CASE("refinement agrees with the oracle on random pairs") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> density(0.0, 0.4);
    for (int i = 0; i < 600; ++i) {
        double d = density(rng);
        Lts l = testing::random_lts(rng, 8, 3, d);
        // Half of the right-hand sides are perturbed copies, so both verdicts occur often.
        Lts r = i % 2 == 0 ? testing::random_lts(rng, 8, 3, d) : quotient(l, branching_classes(l));
        EquivalenceResult fast = branching_bisim(l, r);
        EquivalenceResult slow = naive_branching_oracle(l, r);
        CAPTURE(i);
        REQUIRE(fast.equivalent == slow.equivalent);
        if (fast.equivalent) {
            CHECK(is_branching_bisimulation(l, r, *fast.witness));
            CHECK(is_branching_bisimulation(l, r, *slow.witness));
        }
    }
}

TEST_CASE("branching and strong agree without silent steps") {
    std::mt19937 rng(77);
    for (int i = 0; i < 300; ++i) {
        Lts l = testing::random_lts(rng, 6, 2, 0.0);
        Lts r = testing::random_lts(rng, 6, 2, 0.0);
        CHECK(branching_bisim(l, r).equivalent == strong_bisim(l, r).equivalent);
        CHECK(branching_bisim(l, l).equivalent);
    }
}

TEST_CASE("reflexive and symmetric") {
    std::mt19937 rng(8);
    for (int i = 0; i < 200; ++i) {
        Lts l = testing::random_lts(rng, 8, 3, 0.3);
        Lts r = testing::random_lts(rng, 8, 3, 0.3);
        CHECK(branching_bisim(l, l).equivalent);
        CHECK(strong_bisim(l, l).equivalent);
        CHECK(branching_bisim(l, r).equivalent == branching_bisim(r, l).equivalent);
        CHECK(strong_bisim(l, r).equivalent == strong_bisim(r, l).equivalent);
    }
}

TEST_CASE("strong bisimilarity implies branching bisimilarity") {
    std::mt19937 rng(31);
    for (int i = 0; i < 300; ++i) {
        Lts l = testing::random_lts(rng, 5, 2, 0.3);
        Lts r = testing::random_lts(rng, 5, 2, 0.3);
        if (strong_bisim(l, r).equivalent) {
            CHECK(branching_bisim(l, r).equivalent);
        }
    }
}

TEST_CASE("quotients are branching bisimilar to the original") {
    std::mt19937 rng(12);
    for (int i = 0; i < 300; ++i) {
        Lts l = testing::random_lts(rng, 8, 3, 0.4);
        Lts q = quotient(l, branching_classes(l));
        CHECK(q.size() <= l.size());
        CHECK(branching_bisim(l, q).equivalent);
        CHECK(strong_bisim(l, quotient(l, strong_classes(l), true)).equivalent);
    }
}

TEST_CASE("prefixing preserves strong bisimilarity") {
    std::mt19937 rng(4);
    auto prefixed = [](const Lts& l, const Action& x) {
        std::vector<std::string> labels = {"pre"};
        labels.insert(labels.end(), l.labels().begin(), l.labels().end());
        std::vector<Transition> ts = {{0, x, l.initial() + 1}};
        for (const Transition& t : l.transitions()) {
            ts.push_back({t.src + 1, t.action, t.dst + 1});
        }
        return Lts(labels, 0, ts);
    };
    int hits = 0;
    for (int i = 0; i < 400; ++i) {
        Lts l = testing::random_lts(rng, 4, 2, 0.2);
        Lts r = testing::random_lts(rng, 4, 2, 0.2);
        if (!strong_bisim(l, r).equivalent) {
            continue;
        }
        ++hits;
        for (const Action& x : {Action::comm("a"), Action::tau()}) {
            CHECK(strong_bisim(prefixed(l, x), prefixed(r, x)).equivalent);
        }
    }
    CHECK(hits > 10);
}

TEST_CASE("tau inertness") {
    CHECK(is_tau_inert(lts("tau.~a.0")).inert);
    TauInertness bad = is_tau_inert(lts("~a.0 + tau.~b.0"));
    CHECK_FALSE(bad.inert);
    REQUIRE(bad.witness);
    CHECK(bad.witness->action.is_tau());
    CHECK(bad.witness->src == 0);
    SystemSpec spec = parse_spec("plant P = ?c.!r.P; supervisor S = !c.?r.S;");
    CHECK(is_tau_inert(compose_async(spec, 1, 1)).inert);
    CHECK(is_tau_inert(lts("~a.0")).inert);
    CHECK_FALSE(has_tau(lts("~a.0")));
}

TEST_CASE("trace projections") {
    std::vector<Action> ab = {Action::comm("a"), Action::comm("b")};
    CHECK(project_trace(ab, Direction::In) == std::vector<Action>{Action::receive("a"), Action::receive("b")});
    CHECK(project_trace({Action::comm("a")}, Direction::Out) == std::vector<Action>{Action::send("a")});
    CHECK(project_trace({}, Direction::In).empty());
    CHECK_THROWS(project_trace({Action::send("a")}, Direction::In));

    SystemSpec spec = parse_spec("plant P = ?c.!r.P; supervisor S = !c.?r.S;");
    CHECK(check_trace_projection(spec, {Action::comm("c")}));
    CHECK(check_trace_projection(spec, {Action::comm("c"), Action::comm("r")}));
    CHECK(check_trace_projection(spec, {}));
    CHECK_THROWS_AS(check_trace_projection(spec, {Action::comm("r")}), TraceNotExecutable);
}

TEST_CASE("trace projections over the corpus") {
    for (const auto& name : testing::whole_corpus()) {
        SyncLoop sync = build_sync_loop(testing::load_corpus(name));
        // Every trace of length <= 4.
        std::vector<std::vector<Action>> frontier = {{}};
        for (int depth = 0; depth < 4; ++depth) {
            std::vector<std::vector<Action>> next;
            for (const auto& trace : frontier) {
                CAPTURE(name);
                CHECK(check_trace_projection(sync, trace));
                for (const Action& a : sync.loop.actions()) {
                    auto longer = trace;
                    longer.push_back(a);
                    try {
                        check_trace_projection(sync, longer);
                        next.push_back(longer);
                    } catch (const TraceNotExecutable&) {
                    }
                }
            }
            frontier = std::move(next);
        }
    }
}
