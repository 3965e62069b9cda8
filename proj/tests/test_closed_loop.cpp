#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "desync/closed_loop.hpp"
#include "desync/equivalence.hpp"
#include "desync/errors.hpp"
#include "support.hpp"

using namespace desync;

namespace {

const SystemSpec& pingpong() {
    static const SystemSpec spec = parse_spec("plant P = ?c.!r.P; supervisor S = !c.?r.S;");
    return spec;
}

LoopContext pingpong_context() {
    return build_sync_loop(pingpong()).context;
}

} // namespace

TEST_CASE("gamma") {
    CHECK(gamma(Action::send("a"), Action::receive("a")) == Action::comm("a"));
    CHECK(gamma(Action::receive("a"), Action::send("a")) == Action::comm("a"));
    CHECK_FALSE(gamma(Action::send("a"), Action::receive("b")));
    CHECK_FALSE(gamma(Action::send("a"), Action::send("a")));
    CHECK_FALSE(gamma(Action::send("a", true), Action::receive("a")));
    CHECK_FALSE(gamma(Action::tau(), Action::tau()));
}

TEST_CASE("gamma prime") {
    LoopContext ctx = pingpong_context();
    // Plant sends into the bag: hidden.
    CHECK(gamma_prime(Action::send("r"), Action::receive("r", true), ctx) == Action::comm("r", true));
    // Supervisor sends into the bag: visible.
    CHECK(gamma_prime(Action::send("c"), Action::receive("c", true), ctx) == Action::comm("c"));
    // Bag delivers to the plant: hidden.
    CHECK(gamma_prime(Action::send("c", true), Action::receive("c"), ctx) == Action::comm("c", true));
    // Bag delivers to the supervisor: visible.
    CHECK(gamma_prime(Action::send("r", true), Action::receive("r"), ctx) == Action::comm("r"));
    // Symmetric.
    CHECK(gamma_prime(Action::receive("r", true), Action::send("r"), ctx) == Action::comm("r", true));
    // Direct contact is severed.
    CHECK_FALSE(gamma_prime(Action::send("c"), Action::receive("c"), ctx));
    CHECK_FALSE(gamma_prime(Action::send("c", true), Action::receive("c", true), ctx));
    CHECK_FALSE(gamma_prime(Action::send("x"), Action::receive("x", true), ctx));

    LoopContext bad = ctx;
    bad.sup_out.insert(Action::send("r"));
    CHECK_THROWS_AS(gamma_prime(Action::send("r"), Action::receive("r", true), bad), AmbiguousDirection);
}

TEST_CASE("loop context") {
    LoopContext ctx = pingpong_context();
    CHECK(ctx.plant_in == ActionSet{Action::receive("c")});
    CHECK(ctx.plant_out == ActionSet{Action::send("r")});
    CHECK(ctx.hidden == ActionSet{Action::comm("c"), Action::comm("r")});
    CHECK(ctx.hatted_hidden == ActionSet{Action::comm("c", true), Action::comm("r", true)});
    CHECK(ctx.blocked.size() == 4);
    CHECK(ctx.hatted_blocked.size() == 4);
    CHECK_THROWS_AS(build_sync_loop(parse_spec("plant P = !a.P; supervisor S = !a.?b.S;")), AmbiguousDirection);
}

TEST_CASE("compose_sync examples") {
    Lts loop = compose_sync(pingpong());
    CHECK(loop.size() == 2);
    CHECK(loop.transitions() ==
          std::vector<Transition>{{0, Action::comm("c"), 1}, {1, Action::comm("r"), 0}});

    Lts stuck = compose_sync(parse_spec("plant P = ?c.P; supervisor S = !d.S;"));
    CHECK(stuck.size() == 1);
    CHECK(stuck.transitions().empty());

    Lts one = compose_sync(parse_spec("plant P = ?a.0 + ?b.0; supervisor S = !a.0;"));
    CHECK(one.size() == 2);
    CHECK(one.transitions() == std::vector<Transition>{{0, Action::comm("a"), 1}});

    CHECK_THROWS_AS(compose_sync(parse_spec("plant P = ?a.!a.P; supervisor S = !a.S;")), NotIoProcess);
    CHECK_THROWS_AS(compose_sync(parse_spec("plant P = tau.P; supervisor S = 0;")), NotIoProcess);
    CHECK_THROWS_AS(compose_sync(parse_spec("plant P = ?a.P; supervisor S = ~a.S;")), NotIoProcess);
}

TEST_CASE("compose_sync matches the term-level construction") {
    for (const auto& name : testing::whole_corpus()) {
        SystemSpec spec = testing::load_corpus(name);
        SystemSpec ext = spec;
        Term root = term::encapsulate(build_sync_loop(spec).context.blocked,
                                      term::parallel(spec.plant_term(), spec.supervisor_term()));
        CAPTURE(name);
        CHECK(strong_bisim(compose_sync(spec), generate_lts(ext, root)).equivalent);
    }
}

TEST_CASE("compose_async on ping-pong") {
    Lts async = compose_async(pingpong(), 1, 1);
    CHECK(async.size() == 4);
    std::size_t silent = 0;
    for (const Transition& t : async.transitions()) {
        CHECK((t.action.is_tau() || t.action.is_comm()));
        CHECK_FALSE(t.action.hatted);
        if (t.action.is_tau()) {
            ++silent;
            REQUIRE(async.silent_origin(t));
            CHECK(async.silent_origin(t)->hatted);
        }
    }
    CHECK(silent == 2);
    CHECK(async.transitions().size() == 4);
    CHECK(branching_bisim(compose_async(pingpong(), 1, 1), compose_async(pingpong(), 2, 2)).equivalent);
}

TEST_CASE("async loop: LTS product agrees with the process term") {
    for (const auto& name : testing::whole_corpus()) {
        SystemSpec spec = testing::load_corpus(name);
        for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}}) {
            auto [ext, root] = async_loop_term(spec, m, n);
            CAPTURE(name);
            CAPTURE(m);
            CAPTURE(n);
            CHECK(strong_bisim(compose_async(spec, m, n), generate_lts(ext, root)).equivalent);
        }
    }
}

TEST_CASE("async loop: re-association of the parallel composition") {
    for (const auto& name : testing::whole_corpus()) {
        SystemSpec spec = testing::load_corpus(name);
        SyncLoop sync = build_sync_loop(spec);
        const LoopContext& ctx = sync.context;
        auto comm = make_gamma_prime(ctx);
        Lts bags = build_double_bag(ctx.plant_input_labels(), ctx.plant_output_labels(), 2, 2);
        Lts right = parallel(sync.plant, parallel(bags, sync.supervisor, *comm, kDefaultMaxStates), *comm,
                             kDefaultMaxStates);
        Lts other = abstract(encapsulate(right, [](const Action& a) { return a.is_send() || a.is_receive(); }),
                             ctx.hatted_hidden);
        CAPTURE(name);
        CHECK(strong_bisim(compose_async(sync, 2, 2), other).equivalent);
    }
}

TEST_CASE("async alphabet") {
    for (const auto& name : testing::whole_corpus()) {
        SystemSpec spec = testing::load_corpus(name);
        SyncLoop sync = build_sync_loop(spec);
        ActionSet sync_visible = alphabet(sync.loop).all;
        for (std::size_t m = 1; m <= 2; ++m) {
            Lts async = compose_async(sync, m, 2);
            for (const Action& a : async.actions()) {
                CHECK((a.is_tau() || sync_visible.contains(a)));
            }
        }
    }
    // Well-posed systems expose the same communications either way.
    for (const auto& name : testing::passing_corpus()) {
        SyncLoop sync = build_sync_loop(testing::load_corpus(name));
        CHECK(alphabet(compose_async(sync, 1, 1)).all == alphabet(sync.loop).all);
    }
}

TEST_CASE("rename_supervisor") {
    Lts r = rename_supervisor(pingpong());
    CHECK(r.transitions() == std::vector<Transition>{{0, Action::comm("c"), 1}, {1, Action::comm("r"), 0}});
    Lts zero = rename_supervisor(parse_spec("plant P = 0; supervisor S = 0;"));
    CHECK(zero.size() == 1);
    CHECK(zero.transitions().empty());
    CHECK(strong_bisim(r, compose_sync(pingpong())).equivalent);
}
