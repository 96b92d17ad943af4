#include "doctest.h"

#include "symplan/oracle/oracle.h"
#include "symplan/search/ucs.h"

using namespace std;
using namespace symplan;
using namespace symplan::task;
using namespace symplan::symbolic;
using namespace symplan::search;

namespace {
string fixture(const string &name) { return string(FIXTURE_DIR) + "/" + name; }

void check_against_oracle(const Task &t, const SearchResult &r, const oracle::OptimalResult &o) {
    REQUIRE(r.solved == o.solvable);
    if (!r.solved)
        return;
    CHECK(r.cost == o.cost);
    oracle::PlanCheck c = oracle::validate_plan(t, r.plan);
    CHECK_MESSAGE(c.valid, c.error);
    CHECK(c.cost == r.cost);
}
}  // namespace

TEST_CASE("gripper in every direction") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t);
    for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional}) {
        SearchResult r = uniform_cost_search(sp, d);
        REQUIRE(r.solved);
        CHECK(r.cost == 3);
        CHECK(r.plan == vector<int>{0, 2, 1});
    }
    SearchResult e = ev_search(sp);
    CHECK(e.cost == 3);
    CHECK(e.plan == vector<int>{0, 2, 1});
}

TEST_CASE("goal satisfied initially gives the empty plan") {
    Task t = load_task(fixture("gripper.task"));
    t.goal = {{0, t.init[0]}};
    SearchSpace sp(t);
    for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional}) {
        SearchResult r = uniform_cost_search(sp, d);
        REQUIRE(r.solved);
        CHECK(r.cost == 0);
        CHECK(r.plan.empty());
    }
}

TEST_CASE("unsolvable fixture") {
    Task t = load_task(fixture("unsolvable.task"));
    SearchSpace sp(t);
    for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional})
        CHECK(!uniform_cost_search(sp, d).solved);
    CHECK(!ev_search(sp).solved);
}

TEST_CASE("all directions match the oracle on random classical and sdac tasks") {
    for (auto profile : {oracle::Profile::Plain, oracle::Profile::Sdac}) {
        for (uint64_t seed = 0; seed < 150; ++seed) {
            Task t = oracle::random_task(seed, profile).task;
            auto o = oracle::oracle_optimal(t);
            SearchSpace sp(t);
            for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional}) {
                CAPTURE(seed);
                CAPTURE(to_string(d));
                check_against_oracle(t, uniform_cost_search(sp, d), o);
            }
            check_against_oracle(t, ev_search(sp), o);
        }
    }
}

TEST_CASE("axiom encodings agree with the oracle") {
    for (uint64_t seed = 0; seed < 150; ++seed) {
        Task t = oracle::random_task(seed, oracle::Profile::Axioms).task;
        auto o = oracle::oracle_optimal(t);
        CAPTURE(seed);
        for (AxiomMode m : {AxiomMode::OBased, AxiomMode::VBased}) {
            SearchSpace sp(t, {OrderKind::Interleaved, m, 1});
            check_against_oracle(t, uniform_cost_search(sp, Direction::Forward), o);
            CHECK_THROWS_AS(uniform_cost_search(sp, Direction::Backward), SearchError);
        }
        SearchSpace tr(t);
        for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional})
            check_against_oracle(t, uniform_cost_search(tr, d), o);
    }
}

TEST_CASE("closed layers hold exact distances") {
    Task g = load_task(fixture("gripper.task"));
    SearchSpace gs(g);
    SearchStats stats;
    UcsFrontier f(gs, true, gs.init(), nullopt);
    vector<int64_t> seen;
    while (!f.exhausted()) {
        if (auto idx = f.pop(stats)) {
            seen.push_back(f.closed()[*idx].g.value());
            f.expand(*idx, stats);
        }
    }
    CHECK(seen == vector<int64_t>{0, 1, 2, 3});

    for (uint64_t seed = 0; seed < 25; ++seed) {
        Task t = oracle::random_task(seed, oracle::Profile::Sdac).task;
        t.bound.reset();
        SearchSpace sp(t);
        UcsFrontier u(sp, true, sp.init(), nullopt);
        while (!u.exhausted()) {
            auto idx = u.pop(stats);
            if (!idx)
                continue;
            const Layer &l = u.closed()[*idx];
            for (const auto &a : sp.enumerate(l.states)) {
                Task probe = t;
                vector<int> s = sp.decode(a);
                probe.goal.clear();
                for (int v : t.primary_vars())
                    probe.goal.push_back({v, s[v]});
                auto o = oracle::oracle_optimal(probe);
                REQUIRE(o.solvable);
                CHECK(o.cost == l.g.value());
            }
            u.expand(*idx, stats);
        }
    }
}

TEST_CASE("cost bound cuts the search") {
    Task t = load_task(fixture("gripper.task"));
    t.bound = 2;
    SearchSpace sp(t);
    for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional})
        CHECK(!uniform_cost_search(sp, d).solved);
    CHECK(!ev_search(sp).solved);
}

TEST_CASE("rover fixture, translate encoding, all directions") {
    Task t = load_task(fixture("rover.task"));
    SearchSpace sp(t);
    for (Direction d : {Direction::Forward, Direction::Backward, Direction::Bidirectional}) {
        SearchResult r = uniform_cost_search(sp, d);
        REQUIRE(r.solved);
        CHECK(r.cost == 22);
        CHECK(oracle::validate_plan(t, r.plan).valid);
    }
}
