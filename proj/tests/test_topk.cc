#include "doctest.h"

#include "symplan/oracle/oracle.h"
#include "symplan/search/topk.h"

#include <map>
#include <set>

using namespace std;
using namespace symplan;
using namespace symplan::task;
using namespace symplan::symbolic;
using namespace symplan::search;

namespace {
string fixture(const string &name) { return string(FIXTURE_DIR) + "/" + name; }

const Direction kDirs[] = {Direction::Forward, Direction::Backward, Direction::Bidirectional};

// Same cost sequence; identical plan sets for every cost group the cut at k
// leaves complete; all plans valid, distinct and correctly priced.
void compare(const Task &t, const TopkResult &r, const vector<oracle::RankedPlan> &o) {
    REQUIRE(r.plans.size() == o.size());
    map<int64_t, set<vector<int>>> mine, theirs;
    for (size_t i = 0; i < o.size(); ++i) {
        CHECK(r.plans[i].cost == o[i].cost);
        auto c = oracle::validate_plan(t, r.plans[i].ops);
        CHECK_MESSAGE(c.valid, c.error);
        CHECK(c.cost == r.plans[i].cost);
        mine[r.plans[i].cost].insert(r.plans[i].ops);
        theirs[o[i].cost].insert(o[i].ops);
    }
    size_t total = 0;
    for (auto &[c, s] : mine)
        total += s.size();
    CHECK(total == r.plans.size());
    if (o.empty())
        return;
    int64_t last = o.back().cost;
    for (auto &[c, s] : theirs)
        if (c < last)
            CHECK(mine[c] == s);
}
}  // namespace

TEST_CASE("gripper top three") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t);
    for (Direction d : kDirs) {
        CAPTURE(to_string(d));
        TopkResult r = topk_search(sp, {3, d, false});
        REQUIRE(r.plans.size() == 3);
        CHECK(r.plans[0].cost == 3);
        CHECK(r.plans[0].ops == vector<int>{0, 2, 1});
        CHECK(r.plans[1].cost == 5);
        CHECK(r.plans[2].cost == 5);
        compare(t, r, oracle::oracle_topk(t, 3));
    }
}

TEST_CASE("zero plans requested or none exist") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t);
    CHECK(topk_search(sp, {0, Direction::Forward, false}).plans.empty());
    Task u = load_task(fixture("unsolvable.task"));
    SearchSpace us(u);
    for (Direction d : kDirs)
        CHECK(topk_search(us, {5, d, false}).plans.empty());
}

TEST_CASE("random tasks match the explicit ranking") {
    for (auto profile : {oracle::Profile::Plain, oracle::Profile::Sdac}) {
        for (uint64_t seed = 0; seed < 120; ++seed) {
            CAPTURE(seed);
            Task t = oracle::random_task(seed, profile).task;
            SearchSpace sp(t);
            for (size_t k : {size_t(1), size_t(4), size_t(15)}) {
                auto o = oracle::oracle_topk(t, k);
                for (Direction d : kDirs) {
                    CAPTURE(k);
                    CAPTURE(to_string(d));
                    compare(t, topk_search(sp, {k, d, false}), o);
                }
            }
        }
    }
}

TEST_CASE("axiom encodings enumerate the same plans") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        CAPTURE(seed);
        Task t = oracle::random_task(seed, oracle::Profile::Axioms).task;
        auto o = oracle::oracle_topk(t, 6);
        for (AxiomMode m : {AxiomMode::OBased, AxiomMode::VBased}) {
            SearchSpace sp(t, {OrderKind::Interleaved, m, 1});
            compare(t, topk_search(sp, {6, Direction::Forward, false}), o);
        }
        SearchSpace tr(t);
        for (Direction d : kDirs)
            compare(t, topk_search(tr, {6, d, false}), o);
    }
}

TEST_CASE("all plans within a bound") {
    int listed = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        CAPTURE(seed);
        Task t = oracle::random_task(seed, oracle::Profile::Sdac).task;
        auto opt = oracle::oracle_optimal(t);
        if (!opt.solvable)
            continue;
        t.bound = opt.cost + 2;
        SearchSpace sp(t);
        auto o = oracle::oracle_topk(t, 500);
        if (o.size() < 500) {
            for (Direction d : kDirs)
                compare(t, topk_search(sp, {kAllPlans, d, false}), o);
            ++listed;
        } else {
            compare(t, topk_search(sp, {20, Direction::Bidirectional, false}), oracle::oracle_topk(t, 20));
        }
    }
    CHECK(listed > 20);
}

namespace {
// x toggles between 0 and 1 at the given cost; one step reaches the goal.
Task toggle_task(int64_t toggle_cost, optional<int64_t> bound) {
    Task t;
    t.metric = Metric::General;
    t.vars = {{"x", 2, false, 0}, {"y", 2, false, 0}};
    t.init = {0, 0};
    t.ops = {{"on", {{0, 0}}, {{0, 1}}, Expr::constant(toggle_cost)},
             {"off", {{0, 1}}, {{0, 0}}, Expr::constant(toggle_cost)},
             {"go", {{1, 0}}, {{1, 1}}, Expr::constant(1)}};
    t.goal = {{1, 1}};
    t.bound = bound;
    validate(t);
    return t;
}
}  // namespace

TEST_CASE("infinitely many plans") {
    Task zero = toggle_task(0, nullopt);
    SearchSpace zs(zero);
    for (Direction d : kDirs) {
        CHECK_THROWS_AS(topk_search(zs, {kAllPlans, d, false}), TopkUnbounded);
        compare(zero, topk_search(zs, {7, d, false}), oracle::oracle_topk(zero, 7));
    }
    Task pos = toggle_task(1, nullopt);
    SearchSpace ps(pos);
    for (Direction d : kDirs) {
        CHECK_THROWS_AS(topk_search(ps, {kAllPlans, d, false}), TopkUnbounded);
        compare(pos, topk_search(ps, {9, d, false}), oracle::oracle_topk(pos, 9));
    }
    Task capped = toggle_task(1, 5);
    SearchSpace cs(capped);
    auto o = oracle::oracle_topk(capped, 1000);
    CHECK(o.size() < 1000);
    for (Direction d : kDirs)
        compare(capped, topk_search(cs, {kAllPlans, d, false}), o);
}

TEST_CASE("closing visited states loses plans") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t);
    auto o = oracle::oracle_topk(t, 10);
    TopkResult good = topk_search(sp, {10, Direction::Forward, false});
    TopkResult lossy = topk_search(sp, {10, Direction::Forward, true});
    compare(t, good, o);
    CHECK(lossy.plans.size() < good.plans.size());
}

TEST_CASE("utility-ranked plans match the explicit ranking") {
    int compared = 0;
    for (uint64_t seed = 0; seed < 160; ++seed) {
        CAPTURE(seed);
        Task t = oracle::random_task(seed, oracle::Profile::Osp).task;
        if (oracle::has_zero_cost_cycle(t))
            continue;  // the explicit ranking cannot list these
        vector<oracle::RankedPlan> o;
        try {
            o = oracle::oracle_topk_osp(t, 12);
        } catch (const oracle::OracleLimitExceeded &) {
            continue;
        }
        ++compared;
        SearchSpace sp(t);
        for (UtilityRepr repr : {UtilityRepr::Bdd, UtilityRepr::Add}) {
            TopkResult r = topk_osp_search(sp, 12, repr);
            REQUIRE(r.plans.size() == o.size());
            for (size_t i = 0; i < o.size(); ++i) {
                CHECK(r.plans[i].utility == o[i].utility);
                CHECK(r.plans[i].cost == o[i].cost);
                auto c = oracle::validate_plan(t, r.plans[i].ops);
                CHECK(c.valid);
                CHECK(c.utility == o[i].utility);
            }
        }
    }
    CHECK(compared > 80);
}
