#include "doctest.h"

#include "symplan/axioms/evaluate.h"
#include "symplan/oracle/oracle.h"

#include <algorithm>
#include <functional>
#include <map>

using namespace std;
using namespace symplan;
using namespace symplan::task;
using namespace symplan::oracle;

namespace {
string fixture(const string &name) { return string(FIXTURE_DIR) + "/" + name; }

// Cheapest plan by exhaustive depth-bounded search over operator sequences.
int64_t brute_force_optimal(const Task &t, int max_len) {
    int64_t best = -1;
    function<void(vector<int>, int64_t, int)> rec = [&](vector<int> s, int64_t cost, int depth) {
        if (t.bound && cost > *t.bound)
            return;
        vector<int> ext = axioms::evaluate_axioms(t, s);
        if (satisfies(ext, t.goal) && (best < 0 || cost < best))
            best = cost;
        if (depth == max_len)
            return;
        for (size_t o = 0; o < t.ops.size(); ++o)
            if (satisfies(ext, t.ops[o].pre))
                rec(apply_operator(t, s, int(o), ext), cost + operator_cost(t, int(o), ext),
                    depth + 1);
    };
    rec(t.init, 0, 0);
    return best;
}
}  // namespace

TEST_CASE("oracle solves the fixtures") {
    Task g = load_task(fixture("gripper.task"));
    OptimalResult r = oracle_optimal(g);
    CHECK(r.solvable);
    CHECK(r.cost == 3);
    CHECK(validate_plan(g, r.plan).valid);

    CHECK(!oracle_optimal(load_task(fixture("unsolvable.task"))).solvable);
    CHECK(oracle_optimal(load_task(fixture("reachability.task"))).cost == 1);
    CHECK(oracle_optimal(load_task(fixture("sdac_example.task"))).cost == 6);
}

TEST_CASE("oracle top-k on gripper") {
    Task g = load_task(fixture("gripper.task"));
    auto plans = oracle_topk(g, 3);
    REQUIRE(plans.size() == 3);
    CHECK(plans[0].cost == 3);
    CHECK(plans[1].cost == 5);
    CHECK(plans[2].cost == 5);
    for (auto &p : plans)
        CHECK(validate_plan(g, p.ops).valid);
    CHECK(plans[0].ops == vector<int>{0, 2, 1});
}

TEST_CASE("oracle OSP and ranking on the two-variable example") {
    Task t = load_task(fixture("osp_example.task"));
    OspResult r = oracle_osp(t);
    CHECK(r.found);
    CHECK(r.utility == 2);
    CHECK(r.cost == 1);
    CHECK(r.plan == vector<int>{1});
    auto ranked = oracle_topk_osp(t, 10);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].ops == vector<int>{1});
    CHECK(ranked[1].ops.empty());
    CHECK(ranked[2].ops == vector<int>{0});
}

TEST_CASE("Dijkstra agrees with exhaustive sequence search on random tasks") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        for (Profile p : {Profile::Plain, Profile::Axioms, Profile::Sdac}) {
            Task t = random_task(seed, p).task;
            if (t.ops.size() > 6)
                continue;
            OptimalResult r = oracle_optimal(t);
            int64_t bf = brute_force_optimal(t, 5);
            // a plan of length <= 5 found by brute force bounds the optimum
            if (bf >= 0) {
                REQUIRE(r.solvable);
                CHECK(r.cost <= bf);
            }
            if (r.solvable) {
                PlanCheck c = validate_plan(t, r.plan);
                CHECK(c.valid);
                CHECK(c.cost == r.cost);
                if (r.plan.size() <= 5)
                    CHECK(bf == r.cost);
            }
        }
    }
}

TEST_CASE("top-k costs agree with exhaustive enumeration on small random tasks") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
        Task t = random_task(seed, Profile::Plain).task;
        if (t.ops.size() > 5 || has_zero_cost_cycle(t))
            continue;
        t.bound = 6;
        vector<int64_t> all;
        function<void(vector<int>, int64_t)> rec = [&](vector<int> s, int64_t cost) {
            if (cost > 6)
                return;
            vector<int> ext = axioms::evaluate_axioms(t, s);
            if (satisfies(ext, t.goal))
                all.push_back(cost);
            for (size_t o = 0; o < t.ops.size(); ++o)
                if (satisfies(ext, t.ops[o].pre)) {
                    int64_t c = operator_cost(t, int(o), ext);
                    if (c == 0 && cost == 0 && all.size() > 10000)
                        return;
                    rec(apply_operator(t, s, int(o), ext), cost + c);
                }
        };
        if (any_of(t.ops.begin(), t.ops.end(), [](const Operator &o) { return o.cost.constant_value() == 0; }))
            continue;
        rec(t.init, 0);
        sort(all.begin(), all.end());
        size_t k = min<size_t>(all.size(), 20);
        auto plans = oracle_topk(t, k);
        REQUIRE(plans.size() == k);
        for (size_t i = 0; i < k; ++i)
            CHECK(plans[i].cost == all[i]);
    }
}

TEST_CASE("random task profiles respect their size limits") {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        for (Profile p : {Profile::Plain, Profile::Axioms, Profile::Sdac, Profile::Osp}) {
            GeneratedTask gt = random_task(seed, p);
            const Task &t = gt.task;
            CHECK(t.vars.size() <= 8);
            for (const Variable &v : t.vars)
                CHECK(v.domain <= 3);
            CHECK(t.ops.size() <= 12);
            CHECK(t.num_layers() <= 2);
            CHECK(t.axioms.size() <= 6);
            CHECK(is_stratified(t));
            for (const Operator &o : t.ops)
                CHECK(o.cost.depth() <= 4);  // abs(a - b) adds one level per term
            if (p == Profile::Osp) {
                REQUIRE(t.bound.has_value());
                CHECK(gt.quartile >= 1);
                CHECK(gt.quartile <= 4);
                CHECK(*t.bound == gt.sampled_cost * gt.quartile / 4);
                CHECK(t.utility.has_value());
            }
            if (p != Profile::Axioms)
                CHECK(!t.has_axioms());
            CHECK(random_task(seed, p).task == t);
        }
    }
}

TEST_CASE("validate_plan rejects bad plans") {
    Task g = load_task(fixture("gripper.task"));
    CHECK(!validate_plan(g, {1}).valid);
    CHECK(!validate_plan(g, {0}).valid);
    PlanCheck c = validate_plan(g, {0, 2, 1});
    CHECK(c.valid);
    CHECK(c.cost == 3);
}

TEST_CASE("rover fixture: the described plan and the explicit optimum") {
    Task t = load_task(fixture("rover.task"));
    vector<string> names = {"navigate-7-3-7-2", "navigate-7-2-7-1", "launch-at-7-1", "fly-to-6-1",
                            "take-image-6-1", "fly-to-10-1", "take-image-10-1", "fly-to-7-1",
                            "land-at-7-1", "navigate-7-1-7-2", "navigate-7-2-7-3"};
    // apply the described prefix directly; every step must be applicable
    vector<int> s = t.init;
    int64_t cost = 0;
    for (auto &n : names) {
        int o = t.op_index(n);
        REQUIRE(o >= 0);
        vector<int> ext = axioms::evaluate_axioms(t, s);
        REQUIRE(satisfies(ext, t.ops[o].pre));
        cost += operator_cost(t, o, ext);
        s = apply_operator(t, s, o, ext);
    }
    CHECK(cost == 22);
    OptimalResult r = oracle_optimal(t);
    REQUIRE(r.solvable);
    CHECK(validate_plan(t, r.plan).valid);
    CHECK(r.cost == 22);
}
