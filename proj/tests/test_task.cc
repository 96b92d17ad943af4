#include "doctest.h"

#include "symplan/axioms/evaluate.h"
#include "symplan/task/task.h"

#include <string>

using namespace std;
using namespace symplan::task;

namespace {
string fixture(const string &name) { return string(FIXTURE_DIR) + "/" + name; }

const char *kSmall = R"(version 1
metric general
vars 3
a 3 primary
b 2 primary
d 2 derived 1
init 2 0 0
goal 1
d 1
bound 7
ops 1
op go
pre 1
a 2
eff 1
b 1
cost abs(a - 5) * 2 + -3
axioms 1
d <- b a=2
utility a * a - b
)";
}  // namespace

TEST_CASE("gripper fixture parses with three unit-cost operators") {
    Task t = load_task(fixture("gripper.task"));
    REQUIRE(t.ops.size() == 3);
    CHECK(t.ops[0].name == "pick-up");
    CHECK(t.ops[1].name == "drop");
    CHECK(t.ops[2].name == "move");
    for (const Operator &o : t.ops)
        CHECK(o.cost.constant_value() == 1);
    CHECK(t.metric == Metric::Unit);
    CHECK(!t.bound.has_value());
}

TEST_CASE("OSP fixture has the utility 2x + xy, bound 1 and an empty goal") {
    Task t = load_task(fixture("osp_example.task"));
    CHECK(t.goal.empty());
    CHECK(t.bound == 1);
    REQUIRE(t.utility.has_value());
    CHECK(t.utility->eval({1, 1}) == 3);
    CHECK(t.utility->eval({1, 0}) == 2);
    CHECK(t.utility->eval({0, 1}) == 0);
}

TEST_CASE("expression evaluation") {
    auto lookup = [](const string &n) { return n == "x" ? 0 : n == "y" ? 1 : -1; };
    CHECK(parse_expr("2 * x + x * y", lookup).eval({1, 1}) == 3);
    CHECK(parse_expr("abs(0 - 5)", lookup).eval({0, 0}) == 5);
    CHECK(parse_expr("abs(x - 7) + abs(y - 1)", lookup).eval({10, 1}) == 3);
    CHECK(parse_expr("2 - 3 - 4", lookup).eval({0, 0}) == -5);
    CHECK(parse_expr("-(x + 1) * 2", lookup).eval({3, 0}) == -8);
    CHECK(parse_expr("1 + 2 * 3", lookup).eval({0, 0}) == 7);
    CHECK_THROWS_AS(parse_expr("1 + ", lookup), ExprSyntaxError);
    CHECK_THROWS_AS(parse_expr("z", lookup), ExprSyntaxError);
    CHECK_THROWS_AS(parse_expr("abs 3", lookup), ExprSyntaxError);
}

TEST_CASE("parse, serialize, parse is the identity") {
    for (const char *name : {"gripper.task", "osp_example.task", "sdac_example.task",
                             "reachability.task", "unsolvable.task", "rover.task", "fig31.task"}) {
        Task a = load_task(fixture(name));
        Task b = parse_task(serialize(a));
        CHECK(a == b);
        CHECK(serialize(b) == serialize(a));
    }
    Task s = parse_task(kSmall);
    CHECK(parse_task(serialize(s)) == s);
}

TEST_CASE("errors carry line numbers and catch invariant violations") {
    string eff_derived = R"(version 1
metric unit
vars 2
a 2 primary
d 2 derived 1
init 0 0
goal 0
bound inf
ops 1
op bad
pre 0
eff 1
d 1
)";
    CHECK_THROWS_WITH_AS(parse_task(eff_derived), doctest::Contains("derived variable in effect"),
                         ParseError);

    string syntax = "version 1\nmetric unit\nvars x\n";
    CHECK_THROWS_WITH_AS(parse_task(syntax), doctest::Contains("line 3"), ParseError);

    string unstratified = R"(version 1
metric unit
vars 3
a 2 primary
d 2 derived 1
e 2 derived 1
init 0 0 0
goal 0
bound inf
ops 0
axioms 1
d <- !e
)";
    CHECK_THROWS_WITH_AS(parse_task(unstratified), doctest::Contains("stratified"), TaskError);

    string upward = R"(version 1
metric unit
vars 3
a 2 primary
d 2 derived 1
e 2 derived 2
init 0 0 0
goal 0
bound inf
ops 0
axioms 1
d <- e
)";
    CHECK_THROWS_AS(parse_task(upward), TaskError);
}

TEST_CASE("stratification check follows the layer conditions literally") {
    Task t = parse_task(kSmall);
    CHECK(is_stratified(t));
    // same-layer positive dependency is allowed
    t.vars.push_back({"e", 2, true, 1});
    t.init.push_back(0);
    t.axioms.push_back({3, {{2, 1}}});
    CHECK(is_stratified(t));
    // same-layer negative dependency is not
    t.axioms.push_back({3, {{2, 0}}});
    CHECK(!is_stratified(t));
}

TEST_CASE("apply_operator and costs") {
    Task g = load_task(fixture("gripper.task"));
    vector<int> s0 = g.init;
    vector<int> s1 = apply_operator(g, s0, 0, s0);
    CHECK(s1 == vector<int>{0, 1});
    CHECK_THROWS_AS(apply_operator(g, s0, 1, s0), TaskError);

    Task t = parse_task(kSmall);
    vector<int> ext = symplan::axioms::evaluate_axioms(t, t.init);
    CHECK(ext == vector<int>{2, 0, 0});
    vector<int> s = apply_operator(t, t.init, 0, ext);
    CHECK(symplan::axioms::evaluate_axioms(t, s) == vector<int>{2, 1, 1});
    CHECK(operator_cost(t, 0, ext) == 3);
    CHECK(state_utility(t, symplan::axioms::evaluate_axioms(t, s)) == 3);
}

TEST_CASE("reachability axioms close over the free cells") {
    Task t = load_task(fixture("reachability.task"));
    vector<int> ext = symplan::axioms::evaluate_axioms(t, t.init);
    CHECK(ext[2] == 1);
    CHECK(ext[3] == 1);
    Task none = load_task(fixture("gripper.task"));
    CHECK(symplan::axioms::evaluate_axioms(none, none.init) == none.init);
}

TEST_CASE("plan file format") {
    Task g = load_task(fixture("gripper.task"));
    Plan p{{0, 2, 1}, 3, nullopt};
    CHECK(plan_to_string(g, p) == "(pick-up)\n(move)\n(drop)\n; cost = 3\n");
    p.utility = 4;
    CHECK(plan_to_string(g, p).find("; utility = 4") != string::npos);
}
