#include "doctest.h"

#include "symplan/axioms/evaluate.h"
#include "symplan/oracle/oracle.h"
#include "symplan/symbolic/space.h"

#include <functional>
#include <set>

using namespace std;
using namespace symplan;
using namespace symplan::dd;
using namespace symplan::task;
using namespace symplan::symbolic;

namespace {
string fixture(const string &name) { return string(FIXTURE_DIR) + "/" + name; }

// Every total primary state of the task (domains as declared).
vector<vector<int>> all_states(const Task &t) {
    vector<vector<int>> out;
    vector<int> s(t.vars.size(), 0);
    function<void(size_t)> rec = [&](size_t i) {
        if (i == s.size()) {
            out.push_back(s);
            return;
        }
        if (t.vars[i].derived) {
            s[i] = 0;
            rec(i + 1);
            return;
        }
        for (int v = 0; v < t.vars[i].domain; ++v) {
            s[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

Assignment assignment_of(const SearchSpace &sp, const vector<int> &s) {
    return sp.store().pick_state(sp.expand(sp.enc().state(s)));
}
}  // namespace

TEST_CASE("compiled utility of the two-variable example has the documented sizes") {
    Task t = load_task(fixture("osp_example.task"));
    SearchSpace sp(t);
    Add a = sp.compile_add(*t.utility);
    Ev e = sp.compile_ev(*t.utility);
    CHECK(sp.store().node_count(a) == 5);
    CHECK(sp.store().node_count(e) == 3);
    for (auto &s : all_states(t)) {
        Assignment as = assignment_of(sp, s);
        CHECK(sp.store().eval(a, as) == Weight(t.utility->eval(s)));
        CHECK(sp.store().eval(e, as) == Weight(t.utility->eval(s)));
    }
    Ev c = sp.compile_ev(Expr::constant(7));
    CHECK(c.is_constant());
    CHECK(c.offset() == Weight(7));
}

TEST_CASE("compiled expressions agree with direct evaluation on random cost terms") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        Task t = oracle::random_task(seed, oracle::Profile::Sdac).task;
        SearchSpace sp(t);
        auto states = all_states(t);
        for (const Operator &o : t.ops) {
            Add a = sp.compile_add(o.cost);
            Ev e = sp.compile_ev(o.cost);
            for (auto &s : states) {
                Assignment as = assignment_of(sp, s);
                int64_t want = o.cost.eval(s);
                CHECK(sp.store().eval(a, as) == Weight(want));
                CHECK(sp.store().eval(e, as) == Weight(want));
            }
        }
    }
}

TEST_CASE("state-dependent cost splits into one relation per cost value") {
    Task t = load_task(fixture("sdac_example.task"));
    SearchSpace sp(t);
    REQUIRE(sp.parts().size() == 2);
    DdStore &st = sp.store();
    int x = t.var_index("x"), y = t.var_index("y");
    // descending cost
    CHECK(sp.parts()[0].cost == Weight(6));
    CHECK(sp.parts()[1].cost == Weight(1));
    Bdd pre6 = st.exists(sp.parts()[0].rel, sp.enc().primed_set());
    Bdd pre1 = st.exists(sp.parts()[1].rel, sp.enc().primed_set());
    CHECK(pre6 == (sp.fact(x, 0) & sp.fact(y, 1)));
    CHECK(pre1 == (sp.fact(x, 0) & sp.fact(y, 0)));

    const Ev &ev = sp.ev_trs().at(0);
    Assignment a(st.num_vars(), 0);
    a[sp.enc().bits(y, false)[0]] = 1;
    a[sp.enc().bits(y, true)[0]] = 1;
    a[sp.enc().bits(x, true)[0]] = 1;
    CHECK(st.eval(ev, a) == Weight(6));
    a[sp.enc().bits(x, false)[0]] = 1;
    CHECK(st.eval(ev, a).is_infinite());
}

TEST_CASE("gripper merges into one unit-cost relation") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t);
    REQUIRE(sp.trs().size() == 1);
    CHECK(sp.trs()[0].cost == Weight(1));
    CHECK(sp.trs()[0].ops.size() == 3);
    Bdd s1 = sp.image(sp.init(), sp.trs()[0].rel);
    vector<int> want = apply_operator(t, t.init, 0, t.init);
    CHECK(s1 == sp.enc().state(want));
    CHECK(sp.image(sp.store().bdd_false(), sp.trs()[0].rel).is_false());
}

TEST_CASE("single-operator images match explicit successors") {
    for (auto profile : {oracle::Profile::Plain, oracle::Profile::Sdac, oracle::Profile::Axioms}) {
        for (uint64_t seed = 0; seed < 40; ++seed) {
            Task t = oracle::random_task(seed, profile).task;
            for (AxiomMode mode : {AxiomMode::Translate, AxiomMode::OBased, AxiomMode::VBased}) {
                if (mode != AxiomMode::Translate && !t.has_axioms())
                    continue;
                SearchSpace sp(t, {OrderKind::Interleaved, mode, 1});
                for (auto &s : all_states(t)) {
                    vector<int> ext = axioms::evaluate_axioms(t, s);
                    Bdd sb = sp.expand(sp.enc().state(s));
                    for (size_t o = 0; o < t.ops.size(); ++o) {
                        Bdd img = sp.store().bdd_false();
                        optional<Weight> cost;
                        for (const TrPart &p : sp.parts()) {
                            if (p.op != int(o))
                                continue;
                            Bdd part = sp.image(sb, p.rel);
                            if (!part.is_false())
                                cost = p.cost;
                            img |= part;
                        }
                        if (satisfies(ext, t.ops[o].pre)) {
                            vector<int> succ = apply_operator(t, s, int(o), ext);
                            CHECK(img == sp.expand(sp.enc().state(succ)));
                            REQUIRE(cost.has_value());
                            CHECK(*cost == Weight(operator_cost(t, int(o), ext)));
                        } else {
                            CHECK(img.is_false());
                        }
                        // preimage of the image covers the source
                        if (!img.is_false()) {
                            Bdd back = sp.store().bdd_false();
                            for (const TrPart &p : sp.parts())
                                if (p.op == int(o))
                                    back |= sp.preimage(img, p.rel);
                            CHECK((sb & ~back).is_false());
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("primary representations and both expansions match explicit axiom evaluation") {
    int checked = 0;
    for (uint64_t seed = 0; seed < 120; ++seed) {
        Task t = oracle::random_task(seed, oracle::Profile::Axioms).task;
        SearchSpace tr(t, {OrderKind::Interleaved, AxiomMode::Translate, 1});
        SearchSpace ob(t, {OrderKind::Interleaved, AxiomMode::OBased, 1});
        SearchSpace vb(t, {OrderKind::File, AxiomMode::VBased, 1});
        for (auto &s : all_states(t)) {
            vector<int> ext = axioms::evaluate_axioms(t, s);
            Assignment a = tr.store().pick_state(tr.enc().state(s));
            for (int d : t.derived_vars())
                CHECK(tr.store().eval(tr.primary_repr(d), a) == (ext[d] == 1));
            for (SearchSpace *sp : {&ob, &vb}) {
                Bdd e = sp->expand(sp->enc().state(s));
                CHECK(e == sp->enc().state(ext));
            }
            CHECK(tr.store().eval(tr.goal(), a) == satisfies(ext, t.goal));
            ++checked;
        }
        // o-based expansion of a whole set equals the union of singletons
        Bdd all = ob.valid();
        Bdd joined = ob.store().bdd_false();
        for (auto &s : all_states(t))
            joined |= ob.enc().state(axioms::evaluate_axioms(t, s));
        CHECK(all == joined);
    }
    CHECK(checked > 500);
}

TEST_CASE("reachability fixture closes over free cells in every encoding") {
    Task t = load_task(fixture("reachability.task"));
    for (AxiomMode mode : {AxiomMode::Translate, AxiomMode::OBased, AxiomMode::VBased}) {
        SearchSpace sp(t, {OrderKind::Interleaved, mode, 1});
        Assignment a = sp.store().pick_state(sp.init());
        for (int d : t.derived_vars()) {
            if (mode == AxiomMode::Translate)
                CHECK(sp.store().eval(sp.primary_repr(d), a));
            else
                CHECK(sp.decode(a)[d] == 0);  // decode drops derived values
        }
    }
}

TEST_CASE("file order keeps primed bits below all unprimed bits") {
    Task t = load_task(fixture("gripper.task"));
    SearchSpace sp(t, {OrderKind::File, AxiomMode::Translate, 1});
    const DdStore &st = sp.store();
    for (VarId u : sp.enc().unprimed_bits())
        CHECK(st.level_of_var(u) < sp.enc().num_state_bits());
    SearchSpace il(t);
    CHECK(il.store().level_of_var(1) == 1);
}

TEST_CASE("store audit is clean after building spaces") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Task t = oracle::random_task(seed, oracle::Profile::Axioms).task;
        SearchSpace sp(t, {OrderKind::Interleaved, AxiomMode::OBased, 1});
        (void)sp.ev_trs();
        CHECK(sp.store().audit().empty());
    }
}
