#include "doctest.h"

#include "symplan/dd/store.h"

#include <functional>
#include <random>
#include <set>

using namespace std;
using namespace symplan::dd;

namespace {

Assignment bits(uint32_t code, size_t n) {
    Assignment s(n);
    for (size_t i = 0; i < n; ++i)
        s[i] = (code >> i) & 1;
    return s;
}

// Builds a BDD from a truth table by summing minterms in the given order.
Bdd from_table(DdStore &st, const vector<bool> &table, size_t n, bool reverse) {
    Bdd r = st.bdd_false();
    for (size_t k = 0; k < table.size(); ++k) {
        size_t code = reverse ? table.size() - 1 - k : k;
        if (!table[code])
            continue;
        vector<pair<VarId, bool>> lits;
        for (size_t i = 0; i < n; ++i)
            lits.emplace_back(VarId(i), (code >> i) & 1);
        r |= st.cube(lits);
    }
    return r;
}

// Shannon expansion on variable 0 downwards, without using cube().
Bdd from_table_shannon(DdStore &st, const vector<bool> &table, size_t n) {
    function<Bdd(size_t, uint32_t)> rec = [&](size_t var, uint32_t prefix) -> Bdd {
        if (var == n)
            return table[prefix] ? st.bdd_true() : st.bdd_false();
        Bdd lo = rec(var + 1, prefix);
        Bdd hi = rec(var + 1, prefix | (1u << var));
        return st.ite(st.literal(VarId(var)), hi, lo);
    };
    return rec(0, 0);
}

Ev ev_from_values(DdStore &st, const vector<Weight> &vals, size_t n) {
    Ev r = st.ev_constant(Weight::infinity());
    for (size_t code = 0; code < vals.size(); ++code) {
        vector<pair<VarId, bool>> lits;
        for (size_t i = 0; i < n; ++i)
            lits.emplace_back(VarId(i), (code >> i) & 1);
        r = min(r, st.ev_from_bdd(st.cube(lits), vals[code]));
    }
    return r;
}

Add add_from_values(DdStore &st, const vector<Weight> &vals, size_t n) {
    Add r = st.add_constant(Weight::infinity());
    for (size_t code = 0; code < vals.size(); ++code) {
        vector<pair<VarId, bool>> lits;
        for (size_t i = 0; i < n; ++i)
            lits.emplace_back(VarId(i), (code >> i) & 1);
        r = st.add_ite(st.cube(lits), st.add_constant(vals[code]), r);
    }
    return r;
}

}  // namespace

TEST_CASE("worked example sizes for f = 2x + xy") {
    DdStore st(VarOrder::identity(2));
    const VarId x = 0, y = 1;
    Add ax = st.add_from_bdd(st.literal(x), 1, 0);
    Add ay = st.add_from_bdd(st.literal(y), 1, 0);
    Add f = st.add_constant(2) * ax + ax * ay;
    CHECK(st.node_count(f) == 5);

    Ev vx = min(st.ev_from_bdd(st.literal(x, false), 0), st.ev_from_bdd(st.literal(x), 1));
    Ev vy = min(st.ev_from_bdd(st.literal(y, false), 0), st.ev_from_bdd(st.literal(y), 1));
    Ev e = st.ev_constant(2) * vx + vx * vy;
    CHECK(st.node_count(e) == 3);
    CHECK(e.offset() == Weight(0));
    for (uint32_t c = 0; c < 4; ++c) {
        Assignment s = bits(c, 2);
        int64_t expect = 2 * s[0] + s[0] * s[1];
        CHECK(st.eval(e, s) == Weight(expect));
        CHECK(st.eval(f, s) == Weight(expect));
    }
    // x-node: low edge 0 to the terminal, high edge 2 to y; y-node: 0 / 1.
    Bdd cx = st.cube({{x, true}});
    Ev hi = st.ev_restrict(e, cx);
    CHECK(hi.offset() == Weight(2));
    CHECK(st.node_count(hi) == 2);
    Ev lo = st.ev_restrict(e, st.cube({{x, false}}));
    CHECK(lo.offset() == Weight(0));
    CHECK(lo.is_constant());

    CHECK(st.node_count(st.add_equals(f, 0)) == 3);
    CHECK(st.node_count(st.add_equals(f, 2)) == 4);
    CHECK(st.node_count(st.add_equals(f, 3)) == 4);
    CHECK(st.ev_equals(e, 0) == st.literal(x, false));
    CHECK(st.ev_equals(e, 2) == (st.literal(x) & st.literal(y, false)));
    CHECK(st.ev_equals(e, 3) == (st.literal(x) & st.literal(y)));

    auto parts = st.partition_terminals(f);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].first == Weight(0));
    CHECK(parts[2].first == Weight(3));
    CHECK(st.audit().empty());
}

TEST_CASE("canonicity over all three-variable boolean functions") {
    DdStore st(VarOrder::identity(3));
    set<NodeId> ids;
    for (uint32_t fn = 0; fn < 256; ++fn) {
        vector<bool> table(8);
        for (int i = 0; i < 8; ++i)
            table[i] = (fn >> i) & 1;
        Bdd a = from_table(st, table, 3, false);
        Bdd b = from_table(st, table, 3, true);
        Bdd c = from_table_shannon(st, table, 3);
        CHECK(a == b);
        CHECK(a == c);
        ids.insert(a.id());
        for (uint32_t code = 0; code < 8; ++code)
            CHECK(st.eval(a, bits(code, 3)) == table[code]);
    }
    CHECK(ids.size() == 256);
    CHECK(st.audit().empty());
}

TEST_CASE("EV and ADD canonicity on random integer functions") {
    mt19937 rng(7);
    DdStore st(VarOrder::identity(3));
    for (int round = 0; round < 200; ++round) {
        vector<Weight> vals(8);
        for (auto &v : vals) {
            int r = int(rng() % 7);
            v = r == 6 ? Weight::infinity() : Weight(r - 2);
        }
        Ev e1 = ev_from_values(st, vals, 3);
        vector<Weight> shuffled_order = vals;
        Ev e2 = st.ev_constant(Weight::infinity());
        for (int code = 7; code >= 0; --code) {
            vector<pair<VarId, bool>> lits;
            for (int i = 0; i < 3; ++i)
                lits.emplace_back(VarId(i), (code >> i) & 1);
            e2 = min(st.ev_from_bdd(st.cube(lits), vals[code]), e2);
        }
        CHECK(e1 == e2);
        Add a1 = add_from_values(st, vals, 3);
        for (uint32_t code = 0; code < 8; ++code) {
            CHECK(st.eval(e1, bits(code, 3)) == vals[code]);
            CHECK(st.eval(a1, bits(code, 3)) == vals[code]);
        }
    }
    CHECK(st.audit().empty());
}

TEST_CASE("quantification, relational product and renaming against truth tables") {
    mt19937 rng(11);
    const size_t n = 4;
    DdStore st(VarOrder::identity(n));
    for (int round = 0; round < 100; ++round) {
        vector<bool> ta(16), tb(16);
        for (int i = 0; i < 16; ++i) {
            ta[i] = rng() & 1;
            tb[i] = rng() & 1;
        }
        Bdd a = from_table(st, ta, n, false), b = from_table(st, tb, n, false);
        vector<VarId> qv;
        uint32_t qmask = rng() % 16;
        for (size_t i = 0; i < n; ++i)
            if ((qmask >> i) & 1)
                qv.push_back(VarId(i));
        VarSet qs = st.make_var_set(qv);
        Bdd ex = st.exists(a, qs);
        Bdd ae = st.and_exists(a, b, qs);
        for (uint32_t code = 0; code < 16; ++code) {
            bool e1 = false, e2 = false;
            for (uint32_t sub = 0; sub < 16; ++sub) {
                if ((sub & ~qmask) != 0)
                    continue;
                uint32_t c2 = (code & ~qmask) | sub;
                e1 = e1 || ta[c2];
                e2 = e2 || (ta[c2] && tb[c2]);
            }
            CHECK(st.eval(ex, bits(code, n)) == e1);
            CHECK(st.eval(ae, bits(code, n)) == e2);
        }
    }
}

TEST_CASE("rename moves a function to other variables and rejects order violations") {
    DdStore st(VarOrder({0, 2, 1, 3}));  // x0 x0' x1 x1' with primes 2,3
    Bdd f = st.literal(0) & st.literal(1, false);
    Renaming r = st.make_renaming({{0, 2}, {1, 3}});
    Bdd g = st.rename(f, r);
    CHECK(g == (st.literal(2) & st.literal(3, false)));
    Renaming bad = st.make_renaming({{0, 3}, {1, 2}});
    CHECK_THROWS_AS(st.rename(f, bad), DdError);
}

TEST_CASE("pick_state prefers low branches and zero for free bits") {
    DdStore st(VarOrder::identity(3));
    Bdd f = st.literal(0) | st.literal(2);
    Assignment s = st.pick_state(f);
    CHECK(s == Assignment{0, 0, 1});
    CHECK(st.pick_state(st.bdd_true()) == Assignment{0, 0, 0});
    CHECK_THROWS_AS(st.pick_state(st.bdd_false()), DdError);
}

TEST_CASE("restrict cofactors all three flavours") {
    DdStore st(VarOrder::identity(3));
    Bdd f = (st.literal(0) & st.literal(1)) | st.literal(2);
    CHECK(st.restrict(f, st.cube({{0, true}})) == (st.literal(1) | st.literal(2)));
    CHECK(st.restrict(f, st.cube({{0, false}, {2, false}})).is_false());
    Add a = st.add_from_bdd(f, 5, 1);
    CHECK(st.add_restrict(a, st.cube({{2, true}})) == st.add_constant(5));
}

TEST_CASE("arithmetic on EV and ADD matches pointwise evaluation") {
    mt19937 rng(3);
    DdStore st(VarOrder::identity(3));
    auto rnd_vals = [&] {
        vector<Weight> v(8);
        for (auto &w : v) {
            int r = int(rng() % 9);
            w = r == 8 ? Weight::infinity() : Weight(r - 3);
        }
        return v;
    };
    for (int round = 0; round < 200; ++round) {
        auto fv = rnd_vals(), gv = rnd_vals();
        Ev ef = ev_from_values(st, fv, 3), eg = ev_from_values(st, gv, 3);
        Add af = add_from_values(st, fv, 3), ag = add_from_values(st, gv, 3);
        for (ArithOp op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Min, ArithOp::Max}) {
            Ev er = st.ev_apply(op, ef, eg);
            Add ar = st.add_apply(op, af, ag);
            for (uint32_t c = 0; c < 8; ++c) {
                Weight a = fv[c], b = gv[c], expect;
                switch (op) {
                case ArithOp::Add: expect = a + b; break;
                case ArithOp::Sub: expect = a - b; break;
                case ArithOp::Mul: expect = a * b; break;
                case ArithOp::Min: expect = min(a, b); break;
                case ArithOp::Max: expect = max(a, b); break;
                }
                INFO("op ", int(op), " code ", c, " f ", a, " g ", b);
                CHECK(st.eval(er, bits(c, 3)) == expect);
                CHECK(st.eval(ar, bits(c, 3)) == expect);
            }
        }
        // min-abstraction over variable 1
        Ev m = st.ev_min_abstract(ef, st.make_var_set({1}));
        for (uint32_t c = 0; c < 8; ++c) {
            Weight expect = min(fv[c & ~2u], fv[c | 2u]);
            CHECK(st.eval(m, bits(c, 3)) == expect);
        }
        Bdd fin = st.ev_finite(ef);
        for (uint32_t c = 0; c < 8; ++c)
            CHECK(st.eval(fin, bits(c, 3)) == fv[c].is_finite());
    }
    for (auto &v : st.audit())
        MESSAGE(v);
    CHECK(st.audit().empty());
}

TEST_CASE("infinity semantics and overflow") {
    Weight inf = Weight::infinity();
    CHECK((inf + 3).is_infinite());
    CHECK((Weight(3) - inf).is_infinite());
    CHECK((Weight(0) * inf).is_infinite());
    CHECK(min(inf, Weight(4)) == Weight(4));
    CHECK(max(inf, Weight(4)).is_infinite());
    CHECK_THROWS_AS(Weight(INT64_MAX - 1) + Weight(5), std::overflow_error);
    CHECK_THROWS_AS(Weight(INT64_MAX / 2) * Weight(3), std::overflow_error);
}

TEST_CASE("max-on and node limit") {
    DdStore st(VarOrder::identity(2));
    Add f = st.add_from_bdd(st.literal(0), 7, 2);
    CHECK(st.add_max_on(f, st.literal(0, false)) == Weight(2));
    CHECK(st.add_max_on(f, st.bdd_true()) == Weight(7));
    CHECK(!st.add_max_on(f, st.bdd_false()).has_value());

    DdStore small(VarOrder::identity(8));
    small.set_node_limit(10);
    CHECK_THROWS_AS(
        [&] {
            Bdd r = small.bdd_false();
            for (VarId v = 0; v < 8; ++v)
                r = r ^ small.literal(v);
        }(),
        NodeLimitExceeded);
}

TEST_CASE("handles from different stores are rejected") {
    DdStore a(VarOrder::identity(1)), b(VarOrder::identity(1));
    CHECK_THROWS_AS(a.apply(BoolOp::And, a.literal(0), b.literal(0)), DdError);
}

TEST_CASE("dot output names variables") {
    DdStore st(VarOrder::identity(1));
    st.set_var_name(0, "x");
    CHECK(st.to_dot(st.literal(0)).find("\"x\"") != string::npos);
}
