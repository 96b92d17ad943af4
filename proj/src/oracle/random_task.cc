#include "symplan/oracle/oracle.h"

#include "symplan/axioms/evaluate.h"

#include <algorithm>
#include <random>
#include <set>

using namespace std;
using namespace symplan::task;

namespace symplan::oracle {

namespace {

class Gen {
    mt19937_64 rng_;

public:
    explicit Gen(uint64_t seed) : rng_(seed) {}
    int range(int lo, int hi) { return uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return uniform_real_distribution<double>(0, 1)(rng_) < p; }
    template <class T>
    const T &pick(const vector<T> &v) { return v[size_t(range(0, int(v.size()) - 1))]; }
};

// Random non-negative term over the given variables.
Expr random_expr(Gen &g, const vector<int> &vars, int depth) {
    if (depth <= 1 || g.chance(0.3)) {
        if (!vars.empty() && g.chance(0.6))
            return Expr::variable(g.pick(vars));
        return Expr::constant(g.range(0, 3));
    }
    switch (g.range(0, 2)) {
    case 0:
        return Expr::binary(Expr::Kind::Add, random_expr(g, vars, depth - 1),
                            random_expr(g, vars, depth - 1));
    case 1:
        return Expr::binary(Expr::Kind::Mul, random_expr(g, vars, depth - 1),
                            random_expr(g, vars, depth - 1));
    default:
        return Expr::abs(Expr::binary(Expr::Kind::Sub, random_expr(g, vars, depth - 2),
                                      random_expr(g, vars, depth - 2)));
    }
}

PartialAssignment random_facts(Gen &g, const Task &t, const vector<int> &pool, int n) {
    set<int> used;
    PartialAssignment pa;
    for (int i = 0; i < n && !pool.empty(); ++i) {
        int v = g.pick(pool);
        if (!used.insert(v).second)
            continue;
        pa.push_back({v, g.range(0, t.vars[v].domain - 1)});
    }
    sort(pa.begin(), pa.end());
    return pa;
}

}  // namespace

Profile parse_profile(const string &s) {
    if (s == "plain") return Profile::Plain;
    if (s == "axioms") return Profile::Axioms;
    if (s == "sdac") return Profile::Sdac;
    if (s == "osp") return Profile::Osp;
    throw invalid_argument("unknown profile '" + s + "'");
}

GeneratedTask random_task(uint64_t seed, Profile profile) {
    Gen g(seed * 0x9e3779b97f4a7c15ULL + uint64_t(profile) + 1);
    GeneratedTask out;
    Task &t = out.task;
    t.metric = Metric::General;

    int nprimary = profile == Profile::Axioms ? g.range(2, 5) : g.range(2, 6);
    for (int i = 0; i < nprimary; ++i) {
        int dom = g.chance(0.05) ? 1 : g.range(2, 3);
        t.vars.push_back({"v" + to_string(i), dom, false, 0});
    }
    if (profile == Profile::Axioms) {
        int nderived = g.range(1, min(3, 8 - nprimary));
        int layers = g.range(1, 2);
        for (int i = 0; i < nderived; ++i)
            t.vars.push_back({"d" + to_string(i), 2, true, min(layers, 1 + i * layers / nderived)});
    }
    vector<int> all, primary;
    for (size_t i = 0; i < t.vars.size(); ++i) {
        all.push_back(int(i));
        if (!t.vars[i].derived)
            primary.push_back(int(i));
    }
    for (const Variable &v : t.vars)
        t.init.push_back(v.derived ? 0 : g.range(0, v.domain - 1));

    if (profile == Profile::Axioms) {
        int nrules = g.range(1, 6);
        vector<int> derived = t.derived_vars();
        for (int r = 0; r < nrules; ++r) {
            Axiom a;
            a.head = g.pick(derived);
            int hl = t.vars[a.head].layer;
            int nbody = g.range(1, 2);
            set<int> used;
            for (int b = 0; b < nbody; ++b) {
                int v = g.pick(all);
                if (v == a.head || !used.insert(v).second)
                    continue;
                const Variable &var = t.vars[v];
                if (var.derived) {
                    if (var.layer > hl)
                        continue;
                    bool negated = var.layer < hl && g.chance(0.4);
                    a.body.push_back({v, negated ? 0 : 1});
                } else {
                    a.body.push_back({v, g.range(0, var.domain - 1)});
                }
            }
            sort(a.body.begin(), a.body.end());
            t.axioms.push_back(a);
        }
    }

    int nops = g.range(1, 12);
    for (int o = 0; o < nops; ++o) {
        Operator op;
        op.name = "op" + to_string(o);
        op.pre = random_facts(g, t, all, g.range(0, 2));
        op.eff = random_facts(g, t, primary, g.range(1, 2));
        if (profile == Profile::Sdac && g.chance(0.7)) {
            vector<int> cost_vars = primary;
            op.cost = random_expr(g, cost_vars, g.range(1, 3));
        } else {
            op.cost = Expr::constant(g.chance(0.15) ? 0 : g.range(1, 4));
        }
        t.ops.push_back(std::move(op));
    }

    if (profile == Profile::Osp) {
        if (g.chance(0.5))
            t.goal = random_facts(g, t, all, 1);
        t.utility = random_expr(g, primary, g.range(1, 3));
        // Bound from a random walk, scaled by a quartile.
        vector<int> s = t.init;
        int64_t cost = 0;
        int steps = g.range(1, 6);
        for (int i = 0; i < steps; ++i) {
            vector<int> ext = axioms::evaluate_axioms(t, s);
            vector<int> app;
            for (size_t o = 0; o < t.ops.size(); ++o)
                if (satisfies(ext, t.ops[o].pre))
                    app.push_back(int(o));
            if (app.empty())
                break;
            int o = g.pick(app);
            cost += operator_cost(t, o, ext);
            s = apply_operator(t, s, o, ext);
        }
        out.sampled_cost = cost;
        out.quartile = g.range(1, 4);
        t.bound = cost * out.quartile / 4;
    } else {
        t.goal = random_facts(g, t, all, g.range(1, 3));
        if (g.chance(0.2))
            t.bound = g.range(0, 8);
    }
    validate(t);
    return out;
}

}  // namespace symplan::oracle
