#include "symplan/search/astar.h"

#include <numeric>

using namespace std;
using namespace symplan::dd;
using namespace symplan::symbolic;
using namespace symplan::task;

namespace symplan::search {

HeuristicBuckets blind_heuristic(const SearchSpace &sp) { return {{{Weight(0), sp.valid()}}}; }

HeuristicBuckets perfect_heuristic(const SearchSpace &sp) {
    SearchStats stats;
    UcsFrontier f(sp, false, sp.goal(), nullopt);
    while (!f.exhausted())
        if (auto idx = f.pop(stats))
            f.expand(*idx, stats);
    map<Weight, Bdd> by_h;
    for (const Layer &l : f.closed()) {
        auto [it, inserted] = by_h.try_emplace(l.g, l.states);
        if (!inserted)
            it->second |= l.states;
    }
    HeuristicBuckets h;
    for (auto &[v, s] : by_h)
        h.buckets.push_back({v, s});
    Bdd dead = sp.valid() & ~f.closed_all();
    if (!dead.is_false())
        h.buckets.push_back({Weight::infinity(), dead});
    return h;
}

HeuristicBuckets scale_heuristic(const HeuristicBuckets &h, int64_t num, int64_t den) {
    HeuristicBuckets out;
    map<Weight, size_t> where;
    for (const auto &[v, s] : h.buckets) {
        Weight nv = v;
        if (v.is_finite()) {
            int64_t x = v.value() * num;
            if (x % den != 0)
                throw invalid_argument("heuristic value not divisible by the scale denominator");
            nv = Weight(x / den);
        }
        auto it = where.find(nv);
        if (it == where.end()) {
            where[nv] = out.buckets.size();
            out.buckets.push_back({nv, s});
        } else {
            out.buckets[it->second].second |= s;
        }
    }
    return out;
}

vector<string> audit_heuristic(const SearchSpace &sp, const HeuristicBuckets &h) {
    vector<string> issues;
    DdStore &st = sp.store();
    Bdd seen = st.bdd_false();
    for (const auto &[v, s] : h.buckets) {
        if (!(seen & s).is_false())
            issues.push_back("buckets overlap at h = " + v.to_string());
        seen |= s;
        if (v != Weight(0) && !(s & sp.goal()).is_false())
            issues.push_back("goal state with h = " + v.to_string());
    }
    if (!(sp.valid() & ~seen).is_false())
        issues.push_back("buckets do not cover every state");
    // h(s) <= c + h(s') for every transition s -> s' of cost c
    for (const TransitionRelation &t : sp.trs()) {
        for (const auto &[h2, s2] : h.buckets) {
            if (h2.is_infinite())
                continue;
            Bdd pre = sp.preimage(s2, t.rel);
            if (pre.is_false())
                continue;
            for (const auto &[h1, s1] : h.buckets)
                if (h1 > h2 + t.cost && !(pre & s1).is_false())
                    issues.push_back("inconsistent: h = " + h1.to_string() + " reaches h = " +
                                     h2.to_string() + " at cost " + t.cost.to_string());
        }
    }
    return issues;
}

AstarResult bdda_star(const SearchSpace &sp, const HeuristicBuckets &h, bool audit) {
    if (audit) {
        auto issues = audit_heuristic(sp, h);
        if (!issues.empty())
            throw InconsistentHeuristic(issues.front());
    }
    DdStore &st = sp.store();
    AstarResult r;
    optional<Weight> bound;
    if (sp.task().bound)
        bound = Weight(*sp.task().bound) * Weight(sp.options().cost_scale);
    map<pair<Weight, Weight>, Bdd> open;  // (f, g)
    auto insert = [&](Weight g, const Bdd &set) {
        for (const auto &[hv, hs] : h.buckets) {
            if (hv.is_infinite())
                continue;
            Bdd part = set & hs;
            if (part.is_false())
                continue;
            Weight f = g + hv;
            if (bound && f > *bound)
                continue;
            auto [it, inserted] = open.try_emplace({f, g}, part);
            if (!inserted)
                it->second |= part;
        }
    };
    insert(Weight(0), sp.init());
    GLayeredList closed;
    Bdd closed_all = st.bdd_false();
    map<Weight, Bdd> per_f;
    while (!open.empty()) {
        auto it = open.begin();
        auto [f, g] = it->first;
        Bdd s = it->second & ~closed_all;
        open.erase(it);
        if (s.is_false())
            continue;
        closed.push_back({g, s});
        closed_all |= s;
        ++r.stats.expansions;
        r.stats.expansion_size += st.node_count(s);
        r.trace.push_back({g.value(), (f - g).value()});
        auto [pf, inserted] = per_f.try_emplace(f, s);
        if (!inserted)
            pf->second |= s;
        Bdd hit = s & sp.goal();
        if (!hit.is_false()) {
            r.plan = trace_back(sp, closed, int(closed.size()) - 1, st.pick_state(hit));
            r.solved = true;
            r.cost = g.value() / sp.options().cost_scale;
            break;
        }
        Stopwatch sw;
        for (const TransitionRelation &t : sp.trs()) {
            Bdd n = sp.image(s, t.rel) & ~closed_all;
            if (!n.is_false())
                insert(g + t.cost, n);
        }
        r.stats.image_time_ms += sw.ms();
        note_peak(sp, r.stats);
    }
    for (auto &[f, s] : per_f)
        r.expansion_size_f_ordered += st.node_count(s);
    note_peak(sp, r.stats);
    return r;
}

HeuristicSpec parse_heuristic(const string &s) {
    HeuristicSpec h;
    if (s == "blind")
        return h;
    if (s == "perfect") {
        h.kind = HeuristicSpec::Kind::Perfect;
        return h;
    }
    const string prefix = "fraction:";
    if (s.rfind(prefix, 0) == 0) {
        string rest = s.substr(prefix.size());
        auto slash = rest.find('/');
        if (slash == string::npos)
            throw invalid_argument("fraction heuristic needs P/Q");
        h.kind = HeuristicSpec::Kind::Fraction;
        h.num = stoll(rest.substr(0, slash));
        h.den = stoll(rest.substr(slash + 1));
        if (h.den <= 0 || h.num < 0 || h.num > h.den)
            throw invalid_argument("fraction must satisfy 0 <= P/Q <= 1");
        return h;
    }
    throw invalid_argument("unknown heuristic '" + s + "'");
}

AstarResult run_astar(const Task &t, const HeuristicSpec &spec, SpaceOptions opts, bool audit) {
    int64_t den = spec.kind == HeuristicSpec::Kind::Fraction ? spec.den : 1;
    int64_t num = spec.kind == HeuristicSpec::Kind::Fraction ? spec.num : 1;
    if (den > 1) {
        int64_t g = gcd(num, den);
        num /= g;
        den /= g;
    }
    opts.cost_scale = den;
    SearchSpace sp(t, opts);
    HeuristicBuckets h;
    if (spec.kind == HeuristicSpec::Kind::Blind || num == 0)
        h = blind_heuristic(sp);
    else
        h = scale_heuristic(perfect_heuristic(sp), num, den);
    return bdda_star(sp, h, audit);
}

Task blowup_family(int n, int m) {
    if (n < 1)
        throw invalid_argument("blowup family needs n >= 1");
    if (m < 0)
        m = 2 * n;
    Task t;
    t.metric = Metric::General;
    int last = 2 * n + m;
    t.vars.push_back({"done", 2, false, 0});
    t.vars.push_back({"counter", last + 1, false, 0});
    for (int i = 1; i <= 2 * n; ++i)
        t.vars.push_back({"v" + std::to_string(i), 2, false, 0});
    t.init.assign(t.vars.size(), 0);
    auto v = [](int i) { return 1 + i; };  // index of v_i
    for (int j = 0; j < 2 * n; ++j)
        for (int b = 0; b < 2; ++b)
            t.ops.push_back({"set-" + std::to_string(j + 1) + "-" + std::to_string(b),
                             {{1, j}},
                             {{1, j + 1}, {v(j + 1), b}},
                             Expr::constant(1)});
    for (int i = 0; i < m; ++i)
        t.ops.push_back({"wait-" + std::to_string(i + 1), {{1, 2 * n + i}}, {{1, 2 * n + i + 1}},
                         Expr::constant(1)});
    PartialAssignment reset{{0, 1}};
    for (int i = 1; i <= 2 * n; ++i)
        reset.push_back({v(i), 0});
    for (int i = 1; i <= n; ++i) {
        PartialAssignment pre{{0, 0}, {1, last}, {v(i), 1}, {v(n + i), 1}};
        t.ops.push_back({"finish-" + std::to_string(i), pre, reset, Expr::constant(1)});
    }
    t.ops.push_back({"slow", {{0, 0}, {1, last}}, reset, Expr::constant(2)});
    t.goal = {{0, 1}};
    validate(t);
    return t;
}

}  // namespace symplan::search
