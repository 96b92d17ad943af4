#include "symplan/search/osp.h"

using namespace std;
using namespace symplan::dd;
using namespace symplan::symbolic;

namespace symplan::search {

UtilityRepr parse_utility_repr(const string &s) {
    if (s == "bdd")
        return UtilityRepr::Bdd;
    if (s == "add")
        return UtilityRepr::Add;
    throw invalid_argument("unknown utility representation '" + s + "'");
}

UtilityFunction::UtilityFunction(const SearchSpace &sp, UtilityRepr repr) : sp_(sp), repr_(repr) {
    DdStore &st = sp.store();
    Add u = sp.task().utility ? sp.compile_add(*sp.task().utility) : st.add_constant(Weight(0));
    // states outside valid get infinity so no partition covers them
    add_ = st.add_ite(sp.valid(), u, st.add_constant(Weight::infinity()));
    auto parts = st.partition_terminals(add_);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        levels_.push_back({it->first.value(), it->second});
}

optional<pair<int64_t, Bdd>> UtilityFunction::best_subset(const Bdd &states) const {
    DdStore &st = sp_.store();
    if (repr_ == UtilityRepr::Add) {
        auto m = st.add_max_on(add_, states & sp_.valid());
        if (!m || m->is_infinite())
            return nullopt;
        return pair{m->value(), states & st.add_equals(add_, *m)};
    }
    for (const auto &[u, s] : levels_) {
        Bdd hit = states & s;
        if (!hit.is_false())
            return pair{u, hit};
    }
    return nullopt;
}

size_t UtilityFunction::size() const {
    if (repr_ == UtilityRepr::Add)
        return sp_.store().node_count(add_);
    vector<Bdd> bs;
    for (const auto &l : levels_)
        bs.push_back(l.second);
    return sp_.store().node_count(bs);
}

namespace {

SearchResult run(const SearchSpace &sp, OspOptions opts, optional<int64_t> target) {
    SearchResult r;
    UtilityFunction util(sp, opts.repr);
    optional<Weight> bound;
    if (sp.task().bound)
        bound = Weight(*sp.task().bound) * Weight(sp.options().cost_scale);
    auto top = util.best_subset(sp.goal());
    if (!top) {
        note_peak(sp, r.stats);
        return r;
    }
    int64_t u_max = top->first;
    if (target && *target > u_max)
        return r;
    UcsFrontier f(sp, true, sp.init(), bound);
    optional<int64_t> best;
    while (!f.exhausted()) {
        auto idx = f.pop(r.stats);
        if (!idx)
            continue;
        const Layer &l = f.closed()[*idx];
        auto cand = util.best_subset(l.states & sp.goal());
        if (cand && (!best || cand->first > *best)) {
            best = cand->first;
            r.solved = true;
            r.utility = cand->first;
            r.cost = l.g.value() / sp.options().cost_scale;
            r.plan = trace_back(sp, f.closed(), int(*idx), sp.store().pick_state(cand->second));
            if ((opts.early_exit && *best == u_max) || (target && *best >= *target))
                break;
        }
        f.expand(*idx, r.stats);
    }
    note_peak(sp, r.stats);
    return r;
}

}  // namespace

SearchResult osp_search(const SearchSpace &sp, OspOptions opts) { return run(sp, opts, nullopt); }

bool bounded_utility_check(const SearchSpace &sp, int64_t u, OspOptions opts) {
    SearchResult r = run(sp, opts, u);
    return r.solved && r.utility && *r.utility >= u;
}

}  // namespace symplan::search
