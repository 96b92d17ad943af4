#include "symplan/search/topk.h"

#include <algorithm>
#include <functional>

using namespace std;
using namespace symplan::dd;
using namespace symplan::symbolic;

namespace symplan::search {

namespace {

// Dense layers of states at exact cost g from the origin, restricted to
// states that matter for plans.
class Side {
public:
    Side(const SearchSpace &sp, bool forward, Bdd origin, Bdd keep, bool closing, int64_t cmax)
        : sp_(sp), forward_(forward), origin_(origin), keep_(keep), closing_(closing), cmax_(cmax),
          seen_(sp.store().bdd_false()) {}

    int64_t top() const { return int64_t(layers_.size()) - 1; }
    bool exhausted() const { return exhausted_; }
    bool forward() const { return forward_; }
    Bdd layer(int64_t g) const {
        return g >= 0 && g < int64_t(layers_.size()) ? layers_[g] : sp_.store().bdd_false();
    }
    size_t frontier_size() const {
        return layers_.empty() ? 0 : sp_.store().node_count(layers_.back());
    }
    Bdd step(const Bdd &s, const Bdd &rel) const {
        return forward_ ? sp_.image(s, rel) : sp_.preimage(s, rel);
    }

    void grow(SearchStats &stats) {
        Stopwatch sw;
        Bdd next = sp_.store().bdd_false();
        int64_t g = int64_t(layers_.size());
        if (g == 0) {
            next = origin_;
        } else {
            for (const TransitionRelation &t : sp_.trs()) {
                int64_t c = t.cost.value();
                if (c > 0 && c <= g && !layers_[g - c].is_false())
                    next |= step(layers_[g - c], t.rel);
            }
        }
        next = zero_close(next & keep_);
        if (closing_) {
            next &= ~seen_;
            seen_ |= next;
        }
        stats.image_time_ms += sw.ms();
        layers_.push_back(next);
        ++stats.expansions;
        stats.expansion_size += sp_.store().node_count(next);
        note_peak(sp_, stats);
        if (int64_t(layers_.size()) >= cmax_) {
            bool empty = true;
            for (int64_t j = g; j > g - cmax_ && empty; --j)
                empty = layers_[j].is_false();
            exhausted_ = empty;
        }
    }

private:
    Bdd zero_close(Bdd s) const {
        Bdd frontier = s;
        while (!frontier.is_false()) {
            Bdd n = sp_.store().bdd_false();
            for (const TransitionRelation &t : sp_.trs())
                if (t.cost == Weight(0))
                    n |= step(frontier, t.rel);
            n = n & keep_ & ~s;
            s |= n;
            frontier = n;
        }
        return s;
    }

    const SearchSpace &sp_;
    bool forward_;
    Bdd origin_, keep_;
    bool closing_;
    int64_t cmax_;
    Bdd seen_;
    vector<Bdd> layers_;
    bool exhausted_ = false;
};

using Sink = function<bool(const vector<int> &ops, int maxrun)>;  // false = stop

// Explicit path enumeration inside the layers, limiting runs of zero-cost
// operators to z. cut records whether the limit pruned anything.
class Walker {
public:
    Walker(const SearchSpace &sp, Bdd init, Bdd goal) : sp_(sp), init_(init), goal_(goal) {}

    int z = 0;
    bool cut = false;
    // throw on a zero-cost cycle instead of walking it
    bool refuse_cycles = false;

    // paths from the initial state to s of cost g through F's layers
    bool prefixes(const Side &f, const Assignment &s, int64_t g, const Sink &out) {
        vector<int> rev;
        run_ = {s};
        return walk(f, s, g, 0, 0, rev, out);
    }
    // paths from s of cost g to a goal state through B's layers
    bool suffixes(const Side &b, const Assignment &s, int64_t g, const Sink &out) {
        vector<int> ops;
        run_ = {s};
        return walk(b, s, g, 0, 0, ops, out);
    }

private:
    bool walk(const Side &side, const Assignment &s, int64_t g, int run, int maxrun, vector<int> &ops,
              const Sink &out) {
        Bdd here = sp_.state_bdd(s);
        if (g == 0 && !(here & (side.forward() ? init_ : goal_)).is_false()) {
            vector<int> plan = ops;
            if (side.forward())
                reverse(plan.begin(), plan.end());
            if (!out(plan, maxrun))
                return false;
        }
        for (const TrPart &p : sp_.parts()) {
            int64_t c = p.cost.value();
            if (c > g)
                continue;
            Bdd next = (side.forward() ? sp_.preimage(here, p.rel) : sp_.image(here, p.rel)) &
                       side.layer(g - c);
            if (next.is_false())
                continue;
            int nrun = c == 0 ? run + 1 : 0;
            if (nrun > z) {
                cut = true;
                continue;
            }
            for (const Assignment &n : sp_.enumerate(next)) {
                // states of the current zero-cost run
                vector<Assignment> saved;
                if (c == 0) {
                    if (refuse_cycles && find(run_.begin(), run_.end(), n) != run_.end())
                        throw TopkUnbounded("infinitely many plans: a zero-cost cycle lies on plan paths");
                    run_.push_back(n);
                } else {
                    saved.swap(run_);
                    run_ = {n};
                }
                ops.push_back(p.op);
                bool go = walk(side, n, g - c, nrun, max(maxrun, nrun), ops, out);
                ops.pop_back();
                if (c == 0)
                    run_.pop_back();
                else
                    run_.swap(saved);
                if (!go)
                    return false;
            }
        }
        return true;
    }

    const SearchSpace &sp_;
    Bdd init_, goal_;
    vector<Assignment> run_;
};

}  // namespace

TopkResult topk_search(const SearchSpace &sp, TopkOptions opts, optional<Bdd> goal_override) {
    if (opts.dir != Direction::Forward && sp.has_derived_bits())
        throw SearchError("backward and bidirectional search need the translate axiom encoding");
    TopkResult r;
    if (opts.k == 0)
        return r;
    DdStore &st = sp.store();
    Bdd goal = goal_override ? *goal_override & sp.valid() : sp.goal();
    optional<int64_t> bound;
    if (sp.task().bound)
        bound = *sp.task().bound * sp.options().cost_scale;
    int64_t cmax = 1;
    for (const TransitionRelation &t : sp.trs())
        cmax = max(cmax, t.cost.value());

    Bdd reach = sp.forward_closure(sp.init());
    Bdd coreach = sp.backward_closure(goal);
    if ((sp.init() & coreach).is_false())
        return r;
    long double num_states = sp.count(reach);
    Side fw(sp, true, sp.init(), coreach, opts.closing, cmax);
    Side bw(sp, false, goal & reach, reach, opts.closing, cmax);
    Walker walker(sp, sp.init(), goal);
    Assignment init_state = st.pick_state(sp.init());
    bool want_all = opts.k == kAllPlans;
    walker.refuse_cycles = want_all;

    auto grow = [&](Side &s) {
        s.grow(r.stats);
        // a nonempty layer beyond this cost needs a cycle inside plan paths
        if (want_all && !bound && !s.exhausted() && !s.layer(s.top()).is_false() &&
            (long double)s.top() > num_states * (long double)cmax)
            throw TopkUnbounded("infinitely many plans: a positive-cost cycle lies on plan paths");
    };

    bool done = false;
    for (int64_t c = 0; !done; ++c) {
        if (bound && c > *bound)
            break;
        // pick the case for cost c, growing layers as needed
        enum { ByPrefix, BySuffix, BySplit } how;
        if (opts.dir == Direction::Forward) {
            while (fw.top() < c && !fw.exhausted())
                grow(fw);
            if (c > fw.top())
                break;
            how = ByPrefix;
        } else if (opts.dir == Direction::Backward) {
            while (bw.top() < c && !bw.exhausted())
                grow(bw);
            if (c > bw.top())
                break;
            how = BySuffix;
        } else {
            if (fw.top() < 0)
                grow(fw);
            if (bw.top() < 0)
                grow(bw);
            while (true) {
                if ((fw.exhausted() && c > fw.top()) || (bw.exhausted() && c > bw.top())) {
                    done = true;
                    break;
                }
                if (c <= fw.top() || c <= fw.top() + bw.top())
                    break;
                bool forward = !fw.exhausted() &&
                               (bw.exhausted() || fw.frontier_size() <= bw.frontier_size());
                grow(forward ? fw : bw);
            }
            if (done)
                break;
            how = c <= fw.top() ? ByPrefix : BySplit;
        }

        const int64_t scale = sp.options().cost_scale;
        auto emit = [&](const vector<int> &ops) {
            r.plans.push_back({ops, c / scale, nullopt});
            return r.plans.size() < opts.k;
        };
        for (walker.z = 0;; ++walker.z) {
            walker.cut = false;
            int z = walker.z;
            auto exact = [&](const vector<int> &ops, int maxrun) { return maxrun != z || emit(ops); };
            bool go = true;
            if (how == ByPrefix) {
                for (const Assignment &x : sp.enumerate(fw.layer(c) & goal))
                    if (!(go = walker.prefixes(fw, x, c, exact)))
                        break;
            } else if (how == BySuffix) {
                if (!(bw.layer(c) & sp.init()).is_false())
                    go = walker.suffixes(bw, init_state, c, exact);
            } else {
                // every plan crosses from cost <= top_f to beyond it exactly once
                int64_t gf = fw.top();
                for (int64_t p = 0; p <= gf && go; ++p) {
                    if (fw.layer(p).is_false())
                        continue;
                    for (const TrPart &part : sp.parts()) {
                        int64_t pc = part.cost.value();
                        int64_t rest = c - p - pc;
                        if (pc == 0 || p + pc <= gf || rest < 0 || rest > bw.top())
                            continue;
                        Bdd mid = fw.layer(p) & sp.preimage(bw.layer(rest), part.rel);
                        for (const Assignment &x : sp.enumerate(mid)) {
                            vector<pair<vector<int>, int>> pre;
                            walker.prefixes(fw, x, p, [&](const vector<int> &ops, int m) {
                                pre.push_back({ops, m});
                                return true;
                            });
                            Bdd after = sp.image(sp.state_bdd(x), part.rel) & bw.layer(rest);
                            for (const Assignment &y : sp.enumerate(after)) {
                                go = walker.suffixes(bw, y, rest, [&](const vector<int> &ops, int m) {
                                    for (const auto &[head, hm] : pre) {
                                        if (max(hm, m) != z)
                                            continue;
                                        vector<int> plan = head;
                                        plan.push_back(part.op);
                                        plan.insert(plan.end(), ops.begin(), ops.end());
                                        if (!emit(plan))
                                            return false;
                                    }
                                    return true;
                                });
                                if (!go)
                                    break;
                            }
                            if (!go)
                                break;
                        }
                        if (!go)
                            break;
                    }
                }
            }
            if (!go) {
                done = true;
                break;
            }
            if (!walker.cut)
                break;
            if ((long double)walker.z > num_states && want_all)
                throw TopkUnbounded("infinitely many plans: a zero-cost cycle lies on plan paths");
        }
    }
    note_peak(sp, r.stats);
    return r;
}

TopkResult topk_osp_search(const SearchSpace &sp, size_t k, UtilityRepr repr) {
    TopkResult r;
    UtilityFunction util(sp, repr);
    Bdd reach = sp.forward_closure(sp.init());
    for (const auto &[u, states] : util.levels()) {
        if (r.plans.size() >= k)
            break;
        Bdd target = states & sp.goal() & reach;
        if (target.is_false())
            continue;
        size_t want = k == kAllPlans ? kAllPlans : k - r.plans.size();
        TopkResult part = topk_search(sp, {want, Direction::Forward, false}, target);
        for (TopkPlan &p : part.plans) {
            p.utility = u;
            r.plans.push_back(std::move(p));
        }
        r.stats.expansions += part.stats.expansions;
        r.stats.expansion_size += part.stats.expansion_size;
        r.stats.image_time_ms += part.stats.image_time_ms;
        r.stats.peak_live_nodes = max(r.stats.peak_live_nodes, part.stats.peak_live_nodes);
    }
    return r;
}

}  // namespace symplan::search
