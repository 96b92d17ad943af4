#include "symplan/search/ucs.h"

using namespace std;
using namespace symplan::dd;
using namespace symplan::symbolic;

namespace symplan::search {

namespace {

optional<Weight> bound_of(const SearchSpace &sp) {
    if (!sp.task().bound)
        return nullopt;
    return Weight(*sp.task().bound) * Weight(sp.options().cost_scale);
}

SearchResult unidirectional(const SearchSpace &sp, bool forward) {
    SearchResult r;
    UcsFrontier f(sp, forward, forward ? sp.init() : sp.goal(), bound_of(sp));
    Bdd target = forward ? sp.goal() : sp.init();
    while (!f.exhausted()) {
        auto idx = f.pop(r.stats);
        if (!idx)
            continue;
        const Layer &l = f.closed()[*idx];
        Bdd hit = l.states & target;
        if (!hit.is_false()) {
            Assignment s = sp.store().pick_state(hit);
            r.plan = forward ? trace_back(sp, f.closed(), int(*idx), s)
                             : trace_forward(sp, f.closed(), int(*idx), s);
            r.solved = true;
            r.cost = l.g.value() / sp.options().cost_scale;
            break;
        }
        f.expand(*idx, r.stats);
    }
    note_peak(sp, r.stats);
    return r;
}

struct Meeting {
    Weight cost = Weight::infinity();
    bool forward_expanding = true;
    int own_layer = -1;    // layer of the expanding side (or -1: origin)
    int other_layer = -1;  // closed layer on the other side (-1: its origin)
    optional<Weight> edge; // set when the meeting is on a generated set
    Bdd states;
};

// Layers of the other side a set can meet: its closed layers, or its
// origin before the first expansion.
void check_meeting(const UcsFrontier &other, const Bdd &set, Weight g,
                   optional<Weight> bound, Meeting &best, bool forward_expanding, int own_layer,
                   optional<Weight> edge) {
    auto consider = [&](int other_idx, Weight og, const Bdd &states) {
        Bdd m = set & states;
        if (m.is_false())
            return;
        Weight c = g + og;
        if (bound && c > *bound)
            return;
        if (c < best.cost)
            best = {c, forward_expanding, own_layer, other_idx, edge, m};
    };
    if (other.closed().empty()) {
        consider(-1, Weight(0), other.origin());
        return;
    }
    if ((set & other.closed_all()).is_false())
        return;
    const GLayeredList &layers = other.closed();
    for (size_t j = 0; j < layers.size(); ++j)
        consider(int(j), layers[j].g, layers[j].states);
}

SearchResult bidirectional(const SearchSpace &sp) {
    SearchResult r;
    optional<Weight> bound = bound_of(sp);
    UcsFrontier fw(sp, true, sp.init(), bound);
    UcsFrontier bw(sp, false, sp.goal(), bound);
    Meeting best;
    while (!fw.exhausted() && !bw.exhausted()) {
        Weight lower = fw.top() + bw.top();
        if (best.cost <= lower || (bound && lower > *bound))
            break;
        bool forward = fw.frontier_size() <= bw.frontier_size();
        UcsFrontier &me = forward ? fw : bw;
        UcsFrontier &other = forward ? bw : fw;
        auto idx = me.pop(r.stats);
        if (!idx)
            continue;
        Layer l = me.closed()[*idx];
        check_meeting(other, l.states, l.g, bound, best, forward, int(*idx), nullopt);
        for (const auto &gen : me.expand(*idx, r.stats))
            check_meeting(other, gen.states, gen.g, bound, best, forward, int(*idx), gen.cost);
    }
    note_peak(sp, r.stats);
    if (best.cost.is_infinite())
        return r;

    DdStore &st = sp.store();
    Assignment m = st.pick_state(best.states);
    // fw_state sits in fw layer fi, bw_state in bw layer bi
    Assignment fw_state, bw_state;
    int fi, bi;
    vector<int> middle;
    if (!best.edge) {
        fw_state = bw_state = m;
        fi = best.forward_expanding ? best.own_layer : best.other_layer;
        bi = best.forward_expanding ? best.other_layer : best.own_layer;
    } else {
        // find the relation step between the expanded layer and m
        const UcsFrontier &me = best.forward_expanding ? fw : bw;
        const Layer &l = me.closed()[best.own_layer];
        bool done = false;
        for (const TrPart &p : sp.parts()) {
            if (p.cost != *best.edge)
                continue;
            Bdd cand;
            if (best.forward_expanding)
                cand = st.and_exists(p.rel, sp.enc().state_cube(m, true), sp.enc().primed_set()) & l.states;
            else
                cand = sp.image(sp.state_bdd(m), p.rel) & l.states;
            if (cand.is_false())
                continue;
            Assignment n = st.pick_state(cand);
            if (best.forward_expanding) {
                fw_state = n;
                bw_state = m;
                fi = best.own_layer;
                bi = best.other_layer;
            } else {
                fw_state = m;
                bw_state = n;
                fi = best.other_layer;
                bi = best.own_layer;
            }
            middle.push_back(p.op);
            done = true;
            break;
        }
        if (!done)
            throw SearchError("meeting step not found");
    }
    r.plan = trace_back(sp, fw.closed(), fi, fw_state);
    r.plan.insert(r.plan.end(), middle.begin(), middle.end());
    auto tail = trace_forward(sp, bw.closed(), bi, bw_state);
    r.plan.insert(r.plan.end(), tail.begin(), tail.end());
    r.solved = true;
    r.cost = best.cost.value() / sp.options().cost_scale;
    return r;
}

}  // namespace

SearchResult uniform_cost_search(const SearchSpace &sp, Direction dir) {
    if (dir != Direction::Forward && sp.has_derived_bits())
        throw SearchError("backward and bidirectional search need the translate axiom encoding");
    switch (dir) {
    case Direction::Forward: return unidirectional(sp, true);
    case Direction::Backward: return unidirectional(sp, false);
    default: return bidirectional(sp);
    }
}

SearchResult ev_search(const SearchSpace &sp) {
    if (sp.has_derived_bits())
        throw SearchError("edge-valued search needs the translate axiom encoding");
    DdStore &st = sp.store();
    SearchResult r;
    optional<Weight> bound = bound_of(sp);
    Ev tr = st.ev_constant(Weight::infinity());
    for (const Ev &e : sp.ev_trs())
        tr = min(tr, e);
    Ev open = st.ev_from_bdd(sp.init(), Weight(0));
    GLayeredList layers;
    Bdd closed = st.bdd_false();
    while (!open.offset().is_infinite()) {
        Weight g = open.offset();
        if (bound && g > *bound)
            break;
        Bdd layer = st.ev_equals(open, g) & ~closed;
        if (layer.is_false())
            throw SearchError("edge-valued open list lost its minimum");
        open = st.ev_mask(open, ~layer);
        layers.push_back({g, layer});
        closed |= layer;
        ++r.stats.expansions;
        r.stats.expansion_size += st.node_count(layer);
        Bdd hit = layer & sp.goal();
        if (!hit.is_false()) {
            // walk back through the per-operator cost functions
            Assignment s = st.pick_state(hit);
            int idx = int(layers.size()) - 1;
            while (idx > 0) {
                bool found = false;
                Bdd target = sp.enc().state_cube(s, true);
                for (size_t o = 0; o < sp.ev_trs().size() && !found; ++o) {
                    Ev into = st.ev_restrict(sp.ev_trs()[o], target);
                    for (int j = idx - 1; j >= 0 && !found; --j) {
                        Weight need = layers[idx].g - layers[j].g;
                        Bdd cand = layers[j].states & st.ev_equals(into, need);
                        if (cand.is_false())
                            continue;
                        s = st.pick_state(cand);
                        idx = j;
                        r.plan.push_back(int(o));
                        found = true;
                    }
                }
                if (!found)
                    throw SearchError("edge-valued reconstruction found no predecessor");
            }
            reverse(r.plan.begin(), r.plan.end());
            r.solved = true;
            r.cost = g.value() / sp.options().cost_scale;
            break;
        }
        Stopwatch sw;
        Ev succ = sp.ev_image(st.ev_from_bdd(layer, g), tr);
        open = min(open, st.ev_mask(succ, ~closed));
        r.stats.image_time_ms += sw.ms();
        note_peak(sp, r.stats);
    }
    note_peak(sp, r.stats);
    return r;
}

}  // namespace symplan::search
