#include "symplan/search/common.h"

#include <algorithm>

using namespace std;
using namespace symplan::dd;
using namespace symplan::symbolic;

namespace symplan::search {

Direction parse_direction(const string &s) {
    if (s == "fwd")
        return Direction::Forward;
    if (s == "bwd")
        return Direction::Backward;
    if (s == "bid")
        return Direction::Bidirectional;
    throw invalid_argument("unknown direction '" + s + "'");
}

string to_string(Direction d) {
    switch (d) {
    case Direction::Forward: return "fwd";
    case Direction::Backward: return "bwd";
    default: return "bid";
    }
}

void note_peak(const SearchSpace &sp, SearchStats &stats) {
    stats.peak_live_nodes = max(stats.peak_live_nodes, sp.store().stats().total());
}

// Greedy walk against the search direction; any neighbour in an earlier
// layer with the matching residual g keeps the walk exact.
vector<int> trace_back(const SearchSpace &sp, const GLayeredList &layers, int idx,
                       const Assignment &start) {
    DdStore &st = sp.store();
    vector<int> ops;
    Assignment s = start;
    while (idx > 0) {
        Weight g = layers[idx].g;
        bool found = false;
        Bdd target = sp.enc().state_cube(s, true);
        for (const TrPart &p : sp.parts()) {
            if (p.cost > g)
                continue;
            Bdd preds = st.and_exists(p.rel, target, sp.enc().primed_set());
            if (preds.is_false())
                continue;
            Weight want = g - p.cost;
            for (int j = idx - 1; j >= 0 && !found; --j) {
                if (layers[j].g != want)
                    continue;
                Bdd cand = preds & layers[j].states;
                if (cand.is_false())
                    continue;
                s = st.pick_state(cand);
                idx = j;
                ops.push_back(p.op);
                found = true;
            }
            if (found)
                break;
        }
        if (!found)
            throw SearchError("plan reconstruction found no predecessor");
    }
    reverse(ops.begin(), ops.end());
    return ops;
}

vector<int> trace_forward(const SearchSpace &sp, const GLayeredList &layers, int idx,
                          const Assignment &start) {
    DdStore &st = sp.store();
    vector<int> ops;
    Assignment s = start;
    while (idx > 0) {
        Weight g = layers[idx].g;
        bool found = false;
        Bdd here = sp.state_bdd(s);
        for (const TrPart &p : sp.parts()) {
            if (p.cost > g)
                continue;
            Bdd succs = sp.image(here, p.rel);
            if (succs.is_false())
                continue;
            Weight want = g - p.cost;
            for (int j = idx - 1; j >= 0 && !found; --j) {
                if (layers[j].g != want)
                    continue;
                Bdd cand = succs & layers[j].states;
                if (cand.is_false())
                    continue;
                s = st.pick_state(cand);
                idx = j;
                ops.push_back(p.op);
                found = true;
            }
            if (found)
                break;
        }
        if (!found)
            throw SearchError("plan reconstruction found no successor");
    }
    return ops;
}

UcsFrontier::UcsFrontier(const SearchSpace &sp, bool forward, const Bdd &origin,
                         optional<Weight> bound)
    : sp_(sp), forward_(forward), origin_(origin), bound_(bound) {
    closed_all_ = sp.store().bdd_false();
    if (!origin.is_false())
        open_[Weight(0)] = origin;
}

size_t UcsFrontier::frontier_size() const {
    return open_.empty() ? 0 : sp_.store().node_count(open_.begin()->second);
}

optional<size_t> UcsFrontier::pop(SearchStats &stats) {
    auto it = open_.begin();
    Weight g = it->first;
    Bdd s = it->second & ~closed_all_;
    open_.erase(it);
    if (s.is_false())
        return nullopt;
    closed_.push_back({g, s});
    closed_all_ |= s;
    ++stats.expansions;
    stats.expansion_size += sp_.store().node_count(s);
    return closed_.size() - 1;
}

vector<UcsFrontier::Generated> UcsFrontier::expand(size_t idx, SearchStats &stats) {
    Stopwatch sw;
    vector<Generated> out;
    const Layer layer = closed_[idx];
    for (const TransitionRelation &t : sp_.trs()) {
        Weight ng = layer.g + t.cost;
        if (bound_ && ng > *bound_)
            continue;
        Bdd n = forward_ ? sp_.image(layer.states, t.rel) : sp_.preimage(layer.states, t.rel);
        n &= ~closed_all_;
        if (n.is_false())
            continue;
        auto [it, inserted] = open_.try_emplace(ng, n);
        if (!inserted)
            it->second |= n;
        out.push_back({ng, t.cost, n});
    }
    stats.image_time_ms += sw.ms();
    note_peak(sp_, stats);
    return out;
}

}  // namespace symplan::search
