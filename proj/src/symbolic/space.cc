#include "symplan/symbolic/space.h"

#include <algorithm>
#include <stdexcept>

using namespace std;
using namespace symplan::dd;
using namespace symplan::task;

namespace symplan::symbolic {

AxiomMode parse_axiom_mode(const string &s) {
    if (s == "o-based")
        return AxiomMode::OBased;
    if (s == "v-based")
        return AxiomMode::VBased;
    if (s == "translate")
        return AxiomMode::Translate;
    throw invalid_argument("unknown axiom encoding '" + s + "'");
}

string to_string(AxiomMode m) {
    switch (m) {
    case AxiomMode::OBased: return "o-based";
    case AxiomMode::VBased: return "v-based";
    default: return "translate";
    }
}

SearchSpace::SearchSpace(const Task &t, SpaceOptions opts)
    : task_(t),
      opts_(opts),
      derived_bits_(t.has_axioms() && opts.axioms != AxiomMode::Translate),
      enc_(task_, opts.order, derived_bits_) {
    if (opts.cost_scale < 1)
        throw invalid_argument("cost scale must be positive");
    DdStore &st = store();
    domain_ = st.bdd_true();
    for (int v : task_.primary_vars())
        domain_ &= enc_.domain(v);
    if (task_.has_axioms())
        build_primary_repr();
    if (derived_bits_) {
        build_axiom_trs();
        valid_ = expand(domain_);
        init_ = expand(enc_.state(task_.init));
    } else {
        valid_ = domain_;
        init_ = enc_.state(task_.init);
    }
    goal_ = condition(task_.goal) & valid_;
    build_trs();
}

Bdd SearchSpace::var_value_any(int var, int val) const {
    const Variable &v = task_.vars[var];
    if (v.derived && !derived_bits_) {
        Bdd r = primary_repr(var);
        return val ? r : ~r;
    }
    if (v.derived)
        return enc_.value(var, val ? 1 : 0);
    return enc_.value(var, val);
}

Bdd SearchSpace::fact(int var, int val) const { return var_value_any(var, val); }

Bdd SearchSpace::condition(const PartialAssignment &pa) const {
    Bdd r = store().bdd_true();
    for (const Fact &f : pa)
        r &= fact(f.var, f.value);
    return r;
}

Bdd SearchSpace::primary_repr(int var) const {
    auto it = repr_.find(var);
    if (it == repr_.end())
        throw logic_error("no primary representation for " + task_.vars[var].name);
    return it->second;
}

// Layer by layer: bodies read lower layers through their finished
// representation and the current layer through the running iterate.
void SearchSpace::build_primary_repr() {
    DdStore &st = store();
    for (int d : task_.derived_vars())
        repr_[d] = st.bdd_false();
    auto literal = [&](const Fact &f) {
        const Variable &v = task_.vars[f.var];
        if (!v.derived)
            return enc_.value(f.var, f.value);
        Bdd r = repr_.at(f.var);
        return f.value ? r : ~r;
    };
    for (int layer = 1; layer <= task_.num_layers(); ++layer) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Axiom &a : task_.axioms) {
                if (task_.vars[a.head].layer != layer)
                    continue;
                Bdd body = domain_;
                for (const Fact &f : a.body)
                    body &= literal(f);
                Bdd next = repr_[a.head] | body;
                if (!(next == repr_[a.head])) {
                    repr_[a.head] = next;
                    changed = true;
                }
            }
        }
    }
}

void SearchSpace::build_axiom_trs() {
    DdStore &st = store();
    int layers = task_.num_layers();
    axiom_layer_trs_.assign(layers + 1, {});
    axiom_layer_checks_.assign(layers + 1, {});
    for (const Axiom &a : task_.axioms) {
        int layer = task_.vars[a.head].layer;
        Bdd body = st.bdd_true();
        for (const Fact &f : a.body)
            body &= fact(f.var, f.value);
        Bdd rel = body & enc_.value(a.head, 1, true);
        for (size_t v = 0; v < task_.vars.size(); ++v)
            if (enc_.encoded(int(v)) && int(v) != a.head)
                rel &= enc_.frame(int(v));
        axiom_layer_trs_[layer].push_back(rel);
        axiom_layer_checks_[layer].push_back(~body | enc_.value(a.head, 1));
    }
}

Bdd SearchSpace::expand(const Bdd &s) const {
    if (!derived_bits_)
        return s;
    return opts_.axioms == AxiomMode::OBased ? o_based_expand(s) : v_based_expand(s);
}

Bdd SearchSpace::o_based_expand(const Bdd &s) const {
    DdStore &st = store();
    Bdd r = st.exists(s, enc_.derived_set());
    for (int d : task_.derived_vars())
        r &= enc_.value(d, 0);
    for (size_t layer = 1; layer < axiom_layer_trs_.size(); ++layer) {
        Bdd rel = st.bdd_false();
        for (const Bdd &t : axiom_layer_trs_[layer])
            rel |= t;
        while (true) {
            Bdd next = r | st.rename(st.and_exists(r, rel, enc_.unprimed_set()), enc_.to_unprimed());
            if (next == r)
                break;
            r = next;
        }
        // intermediate states of the fixpoint still violate some rule
        for (const Bdd &c : axiom_layer_checks_[layer])
            r &= c;
    }
    return r;
}

Bdd SearchSpace::v_based_expand(const Bdd &s) const {
    Bdd r = store().exists(s, enc_.derived_set());
    for (int d : task_.derived_vars())
        r &= ~(enc_.value(d, 1) ^ primary_repr(d));
    return r;
}

void SearchSpace::build_trs() {
    DdStore &st = store();
    Weight scale(opts_.cost_scale);
    for (size_t o = 0; o < task_.ops.size(); ++o) {
        const Operator &op = task_.ops[o];
        Bdd pre = condition(op.pre) & valid_;
        if (pre.is_false()) {
            warnings_.push_back("operator " + op.name + " has an unsatisfiable precondition");
            continue;
        }
        Bdd base = st.bdd_true();
        vector<bool> touched(task_.vars.size(), false);
        for (const Fact &f : op.eff) {
            base &= enc_.value(f.var, f.value, true);
            touched[f.var] = true;
        }
        for (int v : task_.primary_vars())
            if (!touched[v])
                base &= enc_.frame(v);
        vector<pair<Weight, Bdd>> costs;
        if (auto c = op.cost.constant_value()) {
            costs.push_back({Weight(*c), pre});
        } else {
            Add a = st.add_ite(pre, compile_add(op.cost), st.add_constant(Weight::infinity()));
            costs = st.partition_terminals(a);
        }
        for (auto &[c, cond] : costs) {
            if (c < Weight(0))
                throw TaskError("operator " + op.name + " has negative cost " + std::to_string(c.value()));
            parts_.push_back({int(o), c * scale, cond & base});
        }
    }
    sort(parts_.begin(), parts_.end(), [](const TrPart &a, const TrPart &b) {
        if (a.cost != b.cost)
            return a.cost > b.cost;
        return a.op < b.op;
    });
    map<Weight, TransitionRelation> merged;
    any_tr_ = st.bdd_false();
    for (const TrPart &p : parts_) {
        auto [it, inserted] = merged.try_emplace(p.cost, TransitionRelation{p.cost, st.bdd_false(), {}});
        it->second.rel |= p.rel;
        if (find(it->second.ops.begin(), it->second.ops.end(), p.op) == it->second.ops.end())
            it->second.ops.push_back(p.op);
        any_tr_ |= p.rel;
    }
    for (auto &[c, tr] : merged) {
        sort(tr.ops.begin(), tr.ops.end());
        trs_.push_back(tr);
    }
}

vector<size_t> SearchSpace::tr_sizes() const {
    vector<size_t> r;
    for (const auto &t : trs_)
        r.push_back(store().node_count(t.rel));
    return r;
}

Weight SearchSpace::max_cost() const { return trs_.empty() ? Weight(0) : trs_.back().cost; }

Bdd SearchSpace::image(const Bdd &s, const Bdd &rel) const {
    DdStore &st = store();
    Bdd r = st.rename(st.and_exists(s, rel, enc_.unprimed_set()), enc_.to_unprimed());
    return derived_bits_ ? expand(r) : r;
}

Bdd SearchSpace::preimage(const Bdd &s, const Bdd &rel) const {
    DdStore &st = store();
    return st.and_exists(st.rename(s, enc_.to_primed()), rel, enc_.primed_set());
}

Bdd SearchSpace::forward_closure(const Bdd &from) const {
    Bdd r = from;
    while (true) {
        Bdd next = r | image(r, any_tr_);
        if (next == r)
            return r;
        r = next;
    }
}

Bdd SearchSpace::backward_closure(const Bdd &to) const {
    Bdd r = to;
    while (true) {
        Bdd next = r | preimage(r, any_tr_);
        if (next == r)
            return r;
        r = next;
    }
}

Add SearchSpace::compile_add(const Expr &e) const {
    DdStore &st = store();
    switch (e.kind()) {
    case Expr::Kind::Const:
        return st.add_constant(Weight(e.value()));
    case Expr::Kind::Var: {
        int d = task_.vars[e.var()].derived ? 2 : task_.vars[e.var()].domain;
        Add r = st.add_constant(Weight(0));
        for (int v = 1; v < d; ++v)
            r = st.add_ite(fact(e.var(), v), st.add_constant(Weight(v)), r);
        return r;
    }
    case Expr::Kind::Add:
        return compile_add(e.lhs()) + compile_add(e.rhs());
    case Expr::Kind::Sub:
        return compile_add(e.lhs()) - compile_add(e.rhs());
    case Expr::Kind::Mul:
        return compile_add(e.lhs()) * compile_add(e.rhs());
    case Expr::Kind::Abs: {
        Add a = compile_add(e.arg());
        return max(a, st.add_constant(Weight(0)) - a);
    }
    }
    throw logic_error("bad expression");
}

Ev SearchSpace::compile_ev(const Expr &e) const {
    DdStore &st = store();
    switch (e.kind()) {
    case Expr::Kind::Const:
        return st.ev_constant(Weight(e.value()));
    case Expr::Kind::Var: {
        int d = task_.vars[e.var()].derived ? 2 : task_.vars[e.var()].domain;
        Ev r = st.ev_constant(Weight(0));
        for (int v = 1; v < d; ++v) {
            Bdd f = fact(e.var(), v);
            r = r + min(st.ev_from_bdd(f, Weight(v)), st.ev_from_bdd(~f, Weight(0)));
        }
        return r;
    }
    case Expr::Kind::Add:
        return compile_ev(e.lhs()) + compile_ev(e.rhs());
    case Expr::Kind::Sub:
        return compile_ev(e.lhs()) - compile_ev(e.rhs());
    case Expr::Kind::Mul:
        return compile_ev(e.lhs()) * compile_ev(e.rhs());
    case Expr::Kind::Abs: {
        Ev a = compile_ev(e.arg());
        return max(a, st.ev_constant(Weight(0)) - a);
    }
    }
    throw logic_error("bad expression");
}

const vector<Ev> &SearchSpace::ev_trs() const {
    if (!ev_trs_.empty() || task_.ops.empty())
        return ev_trs_;
    DdStore &st = store();
    vector<Bdd> rel(task_.ops.size(), st.bdd_false());
    for (const TrPart &p : parts_)
        rel[p.op] |= p.rel;
    for (size_t o = 0; o < task_.ops.size(); ++o) {
        Ev cost = compile_ev(task_.ops[o].cost);
        if (opts_.cost_scale != 1)
            cost = cost * st.ev_constant(Weight(opts_.cost_scale));
        ev_trs_.push_back(st.ev_mask(cost, rel[o]));
    }
    return ev_trs_;
}

Ev SearchSpace::ev_image(const Ev &open, const Ev &tr) const {
    DdStore &st = store();
    Ev joined = st.ev_apply(ArithOp::Add, open, tr);
    return st.ev_rename(st.ev_min_abstract(joined, enc_.unprimed_set()), enc_.to_unprimed());
}

vector<int> SearchSpace::decode(const Assignment &a) const {
    vector<int> s = enc_.decode(a);
    for (int d : task_.derived_vars())
        s[d] = 0;
    return s;
}

vector<Assignment> SearchSpace::enumerate(const Bdd &s, size_t cap) const {
    vector<Assignment> out;
    Bdd rest = s;
    while (!rest.is_false() && out.size() < cap) {
        Assignment a = store().pick_state(rest);
        out.push_back(a);
        rest &= ~state_bdd(a);
    }
    return out;
}

long double SearchSpace::count(const Bdd &s) const {
    return store().sat_count(s, enc_.num_state_bits());
}

}  // namespace symplan::symbolic
