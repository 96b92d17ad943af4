#include "symplan/dd/store.h"

#include <unordered_set>

using namespace std;

namespace symplan::dd {

namespace {
enum Tag : uint64_t { kApply = 200, kMinAbs = 210, kRename, kRestrict, kFromBdd, kEquals, kFinite };

uint64_t pack(NodeId a, NodeId b) { return (uint64_t(a) << 32) | b; }

Weight arith(ArithOp op, Weight a, Weight b) {
    switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Min: return min(a, b);
    case ArithOp::Max: return max(a, b);
    }
    return a;
}
}  // namespace

DdStore::EvEdge DdStore::make_ev(Level l, EvEdge lo, EvEdge hi) {
    if (lo.w.is_infinite() && hi.w.is_infinite())
        return {Weight::infinity(), 0};
    if (lo.w.is_infinite())
        lo.n = 0;
    if (hi.w.is_infinite())
        hi.n = 0;
    Weight m = min(lo.w, hi.w);
    if (lo.w.is_finite())
        lo.w = lo.w - m;
    if (hi.w.is_finite())
        hi.w = hi.w - m;
    if (lo == hi)
        return {m, lo.n};
    Key k{l, pack(lo.n, hi.n), uint64_t(lo.w.raw()), uint64_t(hi.w.raw())};
    auto it = ev_unique_.find(k);
    if (it != ev_unique_.end())
        return {m, it->second};
    check_limit();
    NodeId id = NodeId(ev_.size());
    ev_.push_back({l, lo.n, hi.n, lo.w, hi.w});
    ev_unique_.emplace(k, id);
    return {m, id};
}

DdStore::EvEdge DdStore::ev_cofactor(EvEdge e, Level top, bool high) const {
    if (e.n == 0 || elevel(e.n) != top)
        return e;
    const EvNode &n = ev_[e.n];
    Weight w = high ? n.whi : n.wlo;
    if (w.is_infinite())
        return {Weight::infinity(), 0};
    return {e.w + w, high ? n.hi : n.lo};
}

DdStore::EvEdge DdStore::ev_apply_rec(ArithOp op, EvEdge f, EvEdge g) {
    if (op == ArithOp::Min) {
        if (f.w.is_infinite()) return g;
        if (g.w.is_infinite()) return f;
        if (f.n == g.n) return {min(f.w, g.w), f.n};
    } else if (f.w.is_infinite() || g.w.is_infinite()) {
        return {Weight::infinity(), 0};
    }
    if (op == ArithOp::Max && f.n == g.n)
        return {max(f.w, g.w), f.n};
    if (f.n == 0 && g.n == 0)
        return {arith(op, f.w, g.w), 0};
    if (op == ArithOp::Add && (f.n == 0 || g.n == 0))
        return {f.w + g.w, f.n == 0 ? g.n : f.n};
    if (op == ArithOp::Sub && g.n == 0)
        return {f.w - g.w, f.n};

    // Factor offsets out of the cache key where the operation allows it.
    Weight base = 0;
    EvEdge f0 = f, g0 = g;
    switch (op) {
    case ArithOp::Add:
        base = f.w + g.w;
        f0.w = 0;
        g0.w = 0;
        if (f0.n > g0.n)
            swap(f0, g0);
        break;
    case ArithOp::Sub:
        base = f.w - g.w;
        f0.w = 0;
        g0.w = 0;
        break;
    case ArithOp::Min:
    case ArithOp::Max:
        base = f.w;
        f0.w = 0;
        g0.w = g.w - f.w;
        break;
    case ArithOp::Mul:
        break;
    }
    Key k{pack(f0.n, g0.n), uint64_t(f0.w.raw()), uint64_t(g0.w.raw()),
          kApply + uint64_t(op)};
    EvEdge r;
    auto it = ev_cache_.find(k);
    if (it != ev_cache_.end()) {
        r = it->second;
    } else {
        Level top = std::min(elevel(f0.n), elevel(g0.n));
        EvEdge lo = ev_apply_rec(op, ev_cofactor(f0, top, false), ev_cofactor(g0, top, false));
        EvEdge hi = ev_apply_rec(op, ev_cofactor(f0, top, true), ev_cofactor(g0, top, true));
        r = make_ev(top, lo, hi);
        ev_cache_.emplace(k, r);
    }
    if (r.w.is_infinite())
        return r;
    return {r.w + base, r.n};
}

Ev DdStore::ev_constant(Weight w) { return {this, w, 0}; }

Ev DdStore::ev_apply(ArithOp op, const Ev &f, const Ev &g) {
    check(f);
    check(g);
    EvEdge r = ev_apply_rec(op, {f.offset(), f.id()}, {g.offset(), g.id()});
    return {this, r.w, r.n};
}

DdStore::EvEdge DdStore::ev_from_bdd_rec(NodeId b) {
    if (b == 0)
        return {Weight::infinity(), 0};
    if (b == 1)
        return {0, 0};
    Key k{b, 0, 0, kFromBdd};
    auto it = ev_cache_.find(k);
    if (it != ev_cache_.end())
        return it->second;
    const BddNode n = bdd_[b];
    EvEdge r = make_ev(n.level, ev_from_bdd_rec(n.lo), ev_from_bdd_rec(n.hi));
    ev_cache_.emplace(k, r);
    return r;
}

Ev DdStore::ev_from_bdd(const Bdd &b, Weight value) {
    check(b);
    EvEdge r = ev_from_bdd_rec(b.id());
    if (r.w.is_infinite())
        return {this, r.w, 0};
    return {this, r.w + value, r.n};
}

Ev DdStore::ev_mask(const Ev &f, const Bdd &b) {
    return ev_apply(ArithOp::Add, f, ev_from_bdd(b, 0));
}

DdStore::EvEdge DdStore::ev_min_abstract_rec(NodeId n, uint32_t set) {
    if (n == 0 || elevel(n) > var_sets_[set].max_level)
        return {0, n};
    Key k{n, set, 0, kMinAbs};
    auto it = ev_cache_.find(k);
    if (it != ev_cache_.end())
        return it->second;
    const EvNode nd = ev_[n];
    auto child = [&](NodeId c, Weight w) -> EvEdge {
        if (w.is_infinite())
            return {w, 0};
        EvEdge e = ev_min_abstract_rec(c, set);
        return {e.w + w, e.n};
    };
    EvEdge lo = child(nd.lo, nd.wlo), hi = child(nd.hi, nd.whi);
    EvEdge r = var_sets_[set].member[nd.level] ? ev_apply_rec(ArithOp::Min, lo, hi)
                                               : make_ev(nd.level, lo, hi);
    ev_cache_.emplace(k, r);
    return r;
}

Ev DdStore::ev_min_abstract(const Ev &f, VarSet vars) {
    check(f);
    if (f.offset().is_infinite() || var_sets_.at(vars.id).empty)
        return f;
    EvEdge r = ev_min_abstract_rec(f.id(), vars.id);
    return {this, r.w + f.offset(), r.n};
}

DdStore::EvEdge DdStore::ev_rename_rec(NodeId n, uint32_t r) {
    if (n == 0)
        return {0, 0};
    Key k{n, r, 0, kRename};
    auto it = ev_cache_.find(k);
    if (it != ev_cache_.end())
        return it->second;
    const EvNode nd = ev_[n];
    auto child = [&](NodeId c, Weight w) -> EvEdge {
        if (w.is_infinite())
            return {w, 0};
        EvEdge e = ev_rename_rec(c, r);
        return {e.w + w, e.n};
    };
    EvEdge lo = child(nd.lo, nd.wlo), hi = child(nd.hi, nd.whi);
    Level nl = renamings_[r][nd.level];
    if (nl >= elevel(lo.n) || nl >= elevel(hi.n))
        throw DdError("renaming is incompatible with the variable order");
    EvEdge res = make_ev(nl, lo, hi);
    ev_cache_.emplace(k, res);
    return res;
}

Ev DdStore::ev_rename(const Ev &f, Renaming r) {
    check(f);
    if (f.offset().is_infinite())
        return f;
    EvEdge e = ev_rename_rec(f.id(), r.id);
    return {this, e.w + f.offset(), e.n};
}

DdStore::EvEdge DdStore::ev_restrict_rec(NodeId n, NodeId cube) {
    while (cube > 1 && n != 0 && blevel(cube) < elevel(n))
        cube = bdd_[cube].lo == 0 ? bdd_[cube].hi : bdd_[cube].lo;
    if (n == 0 || cube <= 1)
        return {0, n};
    Key k{pack(n, cube), 0, 0, kRestrict};
    auto it = ev_cache_.find(k);
    if (it != ev_cache_.end())
        return it->second;
    const EvNode nd = ev_[n];
    auto child = [&](NodeId c, Weight w, NodeId cb) -> EvEdge {
        if (w.is_infinite())
            return {w, 0};
        EvEdge e = ev_restrict_rec(c, cb);
        return {e.w + w, e.n};
    };
    EvEdge r;
    if (nd.level == blevel(cube)) {
        bool hi = bdd_[cube].lo == 0;
        NodeId next = hi ? bdd_[cube].hi : bdd_[cube].lo;
        r = hi ? child(nd.hi, nd.whi, next) : child(nd.lo, nd.wlo, next);
    } else {
        r = make_ev(nd.level, child(nd.lo, nd.wlo, cube), child(nd.hi, nd.whi, cube));
    }
    ev_cache_.emplace(k, r);
    return r;
}

Ev DdStore::ev_restrict(const Ev &f, const Bdd &cube) {
    check(f);
    check(cube);
    if (cube.is_false())
        throw DdError("restrict by an empty cube");
    if (f.offset().is_infinite())
        return f;
    EvEdge e = ev_restrict_rec(f.id(), cube.id());
    if (e.w.is_infinite())
        return {this, e.w, 0};
    return {this, e.w + f.offset(), e.n};
}

Weight DdStore::eval(const Ev &f, const Assignment &s) const {
    check(f);
    Weight w = f.offset();
    NodeId n = f.id();
    while (n != 0 && w.is_finite()) {
        const EvNode &nd = ev_[n];
        bool hi = s.at(order_.var_at(nd.level));
        w = w + (hi ? nd.whi : nd.wlo);
        n = hi ? nd.hi : nd.lo;
    }
    return w;
}

NodeId DdStore::ev_equals_rec(NodeId n, Weight target) {
    if (target < Weight(0))
        return 0;
    if (n == 0)
        return target == Weight(0) ? 1 : 0;
    Key k{n, uint64_t(target.raw()), 0, kEquals};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const EvNode nd = ev_[n];
    NodeId lo = nd.wlo.is_infinite() ? 0 : ev_equals_rec(nd.lo, target - nd.wlo);
    NodeId hi = nd.whi.is_infinite() ? 0 : ev_equals_rec(nd.hi, target - nd.whi);
    NodeId r = make_bdd(nd.level, lo, hi);
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::ev_equals(const Ev &f, Weight w) {
    check(f);
    if (f.offset().is_infinite() || w.is_infinite())
        return bdd_false();
    return {this, ev_equals_rec(f.id(), w - f.offset())};
}

NodeId DdStore::ev_finite_rec(NodeId n) {
    if (n == 0)
        return 1;
    Key k{n, 0, 0, kFinite};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const EvNode nd = ev_[n];
    NodeId lo = nd.wlo.is_infinite() ? 0 : ev_finite_rec(nd.lo);
    NodeId hi = nd.whi.is_infinite() ? 0 : ev_finite_rec(nd.hi);
    NodeId r = make_bdd(nd.level, lo, hi);
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::ev_finite(const Ev &f) {
    check(f);
    if (f.offset().is_infinite())
        return bdd_false();
    return {this, ev_finite_rec(f.id())};
}

size_t DdStore::node_count(const Ev &f) const {
    check(f);
    unordered_set<NodeId> seen;
    vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (n != 0) {
            stack.push_back(ev_[n].lo);
            stack.push_back(ev_[n].hi);
        }
    }
    return seen.size();
}

Ev Ev::operator+(const Ev &o) const { return store_->ev_apply(ArithOp::Add, *this, o); }
Ev Ev::operator-(const Ev &o) const { return store_->ev_apply(ArithOp::Sub, *this, o); }
Ev Ev::operator*(const Ev &o) const { return store_->ev_apply(ArithOp::Mul, *this, o); }
Ev min(const Ev &a, const Ev &b) { return a.store()->ev_apply(ArithOp::Min, a, b); }
Ev max(const Ev &a, const Ev &b) { return a.store()->ev_apply(ArithOp::Max, a, b); }

}  // namespace symplan::dd
