#include "symplan/dd/store.h"

#include <algorithm>
#include <set>
#include <unordered_set>

using namespace std;

namespace symplan::dd {

namespace {
enum Tag : uint64_t { kApply = 100, kFromBdd = 110, kIte, kRestrict, kEquals, kMaxOn };

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

bool commutative(ArithOp op) { return op != ArithOp::Sub; }

// Marks "no state" in the max-on cache.
constexpr int64_t kNone = numeric_limits<int64_t>::min();
}  // namespace

NodeId DdStore::add_terminal(Weight w) {
    auto it = add_terminals_.find(w.raw());
    if (it != add_terminals_.end())
        return it->second;
    check_limit();
    NodeId id = NodeId(add_.size());
    add_.push_back({kTerminalLevel, 0, 0, w});
    add_terminals_.emplace(w.raw(), id);
    return id;
}

NodeId DdStore::make_add(Level l, NodeId lo, NodeId hi) {
    if (lo == hi)
        return lo;
    Key k{l, pack(lo, hi), 0, 0};
    auto it = add_unique_.find(k);
    if (it != add_unique_.end())
        return it->second;
    check_limit();
    NodeId id = NodeId(add_.size());
    add_.push_back({l, lo, hi, 0});
    add_unique_.emplace(k, id);
    return id;
}

Add DdStore::add_constant(Weight w) { return {this, add_terminal(w)}; }

NodeId DdStore::add_from_bdd_rec(NodeId b, NodeId t, NodeId e) {
    if (b <= 1)
        return b ? t : e;
    Key k{pack(b, t), e, 0, kFromBdd};
    auto it = add_cache_.find(k);
    if (it != add_cache_.end())
        return it->second;
    const BddNode n = bdd_[b];
    NodeId r = make_add(n.level, add_from_bdd_rec(n.lo, t, e), add_from_bdd_rec(n.hi, t, e));
    add_cache_.emplace(k, r);
    return r;
}

Add DdStore::add_from_bdd(const Bdd &b, Weight then_value, Weight else_value) {
    check(b);
    NodeId t = add_terminal(then_value), e = add_terminal(else_value);
    return {this, add_from_bdd_rec(b.id(), t, e)};
}

NodeId DdStore::add_apply_rec(ArithOp op, NodeId f, NodeId g) {
    const AddNode &nf = add_[f], &ng = add_[g];
    if (nf.level == kTerminalLevel && ng.level == kTerminalLevel)
        return add_terminal(arith(op, nf.value, ng.value));
    if (commutative(op) && f > g)
        swap(f, g);
    Key k{pack(f, g), uint64_t(op), 0, kApply};
    auto it = add_cache_.find(k);
    if (it != add_cache_.end())
        return it->second;
    Level lf = alevel(f), lg = alevel(g);
    Level top = std::min(lf, lg);
    NodeId f0 = lf == top ? add_[f].lo : f, f1 = lf == top ? add_[f].hi : f;
    NodeId g0 = lg == top ? add_[g].lo : g, g1 = lg == top ? add_[g].hi : g;
    NodeId lo = add_apply_rec(op, f0, g0);
    NodeId hi = add_apply_rec(op, f1, g1);
    NodeId r = make_add(top, lo, hi);
    add_cache_.emplace(k, r);
    return r;
}

Add DdStore::add_apply(ArithOp op, const Add &f, const Add &g) {
    check(f);
    check(g);
    return {this, add_apply_rec(op, f.id(), g.id())};
}

NodeId DdStore::add_ite_rec(NodeId c, NodeId t, NodeId e) {
    if (c == 1) return t;
    if (c == 0) return e;
    if (t == e) return t;
    Key k{pack(c, t), e, 0, kIte};
    auto it = add_cache_.find(k);
    if (it != add_cache_.end())
        return it->second;
    Level top = std::min({blevel(c), alevel(t), alevel(e)});
    auto cofb = [&](NodeId n, bool hi) {
        if (blevel(n) != top) return n;
        return hi ? bdd_[n].hi : bdd_[n].lo;
    };
    auto cofa = [&](NodeId n, bool hi) {
        if (alevel(n) != top) return n;
        return hi ? add_[n].hi : add_[n].lo;
    };
    NodeId lo = add_ite_rec(cofb(c, false), cofa(t, false), cofa(e, false));
    NodeId hi = add_ite_rec(cofb(c, true), cofa(t, true), cofa(e, true));
    NodeId r = make_add(top, lo, hi);
    add_cache_.emplace(k, r);
    return r;
}

Add DdStore::add_ite(const Bdd &c, const Add &t, const Add &e) {
    check(c);
    check(t);
    check(e);
    return {this, add_ite_rec(c.id(), t.id(), e.id())};
}

NodeId DdStore::add_restrict_rec(NodeId f, NodeId cube) {
    while (cube > 1 && alevel(f) != kTerminalLevel && blevel(cube) < alevel(f))
        cube = bdd_[cube].lo == 0 ? bdd_[cube].hi : bdd_[cube].lo;
    if (alevel(f) == kTerminalLevel || cube <= 1)
        return f;
    Key k{pack(f, cube), 0, 0, kRestrict};
    auto it = add_cache_.find(k);
    if (it != add_cache_.end())
        return it->second;
    const AddNode n = add_[f];
    NodeId r;
    if (n.level == blevel(cube)) {
        bool hi = bdd_[cube].lo == 0;
        NodeId next = hi ? bdd_[cube].hi : bdd_[cube].lo;
        r = add_restrict_rec(hi ? n.hi : n.lo, next);
    } else {
        r = make_add(n.level, add_restrict_rec(n.lo, cube), add_restrict_rec(n.hi, cube));
    }
    add_cache_.emplace(k, r);
    return r;
}

Add DdStore::add_restrict(const Add &f, const Bdd &cube) {
    check(f);
    check(cube);
    if (cube.is_false())
        throw DdError("restrict by an empty cube");
    return {this, add_restrict_rec(f.id(), cube.id())};
}

Weight DdStore::eval(const Add &f, const Assignment &s) const {
    check(f);
    NodeId n = f.id();
    while (add_[n].level != kTerminalLevel) {
        const AddNode &nd = add_[n];
        n = s.at(order_.var_at(nd.level)) ? nd.hi : nd.lo;
    }
    return add_[n].value;
}

vector<Weight> DdStore::terminals(const Add &f) const {
    check(f);
    unordered_set<NodeId> seen;
    set<Weight> values;
    vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (add_[n].level == kTerminalLevel) {
            values.insert(add_[n].value);
        } else {
            stack.push_back(add_[n].lo);
            stack.push_back(add_[n].hi);
        }
    }
    return {values.begin(), values.end()};
}

NodeId DdStore::add_equals_rec(NodeId f, Weight w) {
    const AddNode n = add_[f];
    if (n.level == kTerminalLevel)
        return n.value == w ? 1 : 0;
    Key k{f, uint64_t(w.raw()), 0, kEquals};
    auto it = add_cache_.find(k);
    if (it != add_cache_.end())
        return it->second;
    NodeId r = make_bdd(n.level, add_equals_rec(n.lo, w), add_equals_rec(n.hi, w));
    add_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::add_equals(const Add &f, Weight w) {
    check(f);
    return {this, add_equals_rec(f.id(), w)};
}

vector<pair<Weight, Bdd>> DdStore::partition_terminals(const Add &f) {
    vector<pair<Weight, Bdd>> r;
    for (Weight w : terminals(f))
        if (w.is_finite())
            r.emplace_back(w, add_equals(f, w));
    return r;
}

int64_t DdStore::add_max_on_rec(NodeId f, NodeId s) {
    if (s == 0)
        return kNone;
    if (add_[f].level == kTerminalLevel)
        return add_[f].value.raw();
    Key k{pack(f, s), 0, 0, kMaxOn};
    auto it = weight_cache_.find(k);
    if (it != weight_cache_.end())
        return it->second;
    Level top = std::min(alevel(f), blevel(s));
    NodeId f0 = alevel(f) == top ? add_[f].lo : f, f1 = alevel(f) == top ? add_[f].hi : f;
    NodeId s0 = blevel(s) == top ? bdd_[s].lo : s, s1 = blevel(s) == top ? bdd_[s].hi : s;
    int64_t r = std::max(add_max_on_rec(f0, s0), add_max_on_rec(f1, s1));
    weight_cache_.emplace(k, r);
    return r;
}

optional<Weight> DdStore::add_max_on(const Add &f, const Bdd &states) {
    check(f);
    check(states);
    int64_t r = add_max_on_rec(f.id(), states.id());
    if (r == kNone)
        return nullopt;
    return Weight::from_raw(r);
}

size_t DdStore::node_count(const Add &f) const {
    check(f);
    unordered_set<NodeId> seen;
    vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (add_[n].level != kTerminalLevel) {
            stack.push_back(add_[n].lo);
            stack.push_back(add_[n].hi);
        }
    }
    return seen.size();
}

Add Add::operator+(const Add &o) const { return store_->add_apply(ArithOp::Add, *this, o); }
Add Add::operator-(const Add &o) const { return store_->add_apply(ArithOp::Sub, *this, o); }
Add Add::operator*(const Add &o) const { return store_->add_apply(ArithOp::Mul, *this, o); }
Add min(const Add &a, const Add &b) { return a.store()->add_apply(ArithOp::Min, a, b); }
Add max(const Add &a, const Add &b) { return a.store()->add_apply(ArithOp::Max, a, b); }

}  // namespace symplan::dd
