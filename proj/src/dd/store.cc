#include "symplan/dd/store.h"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <unordered_set>

using namespace std;

namespace symplan::dd {

namespace {
enum Tag : uint64_t {
    kAnd = 1, kOr, kXor, kNot, kIte, kExists, kAndExists, kRename, kRestrict,
};

uint64_t pack(NodeId a, NodeId b) { return (uint64_t(a) << 32) | b; }

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

size_t DdStore::KeyHash::operator()(const Key &k) const {
    uint64_t h = mix(k.a);
    h = mix(h ^ k.b);
    h = mix(h ^ k.c);
    h = mix(h ^ k.d);
    return h;
}

VarOrder::VarOrder(vector<VarId> levels) : var_at_(std::move(levels)) {
    level_of_.assign(var_at_.size(), kTerminalLevel);
    for (Level l = 0; l < var_at_.size(); ++l) {
        VarId v = var_at_[l];
        if (v >= var_at_.size() || level_of_[v] != kTerminalLevel)
            throw DdError("variable order is not a permutation");
        level_of_[v] = l;
    }
}

VarOrder VarOrder::identity(size_t n) {
    vector<VarId> v(n);
    for (size_t i = 0; i < n; ++i)
        v[i] = VarId(i);
    return VarOrder(std::move(v));
}

DdStore::DdStore(VarOrder order) : order_(std::move(order)) {
    names_.resize(order_.size());
    bdd_.push_back({kTerminalLevel, 0, 0});
    bdd_.push_back({kTerminalLevel, 1, 1});
    ev_.push_back({kTerminalLevel, 0, 0, 0, 0});
    var_sets_.push_back({});  // id 0: empty set
    var_sets_[0].member.assign(order_.size(), 0);
    renamings_.push_back({});
    for (Level l = 0; l < order_.size(); ++l)
        renamings_[0].push_back(l);
    if (const char *env = getenv("SYMPLAN_NODE_LIMIT"))
        node_limit_ = strtoull(env, nullptr, 10);
}

void DdStore::set_var_name(VarId v, string name) { names_.at(v) = std::move(name); }

string DdStore::var_name(VarId v) const {
    if (v < names_.size() && !names_[v].empty())
        return names_[v];
    return "v" + to_string(v);
}

StoreStats DdStore::stats() const {
    return {bdd_.size(), add_.size(), ev_.size()};
}

void DdStore::check_limit() {
    if (node_limit_ && stats().total() >= node_limit_)
        throw NodeLimitExceeded("node limit of " + to_string(node_limit_) + " exceeded");
}

void DdStore::check(const Bdd &a) const {
    if (a.store() != this)
        throw DdError("BDD handle from a different store");
}
void DdStore::check(const Add &a) const {
    if (a.store() != this)
        throw DdError("ADD handle from a different store");
}
void DdStore::check(const Ev &a) const {
    if (a.store() != this)
        throw DdError("EV handle from a different store");
}

VarSet DdStore::make_var_set(const vector<VarId> &vars) {
    VarSetData d;
    d.member.assign(order_.size(), 0);
    for (VarId v : vars) {
        if (v >= order_.size())
            throw DdError("unknown variable in variable set");
        Level l = order_.level_of(v);
        d.member[l] = 1;
        d.max_level = d.empty ? l : std::max(d.max_level, l);
        d.empty = false;
    }
    string key(d.member.begin(), d.member.end());
    auto it = var_set_ids_.find(key);
    if (it != var_set_ids_.end())
        return {it->second};
    uint32_t id = uint32_t(var_sets_.size());
    var_sets_.push_back(std::move(d));
    var_set_ids_.emplace(std::move(key), id);
    return {id};
}

Renaming DdStore::make_renaming(const vector<pair<VarId, VarId>> &pairs) {
    vector<Level> m(order_.size());
    for (Level l = 0; l < m.size(); ++l)
        m[l] = l;
    for (auto [from, to] : pairs) {
        if (from >= order_.size() || to >= order_.size())
            throw DdError("unknown variable in renaming");
        m[order_.level_of(from)] = order_.level_of(to);
    }
    string key;
    for (Level l : m)
        key.append(reinterpret_cast<const char *>(&l), sizeof(l));
    auto it = renaming_ids_.find(key);
    if (it != renaming_ids_.end())
        return {it->second};
    uint32_t id = uint32_t(renamings_.size());
    renamings_.push_back(std::move(m));
    renaming_ids_.emplace(std::move(key), id);
    return {id};
}

// ---------------------------------------------------------------- BDD

NodeId DdStore::make_bdd(Level l, NodeId lo, NodeId hi) {
    if (lo == hi)
        return lo;
    Key k{l, pack(lo, hi), 0, 0};
    auto it = bdd_unique_.find(k);
    if (it != bdd_unique_.end())
        return it->second;
    check_limit();
    NodeId id = NodeId(bdd_.size());
    bdd_.push_back({l, lo, hi});
    bdd_unique_.emplace(k, id);
    return id;
}

Bdd DdStore::literal(VarId v, bool positive) {
    if (v >= order_.size())
        throw DdError("unknown variable " + to_string(v));
    Level l = order_.level_of(v);
    return {this, positive ? make_bdd(l, 0, 1) : make_bdd(l, 1, 0)};
}

Bdd DdStore::cube(const vector<pair<VarId, bool>> &lits) {
    vector<pair<Level, bool>> ls;
    for (auto [v, val] : lits)
        ls.emplace_back(order_.level_of(v), val);
    sort(ls.begin(), ls.end());
    for (size_t i = 1; i < ls.size(); ++i)
        if (ls[i].first == ls[i - 1].first && ls[i].second != ls[i - 1].second)
            return bdd_false();
    ls.erase(unique(ls.begin(), ls.end()), ls.end());
    NodeId r = 1;
    for (auto it = ls.rbegin(); it != ls.rend(); ++it)
        r = it->second ? make_bdd(it->first, 0, r) : make_bdd(it->first, r, 0);
    return {this, r};
}

NodeId DdStore::bdd_not_rec(NodeId a) {
    if (a <= 1)
        return 1 - a;
    Key k{a, 0, 0, kNot};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const BddNode n = bdd_[a];
    NodeId r = make_bdd(n.level, bdd_not_rec(n.lo), bdd_not_rec(n.hi));
    bdd_cache_.emplace(k, r);
    return r;
}

NodeId DdStore::bdd_apply_rec(BoolOp op, NodeId a, NodeId b) {
    switch (op) {
    case BoolOp::And:
        if (a == 0 || b == 0) return 0;
        if (a == 1) return b;
        if (b == 1 || a == b) return a;
        break;
    case BoolOp::Or:
        if (a == 1 || b == 1) return 1;
        if (a == 0) return b;
        if (b == 0 || a == b) return a;
        break;
    case BoolOp::Xor:
        if (a == 0) return b;
        if (b == 0) return a;
        if (a == b) return 0;
        if (a == 1) return bdd_not_rec(b);
        if (b == 1) return bdd_not_rec(a);
        break;
    }
    if (a > b)
        swap(a, b);
    Key k{pack(a, b), 0, 0, uint64_t(kAnd + uint64_t(op))};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    Level la = blevel(a), lb = blevel(b);
    Level top = std::min(la, lb);
    NodeId a0 = la == top ? bdd_[a].lo : a, a1 = la == top ? bdd_[a].hi : a;
    NodeId b0 = lb == top ? bdd_[b].lo : b, b1 = lb == top ? bdd_[b].hi : b;
    NodeId lo = bdd_apply_rec(op, a0, b0);
    NodeId hi = bdd_apply_rec(op, a1, b1);
    NodeId r = make_bdd(top, lo, hi);
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::apply(BoolOp op, const Bdd &a, const Bdd &b) {
    check(a);
    check(b);
    return {this, bdd_apply_rec(op, a.id(), b.id())};
}

Bdd DdStore::negate(const Bdd &a) {
    check(a);
    return {this, bdd_not_rec(a.id())};
}

NodeId DdStore::bdd_ite_rec(NodeId c, NodeId t, NodeId e) {
    if (c == 1) return t;
    if (c == 0) return e;
    if (t == e) return t;
    if (t == 1 && e == 0) return c;
    Key k{pack(c, t), e, 0, kIte};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    Level top = std::min({blevel(c), blevel(t), blevel(e)});
    auto cof = [&](NodeId n, bool hi) {
        if (blevel(n) != top) return n;
        return hi ? bdd_[n].hi : bdd_[n].lo;
    };
    NodeId lo = bdd_ite_rec(cof(c, false), cof(t, false), cof(e, false));
    NodeId hi = bdd_ite_rec(cof(c, true), cof(t, true), cof(e, true));
    NodeId r = make_bdd(top, lo, hi);
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::ite(const Bdd &c, const Bdd &t, const Bdd &e) {
    check(c);
    check(t);
    check(e);
    return {this, bdd_ite_rec(c.id(), t.id(), e.id())};
}

NodeId DdStore::exists_rec(NodeId a, uint32_t set) {
    const VarSetData &vs = var_sets_[set];
    if (a <= 1 || blevel(a) > vs.max_level)
        return a;
    Key k{a, set, 0, kExists};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const BddNode n = bdd_[a];
    NodeId lo = exists_rec(n.lo, set);
    NodeId r;
    if (var_sets_[set].member[n.level]) {
        r = lo == 1 ? 1 : bdd_apply_rec(BoolOp::Or, lo, exists_rec(n.hi, set));
    } else {
        r = make_bdd(n.level, lo, exists_rec(n.hi, set));
    }
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::exists(const Bdd &a, VarSet vars) {
    check(a);
    if (var_sets_.at(vars.id).empty)
        return a;
    return {this, exists_rec(a.id(), vars.id)};
}

NodeId DdStore::and_exists_rec(NodeId a, NodeId b, uint32_t set) {
    if (a == 0 || b == 0)
        return 0;
    if (a == 1 && b == 1)
        return 1;
    if (a == 1 || a == b)
        return exists_rec(b, set);
    if (b == 1)
        return exists_rec(a, set);
    const VarSetData &vs = var_sets_[set];
    Level la = blevel(a), lb = blevel(b);
    Level top = std::min(la, lb);
    if (top > vs.max_level)
        return bdd_apply_rec(BoolOp::And, a, b);
    if (a > b) {
        swap(a, b);
        swap(la, lb);
    }
    Key k{pack(a, b), set, 0, kAndExists};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    NodeId a0 = la == top ? bdd_[a].lo : a, a1 = la == top ? bdd_[a].hi : a;
    NodeId b0 = lb == top ? bdd_[b].lo : b, b1 = lb == top ? bdd_[b].hi : b;
    NodeId r;
    NodeId lo = and_exists_rec(a0, b0, set);
    if (var_sets_[set].member[top]) {
        r = lo == 1 ? 1 : bdd_apply_rec(BoolOp::Or, lo, and_exists_rec(a1, b1, set));
    } else {
        r = make_bdd(top, lo, and_exists_rec(a1, b1, set));
    }
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::and_exists(const Bdd &a, const Bdd &b, VarSet vars) {
    check(a);
    check(b);
    return {this, and_exists_rec(a.id(), b.id(), vars.id)};
}

NodeId DdStore::rename_rec(NodeId a, uint32_t r) {
    if (a <= 1)
        return a;
    Key k{a, r, 0, kRename};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const BddNode n = bdd_[a];
    NodeId lo = rename_rec(n.lo, r);
    NodeId hi = rename_rec(n.hi, r);
    Level nl = renamings_[r][n.level];
    if (nl >= blevel(lo) || nl >= blevel(hi))
        throw DdError("renaming is incompatible with the variable order");
    NodeId res = make_bdd(nl, lo, hi);
    bdd_cache_.emplace(k, res);
    return res;
}

Bdd DdStore::rename(const Bdd &a, Renaming r) {
    check(a);
    return {this, rename_rec(a.id(), r.id)};
}

NodeId DdStore::bdd_restrict_rec(NodeId a, NodeId cube) {
    while (cube > 1 && a > 1 && blevel(cube) < blevel(a))
        cube = bdd_[cube].lo == 0 ? bdd_[cube].hi : bdd_[cube].lo;
    if (a <= 1 || cube <= 1)
        return a;
    Key k{pack(a, cube), 0, 0, kRestrict};
    auto it = bdd_cache_.find(k);
    if (it != bdd_cache_.end())
        return it->second;
    const BddNode n = bdd_[a];
    NodeId r;
    if (n.level == blevel(cube)) {
        bool hi = bdd_[cube].lo == 0;
        NodeId next = hi ? bdd_[cube].hi : bdd_[cube].lo;
        r = bdd_restrict_rec(hi ? n.hi : n.lo, next);
    } else {
        r = make_bdd(n.level, bdd_restrict_rec(n.lo, cube), bdd_restrict_rec(n.hi, cube));
    }
    bdd_cache_.emplace(k, r);
    return r;
}

Bdd DdStore::restrict(const Bdd &a, const Bdd &cube) {
    check(a);
    check(cube);
    if (cube.is_false())
        throw DdError("restrict by an empty cube");
    return {this, bdd_restrict_rec(a.id(), cube.id())};
}

bool DdStore::eval(const Bdd &a, const Assignment &s) const {
    check(a);
    NodeId n = a.id();
    while (n > 1) {
        const BddNode &nd = bdd_[n];
        n = s.at(order_.var_at(nd.level)) ? nd.hi : nd.lo;
    }
    return n == 1;
}

Assignment DdStore::pick_state(const Bdd &a) const {
    check(a);
    if (a.is_false())
        throw DdError("pick_state on the empty set");
    Assignment s(order_.size(), 0);
    NodeId n = a.id();
    while (n > 1) {
        const BddNode &nd = bdd_[n];
        if (nd.lo != 0) {
            n = nd.lo;
        } else {
            s[order_.var_at(nd.level)] = 1;
            n = nd.hi;
        }
    }
    return s;
}

long double DdStore::sat_count(const Bdd &a, size_t num_vars_counted) const {
    check(a);
    unordered_map<NodeId, long double> memo;
    function<long double(NodeId)> frac = [&](NodeId n) -> long double {
        if (n <= 1)
            return n;
        auto it = memo.find(n);
        if (it != memo.end())
            return it->second;
        long double r = (frac(bdd_[n].lo) + frac(bdd_[n].hi)) / 2;
        memo.emplace(n, r);
        return r;
    };
    long double f = frac(a.id());
    for (size_t i = 0; i < num_vars_counted; ++i)
        f *= 2;
    return f;
}

size_t DdStore::node_count(const vector<Bdd> &as) const {
    unordered_set<NodeId> seen;
    vector<NodeId> stack;
    for (const Bdd &a : as) {
        check(a);
        stack.push_back(a.id());
    }
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (n > 1) {
            stack.push_back(bdd_[n].lo);
            stack.push_back(bdd_[n].hi);
        }
    }
    return seen.size();
}

size_t DdStore::node_count(const Bdd &a) const { return node_count(vector<Bdd>{a}); }

vector<VarId> DdStore::support(const Bdd &a) const {
    check(a);
    unordered_set<NodeId> seen;
    vector<uint8_t> levels(order_.size(), 0);
    vector<NodeId> stack{a.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (n <= 1 || !seen.insert(n).second)
            continue;
        levels[bdd_[n].level] = 1;
        stack.push_back(bdd_[n].lo);
        stack.push_back(bdd_[n].hi);
    }
    vector<VarId> r;
    for (Level l = 0; l < levels.size(); ++l)
        if (levels[l])
            r.push_back(order_.var_at(l));
    return r;
}

Bdd Bdd::operator&(const Bdd &o) const { return store_->apply(BoolOp::And, *this, o); }
Bdd Bdd::operator|(const Bdd &o) const { return store_->apply(BoolOp::Or, *this, o); }
Bdd Bdd::operator^(const Bdd &o) const { return store_->apply(BoolOp::Xor, *this, o); }
Bdd Bdd::operator~() const { return store_->negate(*this); }

// ---------------------------------------------------------------- audit

vector<string> DdStore::audit() const {
    vector<string> bad;
    auto below = [](Level parent, Level child) { return child > parent; };
    for (NodeId i = 2; i < bdd_.size(); ++i) {
        const BddNode &n = bdd_[i];
        if (n.lo == n.hi)
            bad.push_back("bdd node " + to_string(i) + " is redundant");
        if (!below(n.level, blevel(n.lo)) || !below(n.level, blevel(n.hi)))
            bad.push_back("bdd node " + to_string(i) + " violates the order");
    }
    if (bdd_unique_.size() != bdd_.size() - 2)
        bad.push_back("bdd unique table out of sync");
    for (NodeId i = 0; i < add_.size(); ++i) {
        const AddNode &n = add_[i];
        if (n.level == kTerminalLevel)
            continue;
        if (n.lo == n.hi)
            bad.push_back("add node " + to_string(i) + " is redundant");
        if (!below(n.level, alevel(n.lo)) || !below(n.level, alevel(n.hi)))
            bad.push_back("add node " + to_string(i) + " violates the order");
    }
    if (add_unique_.size() + add_terminals_.size() != add_.size())
        bad.push_back("add unique table out of sync");
    for (NodeId i = 1; i < ev_.size(); ++i) {
        const EvNode &n = ev_[i];
        if (n.lo == n.hi && n.wlo == n.whi)
            bad.push_back("ev node " + to_string(i) + " is redundant");
        if (!below(n.level, elevel(n.lo)) || !below(n.level, elevel(n.hi)))
            bad.push_back("ev node " + to_string(i) + " violates the order");
        if (min(n.wlo, n.whi) != Weight(0))
            bad.push_back("ev node " + to_string(i) + " is not normalized");
        if ((n.wlo.is_infinite() && n.lo != 0) || (n.whi.is_infinite() && n.hi != 0))
            bad.push_back("ev node " + to_string(i) + " has an infinite edge to a non-terminal");
    }
    if (ev_unique_.size() != ev_.size() - 1)
        bad.push_back("ev unique table out of sync");
    return bad;
}

}  // namespace symplan::dd
