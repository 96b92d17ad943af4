#include "symplan/symbolic/encoding.h"

#include <stdexcept>

using namespace std;
using namespace symplan::dd;
using namespace symplan::task;

namespace symplan::symbolic {

OrderKind parse_order(const string &s) {
    if (s == "interleaved")
        return OrderKind::Interleaved;
    if (s == "file")
        return OrderKind::File;
    throw invalid_argument("unknown variable order '" + s + "'");
}

Encoding::Encoding(const Task &t, OrderKind order, bool include_derived) : task_(t) {
    size_t n = t.vars.size();
    encoded_.assign(n, false);
    ubits_.resize(n);
    pbits_.resize(n);
    // bit j gets ids 2j (unprimed) and 2j+1 (primed)
    uint32_t next = 0;
    vector<VarId> derived_bits;
    vector<string> names;
    for (size_t v = 0; v < n; ++v) {
        if (t.vars[v].derived && !include_derived)
            continue;
        encoded_[v] = true;
        int nb = t.vars[v].derived ? 1 : bits_for_domain(t.vars[v].domain);
        for (int b = 0; b < nb; ++b) {
            ubits_[v].push_back(2 * next);
            pbits_[v].push_back(2 * next + 1);
            unprimed_all_.push_back(2 * next);
            if (t.vars[v].derived)
                derived_bits.push_back(2 * next);
            string nm = t.vars[v].name + (nb > 1 ? "." + to_string(b) : "");
            names.push_back(nm);
            names.push_back(nm + "'");
            ++next;
        }
    }
    vector<VarId> levels;
    if (order == OrderKind::Interleaved) {
        for (uint32_t i = 0; i < 2 * next; ++i)
            levels.push_back(i);
    } else {
        for (uint32_t i = 0; i < next; ++i)
            levels.push_back(2 * i);
        for (uint32_t i = 0; i < next; ++i)
            levels.push_back(2 * i + 1);
    }
    store_ = make_unique<DdStore>(VarOrder(levels));
    for (uint32_t i = 0; i < 2 * next; ++i)
        store_->set_var_name(i, names[i]);
    vector<VarId> primed;
    vector<pair<VarId, VarId>> up, pu;
    for (uint32_t i = 0; i < next; ++i) {
        primed.push_back(2 * i + 1);
        up.push_back({2 * i, 2 * i + 1});
        pu.push_back({2 * i + 1, 2 * i});
    }
    unprimed_set_ = store_->make_var_set(unprimed_all_);
    primed_set_ = store_->make_var_set(primed);
    derived_set_ = store_->make_var_set(derived_bits);
    to_primed_ = store_->make_renaming(up);
    to_unprimed_ = store_->make_renaming(pu);
}

Bdd Encoding::value(int var, int val, bool primed) const {
    if (!encoded_[var])
        throw logic_error("variable " + task_.vars[var].name + " is not encoded");
    const auto &b = bits(var, primed);
    vector<pair<VarId, bool>> lits;
    int nb = int(b.size());
    for (int i = 0; i < nb; ++i)
        lits.push_back({b[i], ((val >> (nb - 1 - i)) & 1) != 0});
    return store_->cube(lits);
}

Bdd Encoding::domain(int var, bool primed) const {
    int nb = int(bits(var, primed).size());
    int d = task_.vars[var].derived ? 2 : task_.vars[var].domain;
    Bdd r = store_->bdd_false();
    if ((1 << nb) == d || nb == 0)
        return store_->bdd_true();
    for (int v = 0; v < d; ++v)
        r |= value(var, v, primed);
    return r;
}

Bdd Encoding::frame(int var) const {
    Bdd r = store_->bdd_true();
    for (size_t i = 0; i < ubits_[var].size(); ++i)
        r &= ~(store_->literal(ubits_[var][i]) ^ store_->literal(pbits_[var][i]));
    return r;
}

Bdd Encoding::state_cube(const Assignment &a, bool primed) const {
    vector<pair<VarId, bool>> lits;
    for (VarId u : unprimed_all_)
        lits.push_back({primed ? u + 1 : u, a[u] != 0});
    return store_->cube(lits);
}

vector<int> Encoding::decode(const Assignment &a) const {
    vector<int> s(task_.vars.size(), 0);
    for (size_t v = 0; v < s.size(); ++v) {
        int x = 0;
        for (VarId b : ubits_[v])
            x = 2 * x + a[b];
        s[v] = x;
    }
    return s;
}

Bdd Encoding::state(const vector<int> &values) const {
    Bdd r = store_->bdd_true();
    for (size_t v = 0; v < values.size(); ++v)
        if (encoded_[v])
            r &= value(int(v), values[v]);
    return r;
}

}  // namespace symplan::symbolic
