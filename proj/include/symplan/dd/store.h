#ifndef SYMPLAN_DD_STORE_H
#define SYMPLAN_DD_STORE_H

#include "symplan/dd/weight.h"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symplan::dd {

using NodeId = uint32_t;
using VarId = uint32_t;
using Level = uint32_t;
constexpr Level kTerminalLevel = UINT32_MAX;

// Total valuation of the binary variables, indexed by VarId.
using Assignment = std::vector<uint8_t>;

class DdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NodeLimitExceeded : public DdError {
public:
    using DdError::DdError;
};

class VarOrder {
    std::vector<VarId> var_at_;
    std::vector<Level> level_of_;

public:
    VarOrder() = default;
    // levels[i] is the variable at level i; must be a permutation of 0..n-1.
    explicit VarOrder(std::vector<VarId> levels);
    static VarOrder identity(size_t n);

    size_t size() const { return var_at_.size(); }
    VarId var_at(Level l) const { return var_at_[l]; }
    Level level_of(VarId v) const { return level_of_[v]; }
};

enum class BoolOp : uint8_t { And, Or, Xor };
enum class ArithOp : uint8_t { Add, Sub, Mul, Min, Max };

class DdStore;

class Bdd {
    friend class DdStore;
    DdStore *store_ = nullptr;
    NodeId id_ = 0;
    Bdd(DdStore *s, NodeId id) : store_(s), id_(id) {}

public:
    Bdd() = default;
    DdStore *store() const { return store_; }
    NodeId id() const { return id_; }
    bool valid() const { return store_ != nullptr; }
    bool is_false() const { return id_ == 0; }
    bool is_true() const { return id_ == 1; }

    Bdd operator&(const Bdd &o) const;
    Bdd operator|(const Bdd &o) const;
    Bdd operator^(const Bdd &o) const;
    Bdd operator~() const;
    Bdd &operator&=(const Bdd &o) { return *this = *this & o; }
    Bdd &operator|=(const Bdd &o) { return *this = *this | o; }
    bool operator==(const Bdd &o) const { return store_ == o.store_ && id_ == o.id_; }
};

class Add {
    friend class DdStore;
    DdStore *store_ = nullptr;
    NodeId id_ = 0;
    Add(DdStore *s, NodeId id) : store_(s), id_(id) {}

public:
    Add() = default;
    DdStore *store() const { return store_; }
    NodeId id() const { return id_; }
    bool valid() const { return store_ != nullptr; }

    Add operator+(const Add &o) const;
    Add operator-(const Add &o) const;
    Add operator*(const Add &o) const;
    bool operator==(const Add &o) const { return store_ == o.store_ && id_ == o.id_; }
};

// Edge-valued function: offset + the function rooted at node.
class Ev {
    friend class DdStore;
    DdStore *store_ = nullptr;
    Weight offset_;
    NodeId id_ = 0;
    Ev(DdStore *s, Weight w, NodeId id) : store_(s), offset_(w), id_(id) {}

public:
    Ev() = default;
    DdStore *store() const { return store_; }
    NodeId id() const { return id_; }
    Weight offset() const { return offset_; }
    bool valid() const { return store_ != nullptr; }
    bool is_constant() const { return id_ == 0; }

    Ev operator+(const Ev &o) const;
    Ev operator-(const Ev &o) const;
    Ev operator*(const Ev &o) const;
    bool operator==(const Ev &o) const {
        return store_ == o.store_ && offset_ == o.offset_ && id_ == o.id_;
    }
};

Add min(const Add &a, const Add &b);
Add max(const Add &a, const Add &b);
Ev min(const Ev &a, const Ev &b);
Ev max(const Ev &a, const Ev &b);

struct VarSet {
    uint32_t id = 0;
};
struct Renaming {
    uint32_t id = 0;
};

struct StoreStats {
    size_t bdd_nodes = 0;
    size_t add_nodes = 0;
    size_t ev_nodes = 0;
    size_t total() const { return bdd_nodes + add_nodes + ev_nodes; }
};

// Owns all nodes of the three flavours for one variable order. Nothing is
// ever freed; handles stay valid for the lifetime of the store.
class DdStore {
public:
    explicit DdStore(VarOrder order);
    DdStore(const DdStore &) = delete;
    DdStore &operator=(const DdStore &) = delete;

    const VarOrder &order() const { return order_; }
    size_t num_vars() const { return order_.size(); }
    void set_var_name(VarId v, std::string name);
    std::string var_name(VarId v) const;

    // 0 = unlimited; the constructor reads SYMPLAN_NODE_LIMIT
    void set_node_limit(size_t limit) { node_limit_ = limit; }
    StoreStats stats() const;

    VarSet make_var_set(const std::vector<VarId> &vars);
    Renaming make_renaming(const std::vector<std::pair<VarId, VarId>> &pairs);

    // ---- BDD ----
    Bdd bdd_false() { return {this, 0}; }
    Bdd bdd_true() { return {this, 1}; }
    Bdd literal(VarId v, bool positive = true);
    Bdd cube(const std::vector<std::pair<VarId, bool>> &lits);
    Bdd apply(BoolOp op, const Bdd &a, const Bdd &b);
    Bdd negate(const Bdd &a);
    Bdd ite(const Bdd &c, const Bdd &t, const Bdd &e);
    Bdd exists(const Bdd &a, VarSet vars);
    Bdd and_exists(const Bdd &a, const Bdd &b, VarSet vars);
    Bdd rename(const Bdd &a, Renaming r);
    // Cofactor by a conjunction of literals.
    Bdd restrict(const Bdd &a, const Bdd &cube);
    bool eval(const Bdd &a, const Assignment &s) const;
    Assignment pick_state(const Bdd &a) const;
    // Number of satisfying assignments over the given variables; a must
    // depend only on them.
    long double sat_count(const Bdd &a, size_t num_vars_counted) const;
    size_t node_count(const Bdd &a) const;
    size_t node_count(const std::vector<Bdd> &as) const;
    std::vector<VarId> support(const Bdd &a) const;

    // ---- ADD ----
    Add add_constant(Weight w);
    Add add_from_bdd(const Bdd &b, Weight then_value, Weight else_value);
    Add add_apply(ArithOp op, const Add &f, const Add &g);
    Add add_ite(const Bdd &c, const Add &t, const Add &e);
    Add add_restrict(const Add &f, const Bdd &cube);
    Weight eval(const Add &f, const Assignment &s) const;
    std::vector<Weight> terminals(const Add &f) const;
    Bdd add_equals(const Add &f, Weight w);
    // (value, states) for every finite terminal, ascending by value.
    std::vector<std::pair<Weight, Bdd>> partition_terminals(const Add &f);
    std::optional<Weight> add_max_on(const Add &f, const Bdd &states);
    size_t node_count(const Add &f) const;

    // ---- EV ----
    Ev ev_constant(Weight w);
    // value on states of b, infinity elsewhere.
    Ev ev_from_bdd(const Bdd &b, Weight value = 0);
    Ev ev_apply(ArithOp op, const Ev &f, const Ev &g);
    Ev ev_mask(const Ev &f, const Bdd &b);
    Ev ev_min_abstract(const Ev &f, VarSet vars);
    Ev ev_rename(const Ev &f, Renaming r);
    Ev ev_restrict(const Ev &f, const Bdd &cube);
    Weight eval(const Ev &f, const Assignment &s) const;
    Bdd ev_equals(const Ev &f, Weight w);
    Bdd ev_finite(const Ev &f);
    size_t node_count(const Ev &f) const;

    // Structural invariants of every stored node; returns violations.
    std::vector<std::string> audit() const;

    std::string to_dot(const Bdd &a) const;
    std::string to_dot(const Add &f) const;
    std::string to_dot(const Ev &f) const;

    Level level_of_var(VarId v) const { return order_.level_of(v); }

private:
    struct BddNode {
        Level level;
        NodeId lo, hi;
    };
    struct AddNode {
        Level level;
        NodeId lo, hi;
        Weight value;
    };
    struct EvNode {
        Level level;
        NodeId lo, hi;
        Weight wlo, whi;
    };
    struct EvEdge {
        Weight w;
        NodeId n;
        bool operator==(const EvEdge &) const = default;
    };

    struct Key {
        uint64_t a, b, c, d;
        bool operator==(const Key &) const = default;
    };
    struct KeyHash {
        size_t operator()(const Key &k) const;
    };
    template <class V>
    using Table = std::unordered_map<Key, V, KeyHash>;

    struct VarSetData {
        std::vector<uint8_t> member;  // by level
        Level max_level = 0;
        bool empty = true;
    };

    VarOrder order_;
    std::vector<std::string> names_;
    size_t node_limit_ = 0;

    std::vector<BddNode> bdd_;
    std::vector<AddNode> add_;
    std::vector<EvNode> ev_;
    Table<NodeId> bdd_unique_, add_unique_, ev_unique_;
    std::unordered_map<int64_t, NodeId> add_terminals_;
    Table<NodeId> bdd_cache_, add_cache_;
    Table<EvEdge> ev_cache_;
    Table<int64_t> weight_cache_;

    std::vector<VarSetData> var_sets_;
    std::unordered_map<std::string, uint32_t> var_set_ids_;
    std::vector<std::vector<Level>> renamings_;  // new level by old level
    std::unordered_map<std::string, uint32_t> renaming_ids_;

    void check_limit();
    void check(const Bdd &a) const;
    void check(const Add &a) const;
    void check(const Ev &a) const;

    Level blevel(NodeId n) const { return bdd_[n].level; }
    Level alevel(NodeId n) const { return add_[n].level; }
    Level elevel(NodeId n) const { return ev_[n].level; }

    NodeId make_bdd(Level l, NodeId lo, NodeId hi);
    NodeId bdd_apply_rec(BoolOp op, NodeId a, NodeId b);
    NodeId bdd_not_rec(NodeId a);
    NodeId bdd_ite_rec(NodeId c, NodeId t, NodeId e);
    NodeId exists_rec(NodeId a, uint32_t set);
    NodeId and_exists_rec(NodeId a, NodeId b, uint32_t set);
    NodeId rename_rec(NodeId a, uint32_t r);
    NodeId bdd_restrict_rec(NodeId a, NodeId cube);

    NodeId add_terminal(Weight w);
    NodeId make_add(Level l, NodeId lo, NodeId hi);
    NodeId add_apply_rec(ArithOp op, NodeId f, NodeId g);
    NodeId add_from_bdd_rec(NodeId b, NodeId t, NodeId e);
    NodeId add_ite_rec(NodeId c, NodeId t, NodeId e);
    NodeId add_restrict_rec(NodeId f, NodeId cube);
    NodeId add_equals_rec(NodeId f, Weight w);
    int64_t add_max_on_rec(NodeId f, NodeId s);

    EvEdge make_ev(Level l, EvEdge lo, EvEdge hi);
    EvEdge ev_cofactor(EvEdge e, Level top, bool high) const;
    EvEdge ev_apply_rec(ArithOp op, EvEdge f, EvEdge g);
    EvEdge ev_min_abstract_rec(NodeId n, uint32_t set);
    EvEdge ev_rename_rec(NodeId n, uint32_t r);
    EvEdge ev_restrict_rec(NodeId n, NodeId cube);
    EvEdge ev_from_bdd_rec(NodeId b);
    NodeId ev_equals_rec(NodeId n, Weight target);
    NodeId ev_finite_rec(NodeId n);
};

}  // namespace symplan::dd

#endif
