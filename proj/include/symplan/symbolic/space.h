#ifndef SYMPLAN_SYMBOLIC_SPACE_H
#define SYMPLAN_SYMBOLIC_SPACE_H

#include "symplan/symbolic/encoding.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symplan::symbolic {

// How derived variables enter the search.
//  OBased:    derived bits are part of the state; rules are applied as
//             transition relations to a fixpoint after every image.
//  VBased:    derived bits are part of the state; each is tied to its
//             primary representation after every image.
//  Translate: no derived bits; derived literals are replaced by their
//             primary representation when building conditions.
enum class AxiomMode { OBased, VBased, Translate };
AxiomMode parse_axiom_mode(const std::string &s);
std::string to_string(AxiomMode m);

struct SpaceOptions {
    OrderKind order = OrderKind::Interleaved;
    AxiomMode axioms = AxiomMode::Translate;
    // Every transition cost is multiplied by this (fraction heuristics).
    int64_t cost_scale = 1;
};

// One operator restricted to the states where it has one cost value.
struct TrPart {
    int op;
    dd::Weight cost;
    dd::Bdd rel;
};

// All operators of one cost value.
struct TransitionRelation {
    dd::Weight cost;
    dd::Bdd rel;
    std::vector<int> ops;
};

class SearchSpace {
public:
    explicit SearchSpace(const task::Task &t, SpaceOptions opts = {});
    SearchSpace(const SearchSpace &) = delete;
    SearchSpace &operator=(const SearchSpace &) = delete;

    const task::Task &task() const { return task_; }
    const Encoding &enc() const { return enc_; }
    dd::DdStore &store() const { return enc_.store(); }
    const SpaceOptions &options() const { return opts_; }
    bool has_derived_bits() const { return derived_bits_; }

    dd::Bdd init() const { return init_; }
    dd::Bdd goal() const { return goal_; }
    // Every encodable state (with consistent derived bits when present).
    dd::Bdd valid() const { return valid_; }

    dd::Bdd fact(int var, int val) const;
    dd::Bdd condition(const task::PartialAssignment &pa) const;
    // Primary representation of a derived variable: the primary states in
    // which it evaluates to true.
    dd::Bdd primary_repr(int derived_var) const;

    // Per-operator parts, sorted by descending cost then operator index.
    const std::vector<TrPart> &parts() const { return parts_; }
    // Parts merged by cost, ascending.
    const std::vector<TransitionRelation> &trs() const { return trs_; }
    // Union of every transition.
    dd::Bdd any_tr() const { return any_tr_; }
    std::vector<size_t> tr_sizes() const;
    // Operators dropped because no valid state satisfies their precondition.
    const std::vector<std::string> &warnings() const { return warnings_; }
    dd::Weight max_cost() const;

    dd::Bdd image(const dd::Bdd &s, const dd::Bdd &rel) const;
    dd::Bdd preimage(const dd::Bdd &s, const dd::Bdd &rel) const;
    // Derived closure of a set whose derived bits are arbitrary.
    dd::Bdd expand(const dd::Bdd &s) const;
    dd::Bdd o_based_expand(const dd::Bdd &s) const;
    dd::Bdd v_based_expand(const dd::Bdd &s) const;

    // States reachable from / able to reach the given set (costs ignored).
    dd::Bdd forward_closure(const dd::Bdd &from) const;
    dd::Bdd backward_closure(const dd::Bdd &to) const;

    dd::Add compile_add(const task::Expr &e) const;
    dd::Ev compile_ev(const task::Expr &e) const;
    // Per operator: cost on transitions, infinity elsewhere (scaled).
    const std::vector<dd::Ev> &ev_trs() const;
    dd::Ev ev_image(const dd::Ev &open, const dd::Ev &tr) const;

    dd::Bdd state_bdd(const dd::Assignment &a) const { return enc_.state_cube(a); }
    // Primary task values of a picked assignment.
    std::vector<int> decode(const dd::Assignment &a) const;
    // Up to cap members of s in pick_state order.
    std::vector<dd::Assignment> enumerate(const dd::Bdd &s, size_t cap = SIZE_MAX) const;
    long double count(const dd::Bdd &s) const;

private:
    task::Task task_;
    SpaceOptions opts_;
    bool derived_bits_;
    Encoding enc_;
    std::map<int, dd::Bdd> repr_;
    dd::Bdd init_, goal_, valid_, domain_;
    std::vector<TrPart> parts_;
    std::vector<TransitionRelation> trs_;
    dd::Bdd any_tr_;
    std::vector<std::vector<dd::Bdd>> axiom_layer_trs_;     // O-based
    std::vector<std::vector<dd::Bdd>> axiom_layer_checks_;  // body -> head
    mutable std::vector<dd::Ev> ev_trs_;
    std::vector<std::string> warnings_;

    void build_primary_repr();
    void build_axiom_trs();
    void build_trs();
    dd::Bdd var_value_any(int var, int val) const;
};

}  // namespace symplan::symbolic

#endif
