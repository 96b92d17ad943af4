#ifndef SYMPLAN_SYMBOLIC_ENCODING_H
#define SYMPLAN_SYMBOLIC_ENCODING_H

#include "symplan/dd/store.h"
#include "symplan/task/task.h"

#include <memory>
#include <string>
#include <vector>

namespace symplan::symbolic {

// Interleaved: every unprimed bit is directly followed by its primed copy.
// File: all unprimed bits in task-variable order, then all primed bits.
enum class OrderKind { Interleaved, File };
OrderKind parse_order(const std::string &s);

// Binary encoding of (a subset of) the task variables, MSB first, with
// ceil(log2 |D|) bits per variable. Owns the store.
class Encoding {
public:
    Encoding(const task::Task &t, OrderKind order, bool include_derived);

    dd::DdStore &store() const { return *store_; }
    const task::Task &task() const { return task_; }

    bool encoded(int var) const { return encoded_[var]; }
    const std::vector<dd::VarId> &bits(int var, bool primed) const {
        return primed ? pbits_[var] : ubits_[var];
    }
    size_t num_state_bits() const { return unprimed_all_.size(); }
    const std::vector<dd::VarId> &unprimed_bits() const { return unprimed_all_; }

    dd::Bdd value(int var, int val, bool primed = false) const;
    // Codes below the domain size.
    dd::Bdd domain(int var, bool primed = false) const;
    // var' = var
    dd::Bdd frame(int var) const;

    dd::VarSet unprimed_set() const { return unprimed_set_; }
    dd::VarSet primed_set() const { return primed_set_; }
    dd::VarSet derived_set() const { return derived_set_; }
    dd::Renaming to_unprimed() const { return to_unprimed_; }
    dd::Renaming to_primed() const { return to_primed_; }

    // Cube over all unprimed (or primed) state bits taking the values of
    // the unprimed bits in a.
    dd::Bdd state_cube(const dd::Assignment &a, bool primed = false) const;
    // Task values of the encoded variables; 0 elsewhere.
    std::vector<int> decode(const dd::Assignment &a) const;
    dd::Bdd state(const std::vector<int> &values) const;

private:
    const task::Task &task_;
    std::unique_ptr<dd::DdStore> store_;
    std::vector<bool> encoded_;
    std::vector<std::vector<dd::VarId>> ubits_, pbits_;
    std::vector<dd::VarId> unprimed_all_;
    dd::VarSet unprimed_set_, primed_set_, derived_set_;
    dd::Renaming to_unprimed_, to_primed_;
};

}  // namespace symplan::symbolic

#endif
