#ifndef SYMPLAN_TASK_TASK_H
#define SYMPLAN_TASK_TASK_H

#include "symplan/task/expr.h"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplan::task {

class TaskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure; the message carries the line number.
class ParseError : public TaskError {
public:
    using TaskError::TaskError;
};

enum class Metric { Unit, General };

struct Variable {
    std::string name;
    int domain = 2;
    bool derived = false;
    int layer = 0;  // 1-based for derived variables
    bool operator==(const Variable &) const = default;
};

struct Fact {
    int var;
    int value;
    auto operator<=>(const Fact &) const = default;
};

// Sorted by variable, at most one fact per variable.
using PartialAssignment = std::vector<Fact>;

struct Operator {
    std::string name;
    PartialAssignment pre;
    PartialAssignment eff;
    Expr cost = Expr::constant(1);
    bool operator==(const Operator &) const = default;
};

struct Axiom {
    int head;
    std::vector<Fact> body;
    bool operator==(const Axiom &) const = default;
};

struct Task {
    Metric metric = Metric::Unit;
    std::vector<Variable> vars;
    std::vector<Operator> ops;
    std::vector<Axiom> axioms;
    std::vector<int> init;  // one entry per variable; derived entries are 0
    PartialAssignment goal;
    std::optional<int64_t> bound;  // nullopt = infinite
    std::optional<Expr> utility;
    int k = 1;

    bool operator==(const Task &) const = default;

    int num_layers() const;
    bool has_axioms() const { return !axioms.empty(); }
    bool has_state_dependent_costs() const;
    int var_index(const std::string &name) const;  // -1 if unknown
    int op_index(const std::string &name) const;
    std::vector<std::string> var_names() const;
    std::vector<int> primary_vars() const;
    std::vector<int> derived_vars() const;
    size_t num_primary_bits() const;
};

// Throws TaskError with a descriptive message.
void validate(const Task &t);

// Brute-force reading of the stratification conditions.
bool is_stratified(const Task &t);

Task parse_task(const std::string &text);
Task load_task(const std::string &path);
std::string serialize(const Task &t);

bool satisfies(const std::vector<int> &state, const PartialAssignment &pa);

// Successor of a primary state; derived entries of the result are reset to 0.
// extended is the state with derived values evaluated.
std::vector<int> apply_operator(const Task &t, const std::vector<int> &state, int op,
                                const std::vector<int> &extended);

// Cost of op in an extended state; throws TaskError if negative.
int64_t operator_cost(const Task &t, int op, const std::vector<int> &extended);
int64_t state_utility(const Task &t, const std::vector<int> &extended);

struct Plan {
    std::vector<int> ops;
    int64_t cost = 0;
    std::optional<int64_t> utility;
    bool operator==(const Plan &) const = default;
};

std::string plan_to_string(const Task &t, const Plan &p);

inline int bits_for_domain(int d) {
    int b = 0;
    while ((1 << b) < d)
        ++b;
    return b;
}

}  // namespace symplan::task

#endif
