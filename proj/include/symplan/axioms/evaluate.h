#ifndef SYMPLAN_AXIOMS_EVALUATE_H
#define SYMPLAN_AXIOMS_EVALUATE_H

#include "symplan/task/task.h"

#include <vector>

namespace symplan::axioms {

// Extended state: derived variables start false, then each layer is
// saturated in order.
std::vector<int> evaluate_axioms(const task::Task &t, const std::vector<int> &state);

}  // namespace symplan::axioms

#endif
