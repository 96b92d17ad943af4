#ifndef SYMPLAN_SEARCH_UCS_H
#define SYMPLAN_SEARCH_UCS_H

#include "symplan/search/common.h"

namespace symplan::search {

// Optimal plan within the task's cost bound. Backward and bidirectional
// search need a space without derived bits.
SearchResult uniform_cost_search(const symbolic::SearchSpace &sp, Direction dir);

// Forward search whose open list is one edge-valued diagram over states;
// needs a space without derived bits.
SearchResult ev_search(const symbolic::SearchSpace &sp);

}  // namespace symplan::search

#endif
