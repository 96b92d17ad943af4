#ifndef SYMPLAN_SEARCH_TOPK_H
#define SYMPLAN_SEARCH_TOPK_H

#include "symplan/search/common.h"
#include "symplan/search/osp.h"

namespace symplan::search {

// Asked for every plan while infinitely many exist.
class TopkUnbounded : public SearchError {
public:
    using SearchError::SearchError;
};

inline constexpr size_t kAllPlans = SIZE_MAX;

struct TopkPlan {
    std::vector<int> ops;
    int64_t cost = 0;
    std::optional<int64_t> utility;
};

struct TopkResult {
    std::vector<TopkPlan> plans;  // cost ascending
    SearchStats stats;
};

struct TopkOptions {
    size_t k = 1;
    Direction dir = Direction::Bidirectional;
    // drop states already seen at a lower cost; loses plans, kept only to
    // show what goes wrong without it
    bool closing = false;
};

// The k cheapest plans within the cost bound. Plans of equal cost come out
// ordered by their longest run of zero-cost operators. goal overrides the
// task's goal states.
TopkResult topk_search(const symbolic::SearchSpace &sp, TopkOptions opts,
                       std::optional<dd::Bdd> goal = std::nullopt);

// The k best plans by utility (descending), then cost (ascending).
TopkResult topk_osp_search(const symbolic::SearchSpace &sp, size_t k,
                           UtilityRepr repr = UtilityRepr::Bdd);

}  // namespace symplan::search

#endif
