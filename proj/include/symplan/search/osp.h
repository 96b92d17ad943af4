#ifndef SYMPLAN_SEARCH_OSP_H
#define SYMPLAN_SEARCH_OSP_H

#include "symplan/search/common.h"

namespace symplan::search {

enum class UtilityRepr { Bdd, Add };
UtilityRepr parse_utility_repr(const std::string &s);  // "bdd" | "add"

// Utility function in one of two shapes: the compiled ADD, or one BDD per
// utility value (descending).
class UtilityFunction {
public:
    UtilityFunction(const symbolic::SearchSpace &sp, UtilityRepr repr);

    // Highest utility reached inside states, and the states reaching it.
    std::optional<std::pair<int64_t, dd::Bdd>> best_subset(const dd::Bdd &states) const;
    const std::vector<std::pair<int64_t, dd::Bdd>> &levels() const { return levels_; }
    size_t size() const;  // diagram nodes of the chosen shape

private:
    const symbolic::SearchSpace &sp_;
    UtilityRepr repr_;
    dd::Add add_;
    std::vector<std::pair<int64_t, dd::Bdd>> levels_;  // descending, restricted to valid
};

struct OspOptions {
    UtilityRepr repr = UtilityRepr::Bdd;
    // stop once the largest utility of any valid goal state is reached
    bool early_exit = true;
};

// Plan ending in a goal state of maximal utility within the cost bound; among
// those, a cheapest one. Tasks without a utility score every state 0.
SearchResult osp_search(const symbolic::SearchSpace &sp, OspOptions opts = {});

// True if some plan within the bound reaches utility at least u.
bool bounded_utility_check(const symbolic::SearchSpace &sp, int64_t u, OspOptions opts = {});

}  // namespace symplan::search

#endif
