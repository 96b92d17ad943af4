#ifndef SYMPLAN_SEARCH_ASTAR_H
#define SYMPLAN_SEARCH_ASTAR_H

#include "symplan/search/common.h"

namespace symplan::search {

// Heuristic as (h, states) pairs; h may be infinite. Disjoint and covering
// every valid state.
struct HeuristicBuckets {
    std::vector<std::pair<dd::Weight, dd::Bdd>> buckets;
};

HeuristicBuckets blind_heuristic(const symbolic::SearchSpace &sp);
// Goal distances by an exhaustive backward sweep, in the space's cost units.
HeuristicBuckets perfect_heuristic(const symbolic::SearchSpace &sp);
// Multiplies finite values by num and divides them by den; every finite
// value must be divisible by den after the multiplication.
HeuristicBuckets scale_heuristic(const HeuristicBuckets &h, int64_t num, int64_t den);

class InconsistentHeuristic : public SearchError {
public:
    using SearchError::SearchError;
};

// Violations of coverage, disjointness, goal-zero and consistency.
std::vector<std::string> audit_heuristic(const symbolic::SearchSpace &sp, const HeuristicBuckets &h);

struct AstarResult : SearchResult {
    // (g, h) of every expanded set, in the space's cost units
    std::vector<std::pair<int64_t, int64_t>> trace;
    // node counts of the per-f unions of expanded sets, summed over f
    size_t expansion_size_f_ordered = 0;
};

// Expands S_{g,h} sets by ascending f, then ascending g. With audit set, an
// inconsistent heuristic throws before the search starts.
AstarResult bdda_star(const symbolic::SearchSpace &sp, const HeuristicBuckets &h, bool audit = false);

struct HeuristicSpec {
    enum class Kind { Blind, Perfect, Fraction } kind = Kind::Blind;
    int64_t num = 0, den = 1;
};
// "blind", "perfect" or "fraction:P/Q" with 0 <= P/Q <= 1.
HeuristicSpec parse_heuristic(const std::string &s);

// Builds a space whose costs are scaled by the fraction's denominator and
// runs BDDA* with the requested heuristic. Reported plan cost is unscaled.
AstarResult run_astar(const task::Task &t, const HeuristicSpec &h, symbolic::SpaceOptions opts = {},
                      bool audit = false);

// Tasks on which the perfect heuristic inflates expanded diagrams: after a
// setup phase fixing v1..v2n, a wait chain of m steps runs before finishing
// cheaply when some (v_i and v_{n+i}) holds. Variable order: done, counter,
// v1..vn, vn+1..v2n. m defaults to 2n.
task::Task blowup_family(int n, int m = -1);

}  // namespace symplan::search

#endif
