#ifndef SYMPLAN_ORACLE_ORACLE_H
#define SYMPLAN_ORACLE_ORACLE_H

#include "symplan/task/task.h"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Explicit-state reference implementations. Nothing here touches decision
// diagrams.
namespace symplan::oracle {

class OracleLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr size_t kDefaultStateCap = 2'000'000;

struct OptimalResult {
    bool solvable = false;
    int64_t cost = 0;
    std::vector<int> plan;
};

struct RankedPlan {
    std::vector<int> ops;
    int64_t cost = 0;
    int64_t utility = 0;
};

struct OspResult {
    bool found = false;
    int64_t utility = 0;
    int64_t cost = 0;
    std::vector<int> plan;
};

struct PlanCheck {
    bool valid = false;
    int64_t cost = 0;
    int64_t utility = 0;
    std::string error;
};

// Dijkstra over explicit states; respects the cost bound.
OptimalResult oracle_optimal(const task::Task &t, size_t state_cap = kDefaultStateCap);

// The k cheapest plans (cost ascending; order within a cost is arbitrary).
// Throws on tasks with reachable zero-cost cycles on goal paths when more
// plans are requested than exist without them.
std::vector<RankedPlan> oracle_topk(const task::Task &t, size_t k,
                                    size_t state_cap = kDefaultStateCap);

// Highest final-state utility among plans within the bound, cheapest first.
OspResult oracle_osp(const task::Task &t, size_t state_cap = kDefaultStateCap);

// All plans within a finite bound ranked by (utility desc, cost asc),
// truncated to k.
std::vector<RankedPlan> oracle_topk_osp(const task::Task &t, size_t k,
                                        size_t plan_cap = 100000);

// True if some zero-cost cycle lies on a path from the initial state to a
// goal state.
bool has_zero_cost_cycle(const task::Task &t, size_t state_cap = kDefaultStateCap);

PlanCheck validate_plan(const task::Task &t, const std::vector<int> &ops);

// Number of reachable primary states.
size_t count_reachable(const task::Task &t, size_t state_cap = kDefaultStateCap);

enum class Profile { Plain, Axioms, Sdac, Osp };

struct GeneratedTask {
    task::Task task;
    int quartile = 0;  // OSP only: bound = quartile/4 of sampled_cost
    int64_t sampled_cost = 0;
};

GeneratedTask random_task(uint64_t seed, Profile profile);

Profile parse_profile(const std::string &s);

}  // namespace symplan::oracle

#endif
