#include "symplan/oracle/oracle.h"

#include "symplan/axioms/evaluate.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

using namespace std;
using namespace symplan::task;

namespace symplan::oracle {

namespace {

constexpr int64_t kInf = numeric_limits<int64_t>::max();

struct VecHash {
    size_t operator()(const vector<int> &v) const {
        size_t h = 1469598103934665603ULL;
        for (int x : v)
            h = (h ^ size_t(x + 1)) * 1099511628211ULL;
        return h;
    }
};

struct Edge {
    int op;
    int target;
    int64_t cost;
};

// Reachable state graph, built eagerly.
class StateGraph {
public:
    const Task &t;
    vector<vector<int>> states;
    vector<vector<int>> extended;
    vector<vector<Edge>> succ;
    vector<vector<Edge>> pred;  // Edge.target is the predecessor
    vector<bool> goal;

    StateGraph(const Task &task, size_t cap) : t(task) {
        unordered_map<vector<int>, int, VecHash> ids;
        auto id_of = [&](const vector<int> &s) {
            auto [it, inserted] = ids.emplace(s, int(states.size()));
            if (inserted) {
                if (states.size() >= cap)
                    throw OracleLimitExceeded("oracle state cap exceeded");
                states.push_back(s);
            }
            return it->second;
        };
        id_of(t.init);
        for (size_t i = 0; i < states.size(); ++i) {
            vector<int> s = states[i];
            vector<int> ext = axioms::evaluate_axioms(t, s);
            extended.push_back(ext);
            goal.push_back(satisfies(ext, t.goal));
            vector<Edge> out;
            for (size_t o = 0; o < t.ops.size(); ++o) {
                if (!satisfies(ext, t.ops[o].pre))
                    continue;
                int64_t c = operator_cost(t, int(o), ext);
                vector<int> n = apply_operator(t, s, int(o), ext);
                out.push_back({int(o), id_of(n), c});
            }
            succ.push_back(std::move(out));
        }
        pred.resize(states.size());
        for (size_t i = 0; i < states.size(); ++i)
            for (const Edge &e : succ[i])
                pred[e.target].push_back({e.op, int(i), e.cost});
    }

    size_t size() const { return states.size(); }

    // Goal distances (perfect heuristic) by backward Dijkstra.
    vector<int64_t> goal_distance() const {
        vector<int64_t> d(size(), kInf);
        using Item = pair<int64_t, int>;
        priority_queue<Item, vector<Item>, greater<>> q;
        for (size_t i = 0; i < size(); ++i)
            if (goal[i]) {
                d[i] = 0;
                q.push({0, int(i)});
            }
        while (!q.empty()) {
            auto [g, s] = q.top();
            q.pop();
            if (g > d[s])
                continue;
            for (const Edge &e : pred[s]) {
                int64_t ng = g + e.cost;
                if (ng < d[e.target]) {
                    d[e.target] = ng;
                    q.push({ng, e.target});
                }
            }
        }
        return d;
    }

    // Forward Dijkstra from the initial state (id 0).
    void forward(vector<int64_t> &dist, vector<pair<int, int>> &parent) const {
        dist.assign(size(), kInf);
        parent.assign(size(), {-1, -1});
        using Item = pair<int64_t, int>;
        priority_queue<Item, vector<Item>, greater<>> q;
        dist[0] = 0;
        q.push({0, 0});
        while (!q.empty()) {
            auto [g, s] = q.top();
            q.pop();
            if (g > dist[s])
                continue;
            for (const Edge &e : succ[s]) {
                int64_t ng = g + e.cost;
                if (ng < dist[e.target]) {
                    dist[e.target] = ng;
                    parent[e.target] = {s, e.op};
                    q.push({ng, e.target});
                }
            }
        }
    }

    vector<int> path_to(int s, const vector<pair<int, int>> &parent) const {
        vector<int> ops;
        while (parent[s].first >= 0) {
            ops.push_back(parent[s].second);
            s = parent[s].first;
        }
        reverse(ops.begin(), ops.end());
        return ops;
    }
};

int64_t bound_of(const Task &t) { return t.bound ? *t.bound : kInf; }

// Best-first enumeration of plans in cost order, pruned by goal distance
// and the bound. visit returns false to stop.
void enumerate_plans(const StateGraph &g, const function<bool(const vector<int> &, int64_t, int)> &visit,
                     size_t node_cap) {
    vector<int64_t> h = g.goal_distance();
    int64_t B = bound_of(g.t);
    struct PathNode {
        int state;
        int parent;
        int op;
        int64_t cost;
    };
    vector<PathNode> nodes;
    using Item = tuple<int64_t, int64_t, int>;  // f, sequence, node
    priority_queue<Item, vector<Item>, greater<>> q;
    if (h[0] == kInf || h[0] > B)
        return;
    nodes.push_back({0, -1, -1, 0});
    int64_t seq = 0;
    q.push({h[0], seq++, 0});
    while (!q.empty()) {
        auto [f, unused, ni] = q.top();
        (void)unused;
        q.pop();
        PathNode n = nodes[ni];
        if (g.goal[n.state]) {
            vector<int> ops;
            for (int i = ni; nodes[i].parent >= 0; i = nodes[i].parent)
                ops.push_back(nodes[i].op);
            reverse(ops.begin(), ops.end());
            if (!visit(ops, n.cost, n.state))
                return;
        }
        for (const Edge &e : g.succ[n.state]) {
            if (h[e.target] == kInf)
                continue;
            int64_t ng = n.cost + e.cost;
            if (ng + h[e.target] > B)
                continue;
            if (nodes.size() >= node_cap)
                throw OracleLimitExceeded("oracle path enumeration cap exceeded");
            nodes.push_back({e.target, ni, e.op, ng});
            q.push({ng + h[e.target], seq++, int(nodes.size() - 1)});
        }
    }
}

}  // namespace

OptimalResult oracle_optimal(const Task &t, size_t state_cap) {
    StateGraph g(t, state_cap);
    vector<int64_t> dist;
    vector<pair<int, int>> parent;
    g.forward(dist, parent);
    OptimalResult r;
    int best = -1;
    for (size_t i = 0; i < g.size(); ++i)
        if (g.goal[i] && dist[i] != kInf && (best < 0 || dist[i] < dist[best]))
            best = int(i);
    if (best < 0 || dist[best] > bound_of(t))
        return r;
    r.solvable = true;
    r.cost = dist[best];
    r.plan = g.path_to(best, parent);
    return r;
}

vector<RankedPlan> oracle_topk(const Task &t, size_t k, size_t state_cap) {
    StateGraph g(t, state_cap);
    vector<RankedPlan> plans;
    if (k == 0)
        return plans;
    enumerate_plans(
        g,
        [&](const vector<int> &ops, int64_t cost, int s) {
            plans.push_back({ops, cost, t.utility ? state_utility(t, g.extended[s]) : 0});
            return plans.size() < k;
        },
        50'000'000);
    return plans;
}

OspResult oracle_osp(const Task &t, size_t state_cap) {
    StateGraph g(t, state_cap);
    vector<int64_t> dist;
    vector<pair<int, int>> parent;
    g.forward(dist, parent);
    OspResult r;
    int best = -1;
    int64_t best_u = -1;
    for (size_t i = 0; i < g.size(); ++i) {
        if (!g.goal[i] || dist[i] == kInf || dist[i] > bound_of(t))
            continue;
        int64_t u = state_utility(t, g.extended[i]);
        if (best < 0 || u > best_u || (u == best_u && dist[i] < dist[best])) {
            best = int(i);
            best_u = u;
        }
    }
    if (best < 0)
        return r;
    r.found = true;
    r.utility = best_u;
    r.cost = dist[best];
    r.plan = g.path_to(best, parent);
    return r;
}

vector<RankedPlan> oracle_topk_osp(const Task &t, size_t k, size_t plan_cap) {
    if (!t.bound)
        throw OracleLimitExceeded("ranking all plans needs a finite bound");
    StateGraph g(t, kDefaultStateCap);
    vector<RankedPlan> plans;
    enumerate_plans(
        g,
        [&](const vector<int> &ops, int64_t cost, int s) {
            plans.push_back({ops, cost, state_utility(t, g.extended[s])});
            if (plans.size() > plan_cap)
                throw OracleLimitExceeded("too many plans within the bound");
            return true;
        },
        50'000'000);
    stable_sort(plans.begin(), plans.end(), [](const RankedPlan &a, const RankedPlan &b) {
        if (a.utility != b.utility)
            return a.utility > b.utility;
        return a.cost < b.cost;
    });
    if (plans.size() > k)
        plans.resize(k);
    return plans;
}

bool has_zero_cost_cycle(const Task &t, size_t state_cap) {
    StateGraph g(t, state_cap);
    vector<int64_t> h = g.goal_distance();
    // 0 = unvisited, 1 = on stack, 2 = done
    vector<uint8_t> color(g.size(), 0);
    for (size_t root = 0; root < g.size(); ++root) {
        if (color[root] || h[root] == kInf)
            continue;
        vector<pair<int, size_t>> stack{{int(root), 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto &[s, idx] = stack.back();
            if (idx < g.succ[s].size()) {
                const Edge &e = g.succ[s][idx++];
                if (e.cost != 0 || h[e.target] == kInf)
                    continue;
                if (color[e.target] == 1)
                    return true;
                if (color[e.target] == 0) {
                    color[e.target] = 1;
                    stack.push_back({e.target, 0});
                }
            } else {
                color[s] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

size_t count_reachable(const Task &t, size_t state_cap) { return StateGraph(t, state_cap).size(); }

PlanCheck validate_plan(const Task &t, const vector<int> &ops) {
    PlanCheck r;
    vector<int> s = t.init;
    try {
        for (int o : ops) {
            if (o < 0 || o >= int(t.ops.size())) {
                r.error = "unknown operator";
                return r;
            }
            vector<int> ext = axioms::evaluate_axioms(t, s);
            if (!satisfies(ext, t.ops[o].pre)) {
                r.error = "operator " + t.ops[o].name + " is not applicable";
                return r;
            }
            r.cost += operator_cost(t, o, ext);
            s = apply_operator(t, s, o, ext);
        }
        vector<int> ext = axioms::evaluate_axioms(t, s);
        if (!satisfies(ext, t.goal)) {
            r.error = "final state is not a goal state";
            return r;
        }
        if (t.bound && r.cost > *t.bound) {
            r.error = "plan exceeds the cost bound";
            return r;
        }
        r.utility = state_utility(t, ext);
    } catch (const TaskError &e) {
        r.error = e.what();
        return r;
    }
    r.valid = true;
    return r;
}

}  // namespace symplan::oracle
