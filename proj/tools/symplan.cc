// symplan: symbolic planner command line.
#include "CLI11.hpp"
#include "json.hpp"

#include "symplan/dd/store.h"
#include "symplan/oracle/oracle.h"
#include "symplan/search/astar.h"
#include "symplan/search/osp.h"
#include "symplan/search/topk.h"
#include "symplan/search/ucs.h"
#include "symplan/symbolic/space.h"

#include <fstream>
#include <iostream>

using namespace std;
using namespace symplan;
using namespace symplan::task;
using namespace symplan::symbolic;
using namespace symplan::search;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kNoPlan = 1, kUsage = 2, kMismatch = 3, kNodeLimit = 4 };

struct UsageError : runtime_error {
    using runtime_error::runtime_error;
};

struct Config {
    string task_path;
    string direction = "bid";
    string axioms = "translate";
    string order = "interleaved";
    string heuristic = "blind";
    string k = "1";
    string utility_repr = "bdd";
    string tr = "bdd";
    string stats_path;
    string plan_path = "sas_plan";
    bool oracle = false;
    bool by_utility = false;
    // gen
    string profile = "plain";
    uint64_t seed = 0;
    int n = 8, m = -1;
    string out_path;
    // dump-dd
    string what = "goal";
};

struct Outcome {
    vector<TopkPlan> plans;
    SearchStats stats;
    optional<size_t> f_ordered;
};

void write_plan(const Task &t, const string &path, const TopkPlan &p) {
    ofstream out(path);
    if (!out)
        throw runtime_error("cannot write " + path);
    out << plan_to_string(t, {p.ops, p.cost, p.utility});
}

void write_stats(const Config &c, const string &mode, const SearchSpace &sp, const Outcome &o,
                 double total_ms) {
    if (c.stats_path.empty())
        return;
    json j;
    j["mode"] = mode;
    j["plan_cost"] = o.plans.empty() ? json(nullptr) : json(o.plans.front().cost);
    j["plan_utility"] =
        o.plans.empty() || !o.plans.front().utility ? json(nullptr) : json(*o.plans.front().utility);
    j["expansions"] = o.stats.expansions;
    j["expansion_size"] = o.stats.expansion_size;
    j["image_time_ms"] = o.stats.image_time_ms;
    j["total_time_ms"] = total_ms;
    j["peak_live_nodes"] = o.stats.peak_live_nodes;
    j["tr_sizes"] = sp.tr_sizes();
    if (o.f_ordered)
        j["expansion_size_f_ordered"] = *o.f_ordered;
    if (c.stats_path == "-") {
        cout << j.dump(2) << "\n";
    } else {
        ofstream out(c.stats_path);
        out << j.dump(2) << "\n";
    }
}

size_t parse_k(const string &s) {
    if (s == "all" || s == "inf")
        return kAllPlans;
    try {
        size_t used = 0;
        long long v = stoll(s, &used);
        if (used == s.size() && v >= 0)
            return size_t(v);
    } catch (const exception &) {
    }
    throw UsageError("--k needs a non-negative integer or 'all'");
}

template <class F>
auto usage(F f) {
    try {
        return f();
    } catch (const invalid_argument &e) {
        throw UsageError(e.what());
    }
}

// Plans must replay and report what the replay gives.
bool plans_replay(const Task &t, const vector<TopkPlan> &plans) {
    for (const TopkPlan &p : plans) {
        auto c = oracle::validate_plan(t, p.ops);
        if (!c.valid || c.cost != p.cost || (p.utility && *p.utility != c.utility)) {
            cerr << "oracle: plan does not replay: " << (c.valid ? "cost/utility differ" : c.error) << "\n";
            return false;
        }
    }
    return true;
}

bool oracle_check(const string &cmd, const Config &c, const Task &t, const Outcome &o) {
    if (!plans_replay(t, o.plans))
        return false;
    auto mismatch = [](const string &what) {
        cerr << "oracle mismatch: " << what << "\n";
        return false;
    };
    if (cmd == "solve" || cmd == "astar") {
        auto r = oracle::oracle_optimal(t);
        if (r.solvable != !o.plans.empty())
            return mismatch("solvability");
        if (r.solvable && r.cost != o.plans.front().cost)
            return mismatch("cost " + to_string(o.plans.front().cost) + " vs " + to_string(r.cost));
        return true;
    }
    if (cmd == "osp") {
        auto r = oracle::oracle_osp(t);
        if (r.found != !o.plans.empty())
            return mismatch("solvability");
        if (r.found && (r.utility != o.plans.front().utility || r.cost != o.plans.front().cost))
            return mismatch("utility/cost");
        return true;
    }
    size_t k = parse_k(c.k);
    if (c.by_utility) {
        auto r = oracle::oracle_topk_osp(t, k);
        if (r.size() != o.plans.size())
            return mismatch("plan count");
        for (size_t i = 0; i < r.size(); ++i)
            if (r[i].utility != o.plans[i].utility || r[i].cost != o.plans[i].cost)
                return mismatch("ranking at position " + to_string(i + 1));
        return true;
    }
    auto r = oracle::oracle_topk(t, k);
    if (r.size() != o.plans.size())
        return mismatch("plan count");
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i].cost != o.plans[i].cost)
            return mismatch("cost at position " + to_string(i + 1));
    return true;
}

int run_search(const string &cmd, const Config &c) {
    Stopwatch total;
    Task t = load_task(c.task_path);
    SpaceOptions opts;
    opts.order = usage([&] { return parse_order(c.order); });
    opts.axioms = usage([&] { return parse_axiom_mode(c.axioms); });
    Direction dir = usage([&] { return parse_direction(c.direction); });
    bool encoded_axioms = opts.axioms != AxiomMode::Translate && t.has_axioms();
    if (encoded_axioms && dir != Direction::Forward && cmd != "osp" && cmd != "astar")
        throw UsageError("--direction " + c.direction + " needs --axioms translate");
    if (cmd == "solve" && c.tr == "ev" && encoded_axioms)
        throw UsageError("--tr ev needs --axioms translate");

    Outcome o;
    string mode = cmd;
    unique_ptr<SearchSpace> sp;
    if (cmd == "astar") {
        HeuristicSpec h = usage([&] { return parse_heuristic(c.heuristic); });
        AstarResult r = run_astar(t, h, opts, true);
        // stats want a space for tr sizes; rebuild unscaled
        sp = make_unique<SearchSpace>(t, opts);
        if (r.solved)
            o.plans.push_back({r.plan, r.cost, nullopt});
        o.stats = r.stats;
        o.f_ordered = r.expansion_size_f_ordered;
    } else {
        sp = make_unique<SearchSpace>(t, opts);
        for (const string &w : sp->warnings())
            cerr << "warning: " << w << "\n";
        if (cmd == "solve") {
            if (c.tr != "bdd" && c.tr != "ev")
                throw UsageError("--tr must be bdd or ev");
            SearchResult r = c.tr == "ev" ? ev_search(*sp) : uniform_cost_search(*sp, dir);
            if (c.tr == "ev")
                mode = "solve-ev";
            if (r.solved)
                o.plans.push_back({r.plan, r.cost, nullopt});
            o.stats = r.stats;
        } else if (cmd == "osp") {
            UtilityRepr repr = usage([&] { return parse_utility_repr(c.utility_repr); });
            SearchResult r = osp_search(*sp, {repr, true});
            if (r.solved)
                o.plans.push_back({r.plan, r.cost, r.utility});
            o.stats = r.stats;
        } else {
            size_t k = parse_k(c.k);
            TopkResult r;
            if (c.by_utility) {
                UtilityRepr repr = usage([&] { return parse_utility_repr(c.utility_repr); });
                r = topk_osp_search(*sp, k, repr);
                mode = "topk-osp";
            } else {
                r = topk_search(*sp, {k, dir, false});
            }
            o.plans = std::move(r.plans);
            o.stats = r.stats;
        }
    }
    if (t.utility && cmd != "osp" && !c.by_utility)
        for (TopkPlan &p : o.plans)
            p.utility = oracle::validate_plan(t, p.ops).utility;

    if (cmd == "topk") {
        for (size_t i = 0; i < o.plans.size(); ++i)
            write_plan(t, c.plan_path + "." + to_string(i + 1), o.plans[i]);
    } else if (!o.plans.empty()) {
        write_plan(t, c.plan_path, o.plans.front());
    }
    for (const TopkPlan &p : o.plans)
        cout << "plan cost " << p.cost << (p.utility ? " utility " + to_string(*p.utility) : "")
             << " length " << p.ops.size() << "\n";
    if (o.plans.empty())
        cout << "no plan\n";

    int code = o.plans.empty() ? kNoPlan : kOk;
    if (c.oracle) {
        if (!oracle_check(cmd, c, t, o))
            code = kMismatch;
        else
            cout << "oracle agrees\n";
    }
    write_stats(c, mode, *sp, o, total.ms());
    return code;
}

int run_gen(const Config &c) {
    Task t;
    if (c.profile == "blowup")
        t = blowup_family(c.n, c.m);
    else
        t = oracle::random_task(c.seed, usage([&] { return oracle::parse_profile(c.profile); })).task;
    string text = serialize(t);
    if (c.out_path.empty() || c.out_path == "-") {
        cout << text;
    } else {
        ofstream out(c.out_path);
        if (!out)
            throw runtime_error("cannot write " + c.out_path);
        out << text;
    }
    return kOk;
}

int run_dump(const Config &c) {
    Task t = load_task(c.task_path);
    SpaceOptions opts;
    opts.order = usage([&] { return parse_order(c.order); });
    opts.axioms = usage([&] { return parse_axiom_mode(c.axioms); });
    SearchSpace sp(t, opts);
    dd::DdStore &st = sp.store();
    string dot;
    if (c.what == "init")
        dot = st.to_dot(sp.init());
    else if (c.what == "goal")
        dot = st.to_dot(sp.goal());
    else if (c.what == "valid")
        dot = st.to_dot(sp.valid());
    else if (c.what == "tr")
        dot = st.to_dot(sp.any_tr());
    else if (c.what == "utility") {
        if (!t.utility)
            throw UsageError("task has no utility");
        dot = st.to_dot(sp.compile_add(*t.utility));
    } else if (c.what == "utility-ev") {
        if (!t.utility)
            throw UsageError("task has no utility");
        dot = st.to_dot(sp.compile_ev(*t.utility));
    } else {
        throw UsageError("--what must be init, goal, valid, tr, utility or utility-ev");
    }
    if (c.out_path.empty() || c.out_path == "-") {
        cout << dot;
    } else {
        ofstream out(c.out_path);
        out << dot;
    }
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Symbolic planner: optimal, top-k and oversubscription planning on decision diagrams"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App *sub) {
        sub->add_option("task", c.task_path, "Task file")->required()->check(CLI::ExistingFile);
        sub->add_option("--axioms", c.axioms, "Axiom encoding: o-based, v-based or translate")
            ->capture_default_str();
        sub->add_option("--order", c.order, "Variable order: interleaved or file")->capture_default_str();
        sub->add_flag("--oracle", c.oracle, "Cross-check against explicit-state search (exit 3 on mismatch)");
        sub->add_option("--stats", c.stats_path, "Write run statistics as JSON to this file ('-' = stdout)");
        sub->add_option("--plan-file", c.plan_path, "Plan file name (top-k appends .N)")
            ->capture_default_str();
    };

    auto *solve = app.add_subcommand("solve", "Cost-optimal plan");
    common(solve);
    solve->add_option("--direction", c.direction, "fwd, bwd or bid")->capture_default_str();
    solve->add_option("--tr", c.tr, "Cost handling: bdd (one relation per cost) or ev (edge-valued, forward)")
        ->capture_default_str();

    auto *topk = app.add_subcommand("topk", "The k cheapest plans");
    common(topk);
    topk->add_option("--k", c.k, "Number of plans, or 'all'")->capture_default_str();
    topk->add_option("--direction", c.direction, "fwd, bwd or bid")->capture_default_str();
    topk->add_flag("--by-utility", c.by_utility, "Rank by utility (descending), then cost");
    topk->add_option("--utility-repr", c.utility_repr, "Utility diagram: bdd or add")->capture_default_str();

    auto *osp = app.add_subcommand("osp", "Best utility within the cost bound");
    common(osp);
    osp->add_option("--utility-repr", c.utility_repr, "Utility diagram: bdd or add")->capture_default_str();
    osp->add_option("--direction", c.direction, "Only fwd is supported")->default_val("fwd");

    auto *astar = app.add_subcommand("astar", "BDDA* with a symbolic heuristic");
    common(astar);
    astar->add_option("--heuristic", c.heuristic, "blind, perfect or fraction:P/Q")->capture_default_str();

    auto *gen = app.add_subcommand("gen", "Write a generated task");
    gen->add_option("--profile", c.profile, "plain, axioms, sdac, osp or blowup")->capture_default_str();
    gen->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    gen->add_option("--n", c.n, "blowup: pair count")->capture_default_str();
    gen->add_option("--m", c.m, "blowup: wait steps (default 2n)");
    gen->add_option("-o,--output", c.out_path, "Output file (default stdout)");

    auto *dump = app.add_subcommand("dump-dd", "Print a diagram in DOT format");
    dump->add_option("task", c.task_path, "Task file")->required()->check(CLI::ExistingFile);
    dump->add_option("--what", c.what, "init, goal, valid, tr, utility or utility-ev")->capture_default_str();
    dump->add_option("--axioms", c.axioms, "Axiom encoding")->capture_default_str();
    dump->add_option("--order", c.order, "Variable order")->capture_default_str();
    dump->add_option("-o,--output", c.out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed())
            return run_gen(c);
        if (dump->parsed())
            return run_dump(c);
        if (osp->parsed() && c.direction != "fwd")
            throw UsageError("osp searches forward only");
        for (auto *sub : {solve, topk, osp, astar})
            if (sub->parsed())
                return run_search(sub->get_name(), c);
    } catch (const dd::NodeLimitExceeded &e) {
        cerr << "error: " << e.what() << "\n";
        return kNodeLimit;
    } catch (const exception &e) {
        // bad flags, invalid tasks and unanswerable requests
        cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
