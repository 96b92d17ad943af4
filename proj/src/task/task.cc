#include "symplan/task/task.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace std;

namespace symplan::task {

int Task::num_layers() const {
    int n = 0;
    for (const Variable &v : vars)
        if (v.derived)
            n = max(n, v.layer);
    return n;
}

bool Task::has_state_dependent_costs() const {
    for (const Operator &o : ops)
        if (!o.cost.constant_value())
            return true;
    return false;
}

int Task::var_index(const string &name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name)
            return int(i);
    return -1;
}

int Task::op_index(const string &name) const {
    for (size_t i = 0; i < ops.size(); ++i)
        if (ops[i].name == name)
            return int(i);
    return -1;
}

vector<string> Task::var_names() const {
    vector<string> r;
    for (const Variable &v : vars)
        r.push_back(v.name);
    return r;
}

vector<int> Task::primary_vars() const {
    vector<int> r;
    for (size_t i = 0; i < vars.size(); ++i)
        if (!vars[i].derived)
            r.push_back(int(i));
    return r;
}

vector<int> Task::derived_vars() const {
    vector<int> r;
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].derived)
            r.push_back(int(i));
    return r;
}

size_t Task::num_primary_bits() const {
    size_t n = 0;
    for (const Variable &v : vars)
        if (!v.derived)
            n += bits_for_domain(v.domain);
    return n;
}

bool is_stratified(const Task &t) {
    map<int, vector<const Axiom *>> by_layer;
    for (const Axiom &a : t.axioms) {
        if (a.head < 0 || a.head >= int(t.vars.size()) || !t.vars[a.head].derived)
            return false;
        by_layer[t.vars[a.head].layer].push_back(&a);
    }
    for (auto &[i, axioms] : by_layer) {
        for (const Axiom *a : axioms) {
            for (const Fact &f : a->body) {
                const Variable &v = t.vars.at(f.var);
                if (!v.derived)
                    continue;
                int j = v.layer;
                if (!(j <= i))
                    return false;
                bool negated = f.value == 0;
                if (negated && !(j < i))
                    return false;
            }
        }
    }
    return true;
}

namespace {

void check_pa(const Task &t, const PartialAssignment &pa, const string &where) {
    for (size_t i = 0; i < pa.size(); ++i) {
        const Fact &f = pa[i];
        if (f.var < 0 || f.var >= int(t.vars.size()))
            throw TaskError(where + ": unknown variable");
        if (f.value < 0 || f.value >= t.vars[f.var].domain)
            throw TaskError(where + ": value " + to_string(f.value) + " out of range for " +
                            t.vars[f.var].name);
        if (i > 0 && pa[i - 1].var >= f.var)
            throw TaskError(where + ": variable " + t.vars[f.var].name + " assigned twice");
    }
}

void check_expr(const Task &t, const Expr &e, const string &where) {
    for (int v : e.variables())
        if (v < 0 || v >= int(t.vars.size()))
            throw TaskError(where + ": unknown variable in expression");
}

}  // namespace

void validate(const Task &t) {
    set<string> names;
    for (const Variable &v : t.vars) {
        if (v.name.empty())
            throw TaskError("empty variable name");
        if (!names.insert(v.name).second)
            throw TaskError("duplicate variable " + v.name);
        if (v.domain < 1)
            throw TaskError("variable " + v.name + " has an empty domain");
        if (v.derived) {
            if (v.domain != 2)
                throw TaskError("derived variable " + v.name + " must be binary");
            if (v.layer < 1)
                throw TaskError("derived variable " + v.name + " needs a layer >= 1");
        } else if (v.layer != 0) {
            throw TaskError("primary variable " + v.name + " has a layer");
        }
    }
    if (t.init.size() != t.vars.size())
        throw TaskError("initial state is not total");
    for (size_t i = 0; i < t.vars.size(); ++i) {
        if (t.init[i] < 0 || t.init[i] >= t.vars[i].domain)
            throw TaskError("initial value out of range for " + t.vars[i].name);
        if (t.vars[i].derived && t.init[i] != 0)
            throw TaskError("initial entry of derived variable " + t.vars[i].name + " must be 0");
    }
    check_pa(t, t.goal, "goal");
    set<string> op_names;
    for (const Operator &o : t.ops) {
        if (!op_names.insert(o.name).second)
            throw TaskError("duplicate operator " + o.name);
        check_pa(t, o.pre, "precondition of " + o.name);
        check_pa(t, o.eff, "effect of " + o.name);
        for (const Fact &f : o.eff)
            if (t.vars[f.var].derived)
                throw TaskError("derived variable in effect of " + o.name);
        check_expr(t, o.cost, "cost of " + o.name);
        if (auto c = o.cost.constant_value()) {
            if (*c < 0)
                throw TaskError("negative cost of " + o.name);
            if (t.metric == Metric::Unit && *c != 1)
                throw TaskError("unit metric requires cost 1 for " + o.name);
        } else if (t.metric == Metric::Unit) {
            throw TaskError("unit metric requires cost 1 for " + o.name);
        }
    }
    for (const Axiom &a : t.axioms) {
        if (a.head < 0 || a.head >= int(t.vars.size()) || !t.vars[a.head].derived)
            throw TaskError("axiom head is not a derived variable");
        check_pa(t, a.body, "axiom body of " + t.vars[a.head].name);
        for (const Fact &f : a.body)
            if (t.vars[f.var].derived && f.value > 1)
                throw TaskError("derived literal out of range");
    }
    if (!is_stratified(t))
        throw TaskError("axioms are not stratified");
    if (t.utility)
        check_expr(t, *t.utility, "utility");
    if (t.bound && *t.bound < 0)
        throw TaskError("negative cost bound");
}

// ---------------------------------------------------------------- parsing

namespace {

struct Line {
    int number;
    vector<string> tokens;
    string rest_after_first;  // raw text after the first token
};

class Reader {
    vector<Line> lines_;
    size_t pos_ = 0;

public:
    explicit Reader(const string &text) {
        istringstream in(text);
        string raw;
        int n = 0;
        while (getline(in, raw)) {
            ++n;
            if (!raw.empty() && raw.back() == '\r')
                raw.pop_back();
            size_t first = raw.find_first_not_of(" \t");
            if (first == string::npos || raw[first] == '#')
                continue;
            Line l;
            l.number = n;
            istringstream ls(raw);
            string tok;
            while (ls >> tok)
                l.tokens.push_back(tok);
            size_t after = raw.find_first_of(" \t", first);
            l.rest_after_first = after == string::npos ? "" : raw.substr(after);
            lines_.push_back(std::move(l));
        }
    }
    bool done() const { return pos_ >= lines_.size(); }
    const Line &peek() const { return lines_[pos_]; }
    const Line &next(const string &what) {
        if (done())
            throw ParseError("unexpected end of file, expected " + what);
        return lines_[pos_++];
    }
    int last_line() const { return lines_.empty() ? 0 : lines_.back().number; }
};

[[noreturn]] void fail(const Line &l, const string &msg) {
    throw ParseError("line " + to_string(l.number) + ": " + msg);
}

int64_t to_int(const Line &l, const string &s) {
    try {
        size_t idx;
        long long v = stoll(s, &idx);
        if (idx != s.size())
            fail(l, "expected an integer, got '" + s + "'");
        return v;
    } catch (const invalid_argument &) {
        fail(l, "expected an integer, got '" + s + "'");
    } catch (const out_of_range &) {
        fail(l, "integer out of range: '" + s + "'");
    }
}

const Line &expect(Reader &r, const string &keyword, size_t ntokens) {
    const Line &l = r.next("'" + keyword + "'");
    if (l.tokens[0] != keyword)
        fail(l, "expected '" + keyword + "', got '" + l.tokens[0] + "'");
    if (ntokens && l.tokens.size() != ntokens)
        fail(l, "malformed '" + keyword + "' line");
    return l;
}

PartialAssignment read_facts(Reader &r, const Task &t, size_t count) {
    PartialAssignment pa;
    for (size_t i = 0; i < count; ++i) {
        const Line &l = r.next("a 'var val' line");
        if (l.tokens.size() != 2)
            fail(l, "expected 'var val'");
        int v = t.var_index(l.tokens[0]);
        if (v < 0)
            fail(l, "unknown variable '" + l.tokens[0] + "'");
        int64_t val = to_int(l, l.tokens[1]);
        if (val < 0 || val >= t.vars[v].domain)
            fail(l, "value out of range for " + l.tokens[0]);
        for (const Fact &f : pa)
            if (f.var == v)
                fail(l, "variable " + l.tokens[0] + " assigned twice");
        pa.push_back({v, int(val)});
    }
    sort(pa.begin(), pa.end());
    return pa;
}

Expr read_expr(const Line &l, const Task &t) {
    try {
        return parse_expr(l.rest_after_first, [&](const string &n) { return t.var_index(n); });
    } catch (const ExprSyntaxError &e) {
        fail(l, e.what());
    }
}

}  // namespace

Task parse_task(const string &text) {
    Reader r(text);
    Task t;
    const Line &ver = expect(r, "version", 2);
    if (ver.tokens[1] != "1")
        fail(ver, "unsupported version " + ver.tokens[1]);
    const Line &met = expect(r, "metric", 2);
    if (met.tokens[1] == "unit")
        t.metric = Metric::Unit;
    else if (met.tokens[1] == "general")
        t.metric = Metric::General;
    else
        fail(met, "metric must be unit or general");

    const Line &vl = expect(r, "vars", 2);
    int64_t nvars = to_int(vl, vl.tokens[1]);
    if (nvars < 0)
        fail(vl, "negative variable count");
    for (int64_t i = 0; i < nvars; ++i) {
        const Line &l = r.next("a variable line");
        Variable v;
        if (l.tokens.size() < 3)
            fail(l, "expected 'name domsize primary|derived layer'");
        v.name = l.tokens[0];
        if (!(isalpha((unsigned char)v.name[0]) || v.name[0] == '_') ||
            !all_of(v.name.begin(), v.name.end(),
                    [](char c) { return isalnum((unsigned char)c) || c == '_' || c == '.'; }))
            fail(l, "invalid variable name '" + v.name + "'");
        if (t.var_index(v.name) >= 0)
            fail(l, "duplicate variable '" + v.name + "'");
        int64_t d = to_int(l, l.tokens[1]);
        if (d < 1 || d > (1 << 20))
            fail(l, "domain size out of range");
        v.domain = int(d);
        if (l.tokens[2] == "primary") {
            if (l.tokens.size() != 3)
                fail(l, "primary variables take no layer");
        } else if (l.tokens[2] == "derived") {
            if (l.tokens.size() != 4)
                fail(l, "derived variables need a layer");
            v.derived = true;
            int64_t layer = to_int(l, l.tokens[3]);
            if (layer < 1 || layer > 1000)
                fail(l, "layer out of range");
            v.layer = int(layer);
            if (v.domain != 2)
                fail(l, "derived variables must be binary");
        } else {
            fail(l, "expected 'primary' or 'derived'");
        }
        t.vars.push_back(v);
    }

    const Line &il = r.next("'init'");
    if (il.tokens[0] != "init")
        fail(il, "expected 'init'");
    vector<string> vals(il.tokens.begin() + 1, il.tokens.end());
    while (vals.size() < t.vars.size()) {
        const Line &l = r.next("initial values");
        vals.insert(vals.end(), l.tokens.begin(), l.tokens.end());
    }
    if (vals.size() != t.vars.size())
        fail(il, "init needs exactly " + to_string(t.vars.size()) + " values");
    for (size_t i = 0; i < vals.size(); ++i) {
        int64_t v = to_int(il, vals[i]);
        if (v < 0 || v >= t.vars[i].domain)
            fail(il, "initial value out of range for " + t.vars[i].name);
        t.init.push_back(t.vars[i].derived ? 0 : int(v));
    }

    const Line &gl = expect(r, "goal", 2);
    int64_t ng = to_int(gl, gl.tokens[1]);
    if (ng < 0)
        fail(gl, "negative goal count");
    t.goal = read_facts(r, t, size_t(ng));

    const Line &bl = expect(r, "bound", 2);
    if (bl.tokens[1] != "inf") {
        int64_t b = to_int(bl, bl.tokens[1]);
        if (b < 0)
            fail(bl, "negative bound");
        t.bound = b;
    }

    const Line &ol = expect(r, "ops", 2);
    int64_t nops = to_int(ol, ol.tokens[1]);
    if (nops < 0)
        fail(ol, "negative operator count");
    for (int64_t i = 0; i < nops; ++i) {
        const Line &l = expect(r, "op", 2);
        Operator o;
        o.name = l.tokens[1];
        if (t.op_index(o.name) >= 0)
            fail(l, "duplicate operator '" + o.name + "'");
        const Line &pl = expect(r, "pre", 2);
        o.pre = read_facts(r, t, size_t(max<int64_t>(0, to_int(pl, pl.tokens[1]))));
        const Line &el = expect(r, "eff", 2);
        o.eff = read_facts(r, t, size_t(max<int64_t>(0, to_int(el, el.tokens[1]))));
        for (const Fact &f : o.eff)
            if (t.vars[f.var].derived)
                fail(el, "derived variable in effect");
        if (!r.done() && r.peek().tokens[0] == "cost") {
            const Line &cl = r.next("cost");
            o.cost = read_expr(cl, t);
        } else if (t.metric == Metric::General) {
            fail(l, "operator '" + o.name + "' needs a cost line under metric general");
        }
        t.ops.push_back(std::move(o));
    }

    if (!r.done() && r.peek().tokens[0] == "axioms") {
        const Line &al = expect(r, "axioms", 2);
        int64_t na = to_int(al, al.tokens[1]);
        for (int64_t i = 0; i < na; ++i) {
            const Line &l = r.next("an axiom line");
            if (l.tokens.size() < 2 || l.tokens[1] != "<-")
                fail(l, "expected 'head <- literals'");
            Axiom a;
            a.head = t.var_index(l.tokens[0]);
            if (a.head < 0)
                fail(l, "unknown variable '" + l.tokens[0] + "'");
            if (!t.vars[a.head].derived)
                fail(l, "axiom head '" + l.tokens[0] + "' is not derived");
            for (size_t j = 2; j < l.tokens.size(); ++j) {
                string lit = l.tokens[j];
                Fact f{};
                size_t eq = lit.find('=');
                if (eq != string::npos) {
                    f.var = t.var_index(lit.substr(0, eq));
                    if (f.var < 0)
                        fail(l, "unknown variable in literal '" + lit + "'");
                    int64_t v = to_int(l, lit.substr(eq + 1));
                    if (v < 0 || v >= t.vars[f.var].domain)
                        fail(l, "value out of range in literal '" + lit + "'");
                    f.value = int(v);
                } else {
                    bool neg = !lit.empty() && lit[0] == '!';
                    f.var = t.var_index(neg ? lit.substr(1) : lit);
                    if (f.var < 0)
                        fail(l, "unknown variable in literal '" + lit + "'");
                    if (t.vars[f.var].domain != 2)
                        fail(l, "literal '" + lit + "' needs the var=val form");
                    f.value = neg ? 0 : 1;
                }
                for (const Fact &g : a.body)
                    if (g.var == f.var && g.value != f.value)
                        fail(l, "contradictory literals in axiom body");
                if (find(a.body.begin(), a.body.end(), f) == a.body.end())
                    a.body.push_back(f);
            }
            sort(a.body.begin(), a.body.end());
            t.axioms.push_back(std::move(a));
        }
    }
    if (!r.done() && r.peek().tokens[0] == "utility") {
        const Line &ul = r.next("utility");
        t.utility = read_expr(ul, t);
    }
    if (!r.done())
        fail(r.peek(), "unexpected '" + r.peek().tokens[0] + "'");
    validate(t);
    return t;
}

Task load_task(const string &path) {
    ifstream in(path);
    if (!in)
        throw TaskError("cannot open " + path);
    stringstream ss;
    ss << in.rdbuf();
    return parse_task(ss.str());
}

string serialize(const Task &t) {
    ostringstream out;
    vector<string> names = t.var_names();
    out << "version 1\n";
    out << "metric " << (t.metric == Metric::Unit ? "unit" : "general") << "\n";
    out << "vars " << t.vars.size() << "\n";
    for (const Variable &v : t.vars) {
        out << v.name << " " << v.domain;
        if (v.derived)
            out << " derived " << v.layer << "\n";
        else
            out << " primary\n";
    }
    out << "init";
    for (int v : t.init)
        out << " " << v;
    out << "\n";
    out << "goal " << t.goal.size() << "\n";
    for (const Fact &f : t.goal)
        out << names[f.var] << " " << f.value << "\n";
    out << "bound " << (t.bound ? to_string(*t.bound) : "inf") << "\n";
    out << "ops " << t.ops.size() << "\n";
    for (const Operator &o : t.ops) {
        out << "op " << o.name << "\n";
        out << "pre " << o.pre.size() << "\n";
        for (const Fact &f : o.pre)
            out << names[f.var] << " " << f.value << "\n";
        out << "eff " << o.eff.size() << "\n";
        for (const Fact &f : o.eff)
            out << names[f.var] << " " << f.value << "\n";
        if (t.metric == Metric::General)
            out << "cost " << o.cost.to_string(names) << "\n";
    }
    if (!t.axioms.empty()) {
        out << "axioms " << t.axioms.size() << "\n";
        for (const Axiom &a : t.axioms) {
            out << names[a.head] << " <-";
            for (const Fact &f : a.body) {
                if (t.vars[f.var].domain == 2)
                    out << " " << (f.value ? "" : "!") << names[f.var];
                else
                    out << " " << names[f.var] << "=" << f.value;
            }
            out << "\n";
        }
    }
    if (t.utility)
        out << "utility " << t.utility->to_string(names) << "\n";
    return out.str();
}

bool satisfies(const vector<int> &state, const PartialAssignment &pa) {
    for (const Fact &f : pa)
        if (state.at(f.var) != f.value)
            return false;
    return true;
}

vector<int> apply_operator(const Task &t, const vector<int> &state, int op,
                           const vector<int> &extended) {
    const Operator &o = t.ops.at(op);
    if (!satisfies(extended, o.pre))
        throw TaskError("operator " + o.name + " is not applicable");
    vector<int> r = state;
    for (const Fact &f : o.eff)
        r[f.var] = f.value;
    for (size_t i = 0; i < t.vars.size(); ++i)
        if (t.vars[i].derived)
            r[i] = 0;
    return r;
}

int64_t operator_cost(const Task &t, int op, const vector<int> &extended) {
    int64_t c = t.ops.at(op).cost.eval(extended);
    if (c < 0)
        throw TaskError("negative cost of operator " + t.ops[op].name);
    return c;
}

int64_t state_utility(const Task &t, const vector<int> &extended) {
    if (!t.utility)
        return 0;
    int64_t u = t.utility->eval(extended);
    if (u < 0)
        throw TaskError("negative utility");
    return u;
}

string plan_to_string(const Task &t, const Plan &p) {
    ostringstream out;
    for (int o : p.ops)
        out << "(" << t.ops.at(o).name << ")\n";
    out << "; cost = " << p.cost << "\n";
    if (p.utility)
        out << "; utility = " << *p.utility << "\n";
    return out.str();
}

}  // namespace symplan::task
