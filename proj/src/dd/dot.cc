#include "symplan/dd/store.h"

#include <sstream>
#include <unordered_set>

using namespace std;

namespace symplan::dd {

string DdStore::to_dot(const Bdd &a) const {
    check(a);
    ostringstream out;
    out << "digraph bdd {\n";
    unordered_set<NodeId> seen;
    vector<NodeId> stack{a.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (n <= 1) {
            out << "  n" << n << " [shape=box,label=\"" << n << "\"];\n";
            continue;
        }
        const BddNode &nd = bdd_[n];
        out << "  n" << n << " [label=\"" << var_name(order_.var_at(nd.level)) << "\"];\n";
        out << "  n" << n << " -> n" << nd.lo << " [style=dotted];\n";
        out << "  n" << n << " -> n" << nd.hi << ";\n";
        stack.push_back(nd.lo);
        stack.push_back(nd.hi);
    }
    out << "}\n";
    return out.str();
}

string DdStore::to_dot(const Add &f) const {
    check(f);
    ostringstream out;
    out << "digraph add {\n";
    unordered_set<NodeId> seen;
    vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        const AddNode &nd = add_[n];
        if (nd.level == kTerminalLevel) {
            out << "  n" << n << " [shape=box,label=\"" << nd.value.to_string() << "\"];\n";
            continue;
        }
        out << "  n" << n << " [label=\"" << var_name(order_.var_at(nd.level)) << "\"];\n";
        out << "  n" << n << " -> n" << nd.lo << " [style=dotted];\n";
        out << "  n" << n << " -> n" << nd.hi << ";\n";
        stack.push_back(nd.lo);
        stack.push_back(nd.hi);
    }
    out << "}\n";
    return out.str();
}

string DdStore::to_dot(const Ev &f) const {
    check(f);
    ostringstream out;
    out << "digraph ev {\n";
    out << "  root [shape=point];\n";
    out << "  root -> n" << f.id() << " [label=\"" << f.offset().to_string() << "\"];\n";
    unordered_set<NodeId> seen;
    vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second)
            continue;
        if (n == 0) {
            out << "  n0 [shape=box,label=\"T\"];\n";
            continue;
        }
        const EvNode &nd = ev_[n];
        out << "  n" << n << " [label=\"" << var_name(order_.var_at(nd.level)) << "\"];\n";
        out << "  n" << n << " -> n" << nd.lo << " [style=dotted,label=\"" << nd.wlo.to_string()
            << "\"];\n";
        out << "  n" << n << " -> n" << nd.hi << " [label=\"" << nd.whi.to_string() << "\"];\n";
        stack.push_back(nd.lo);
        stack.push_back(nd.hi);
    }
    out << "}\n";
    return out.str();
}

}  // namespace symplan::dd
