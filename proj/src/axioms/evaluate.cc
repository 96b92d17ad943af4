#include "symplan/axioms/evaluate.h"

using namespace std;

namespace symplan::axioms {

vector<int> evaluate_axioms(const task::Task &t, const vector<int> &state) {
    vector<int> s = state;
    for (size_t i = 0; i < t.vars.size(); ++i)
        if (t.vars[i].derived)
            s[i] = 0;
    int layers = t.num_layers();
    for (int layer = 1; layer <= layers; ++layer) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const task::Axiom &a : t.axioms) {
                if (t.vars[a.head].layer != layer || s[a.head] == 1)
                    continue;
                if (task::satisfies(s, a.body)) {
                    s[a.head] = 1;
                    changed = true;
                }
            }
        }
    }
    return s;
}

}  // namespace symplan::axioms
