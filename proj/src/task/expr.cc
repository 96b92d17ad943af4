#include "symplan/task/expr.h"

#include <cctype>
#include <stdexcept>

using namespace std;

namespace symplan::task {

Expr Expr::constant(int64_t c) {
    return Expr(make_shared<const Node>(Node{Kind::Const, c, -1, {}}));
}

Expr Expr::variable(int var) {
    return Expr(make_shared<const Node>(Node{Kind::Var, 0, var, {}}));
}

Expr Expr::binary(Kind k, Expr lhs, Expr rhs) {
    return Expr(make_shared<const Node>(Node{k, 0, -1, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::abs(Expr arg) {
    return Expr(make_shared<const Node>(Node{Kind::Abs, 0, -1, {std::move(arg)}}));
}

optional<int64_t> Expr::constant_value() const {
    if (kind() == Kind::Const)
        return value();
    return nullopt;
}

int64_t Expr::eval(const vector<int> &state) const {
    int64_t a, b, r;
    switch (kind()) {
    case Kind::Const:
        return value();
    case Kind::Var:
        return state.at(var());
    case Kind::Abs:
        a = arg().eval(state);
        if (a == INT64_MIN)
            throw overflow_error("expression overflow");
        return a < 0 ? -a : a;
    default:
        break;
    }
    a = lhs().eval(state);
    b = rhs().eval(state);
    bool ovf = false;
    if (kind() == Kind::Add)
        ovf = __builtin_add_overflow(a, b, &r);
    else if (kind() == Kind::Sub)
        ovf = __builtin_sub_overflow(a, b, &r);
    else
        ovf = __builtin_mul_overflow(a, b, &r);
    if (ovf)
        throw overflow_error("expression overflow");
    return r;
}

set<int> Expr::variables() const {
    set<int> r;
    function<void(const Expr &)> rec = [&](const Expr &e) {
        if (e.kind() == Kind::Var)
            r.insert(e.var());
        for (const Expr &c : e.node_->children)
            rec(c);
    };
    rec(*this);
    return r;
}

int Expr::depth() const {
    int d = 0;
    for (const Expr &c : node_->children)
        d = max(d, c.depth());
    return d + 1;
}

bool Expr::operator==(const Expr &o) const {
    if (node_ == o.node_)
        return true;
    if (kind() != o.kind() || value() != o.value() || var() != o.var() ||
        node_->children.size() != o.node_->children.size())
        return false;
    for (size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == o.node_->children[i]))
            return false;
    return true;
}

namespace {
int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
        return 1;
    case Expr::Kind::Mul:
        return 2;
    default:
        return 3;
    }
}
}  // namespace

string Expr::to_string(const vector<string> &names) const {
    switch (kind()) {
    case Kind::Const:
        return std::to_string(value());
    case Kind::Var:
        return names.at(var());
    case Kind::Abs:
        return "abs(" + arg().to_string(names) + ")";
    default:
        break;
    }
    int p = precedence(kind());
    string l = lhs().to_string(names), r = rhs().to_string(names);
    if (precedence(lhs().kind()) < p)
        l = "(" + l + ")";
    if (precedence(rhs().kind()) <= p)
        r = "(" + r + ")";
    const char *op = kind() == Kind::Add ? " + " : kind() == Kind::Sub ? " - " : " * ";
    return l + op + r;
}

namespace {

class ExprParser {
    const string &s_;
    size_t pos_ = 0;
    const function<int(const string &)> &lookup_;

    void skip() {
        while (pos_ < s_.size() && isspace((unsigned char)s_[pos_]))
            ++pos_;
    }
    [[noreturn]] void fail(const string &msg) {
        throw ExprSyntaxError(msg + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

public:
    ExprParser(const string &s, const function<int(const string &)> &lookup)
        : s_(s), lookup_(lookup) {}

    Expr parse() {
        Expr e = sum();
        skip();
        if (pos_ != s_.size())
            fail("unexpected input");
        return e;
    }

    Expr sum() {
        Expr e = product();
        while (true) {
            if (accept('+'))
                e = Expr::binary(Expr::Kind::Add, e, product());
            else if (accept('-'))
                e = Expr::binary(Expr::Kind::Sub, e, product());
            else
                return e;
        }
    }

    Expr product() {
        Expr e = unary();
        while (accept('*'))
            e = Expr::binary(Expr::Kind::Mul, e, unary());
        return e;
    }

    Expr unary() {
        if (accept('-')) {
            skip();
            if (pos_ < s_.size() && isdigit((unsigned char)s_[pos_]))
                return number(true);
            return Expr::binary(Expr::Kind::Sub, Expr::constant(0), unary());
        }
        return primary();
    }

    Expr number(bool negative) {
        size_t start = pos_;
        while (pos_ < s_.size() && isdigit((unsigned char)s_[pos_]))
            ++pos_;
        string digits = s_.substr(start, pos_ - start);
        try {
            int64_t v = stoll((negative ? "-" : "") + digits);
            return Expr::constant(v);
        } catch (const out_of_range &) {
            fail("integer literal out of range");
        }
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!accept(')'))
                fail("expected ')'");
            return e;
        }
        if (isdigit((unsigned char)c))
            return number(false);
        if (isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_' || s_[pos_] == '.'))
                ++pos_;
            string name = s_.substr(start, pos_ - start);
            if (name == "abs") {
                if (!accept('('))
                    fail("expected '(' after abs");
                Expr e = sum();
                if (!accept(')'))
                    fail("expected ')'");
                return Expr::abs(e);
            }
            int v = lookup_(name);
            if (v < 0)
                fail("unknown variable '" + name + "'");
            return Expr::variable(v);
        }
        fail(string("unexpected character '") + c + "'");
    }
};

}  // namespace

Expr parse_expr(const string &text, const function<int(const string &)> &lookup) {
    return ExprParser(text, lookup).parse();
}

}  // namespace symplan::task
