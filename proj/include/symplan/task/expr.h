#ifndef SYMPLAN_TASK_EXPR_H
#define SYMPLAN_TASK_EXPR_H

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace symplan::task {

// Cost/utility term: constants, variable values, + - * and abs.
class Expr {
public:
    enum class Kind { Const, Var, Add, Sub, Mul, Abs };

    Expr() : Expr(constant(0)) {}
    static Expr constant(int64_t c);
    static Expr variable(int var);
    static Expr binary(Kind k, Expr lhs, Expr rhs);
    static Expr abs(Expr arg);

    Kind kind() const { return node_->kind; }
    int64_t value() const { return node_->value; }
    int var() const { return node_->var; }
    const Expr &lhs() const { return node_->children[0]; }
    const Expr &rhs() const { return node_->children[1]; }
    const Expr &arg() const { return node_->children[0]; }

    std::optional<int64_t> constant_value() const;
    // Throws std::overflow_error on 64-bit overflow.
    int64_t eval(const std::vector<int> &state) const;
    std::set<int> variables() const;
    int depth() const;

    bool operator==(const Expr &o) const;

    // Infix text that parses back to an equal tree.
    std::string to_string(const std::vector<std::string> &names) const;

private:
    struct Node {
        Kind kind;
        int64_t value = 0;
        int var = -1;
        std::vector<Expr> children;
    };
    std::shared_ptr<const Node> node_;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

class ExprSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// lookup returns -1 for unknown names.
Expr parse_expr(const std::string &text, const std::function<int(const std::string &)> &lookup);

}  // namespace symplan::task

#endif
