#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

enum class ExprKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Function };
enum class Func { Sin, Cos, Exp, Log, Sqrt };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. `Variable` stores a zero-based coordinate index;
/// `Pow` stores its constant exponent in `number`.
struct Expr {
    ExprKind kind = ExprKind::Constant;
    double number = 0.0;
    int var = 0;
    Func func = Func::Sin;
    ExprPtr lhs;
    ExprPtr rhs;
};

ExprPtr make_constant(double v);
ExprPtr make_variable(int index);

/// Parses one expression. `dim` bounds the variable indices (x1 .. x<dim>);
/// `line` and `column_offset` position error messages inside a larger file.
ExprPtr parse_expression(std::string_view text, int dim, int line = 1, int column_offset = 0);

/// Fully parenthesized rendering that reparses to an identical tree.
std::string to_string(const Expr& e);

Jet evaluate(const Expr& e, std::span<const Jet> env);
double evaluate(const Expr& e, std::span<const double> x);

}  // namespace finsler
