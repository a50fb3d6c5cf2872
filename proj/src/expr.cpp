#include "finsler/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace finsler {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

ExprPtr make_constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Constant;
    e->number = v;
    return e;
}

ExprPtr make_variable(int index) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Variable;
    e->var = index;
    return e;
}

namespace {

ExprPtr make_unary(ExprKind kind, ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(child);
    return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

class Parser {
public:
    Parser(std::string_view text, int dim, int line, int col0)
        : s_(text), dim_(dim), line_(line), col0_(col0) {}

    ExprPtr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) lhs = make_binary(ExprKind::Add, lhs, term());
            else if (accept('-')) lhs = make_binary(ExprKind::Sub, lhs, term());
            else return lhs;
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        for (;;) {
            if (accept('*')) lhs = make_binary(ExprKind::Mul, lhs, factor());
            else if (accept('/')) lhs = make_binary(ExprKind::Div, lhs, factor());
            else return lhs;
        }
    }

    ExprPtr factor() {
        auto b = base();
        if (accept('^')) {
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Pow;
            e->lhs = std::move(b);
            // A parenthesized signed number is accepted as well: (x4)^(-1).
            if (accept('(')) {
                e->number = signed_number();
                expect(')');
            } else {
                e->number = signed_number();
            }
            return e;
        }
        return b;
    }

    double signed_number() {
        skip_ws();
        double sign = 1.0;
        if (accept('-')) sign = -1.0;
        else accept('+');
        skip_ws();
        if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            fail("expected number after '^'");
        return sign * number();
    }

    double number() {
        const std::string rest(s_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return v;
    }

    ExprPtr base() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_constant(number());
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (c == '-') {
            // Unary minus binds looser than '^': -x1^2 is -(x1^2).
            ++pos_;
            return make_unary(ExprKind::Negate, factor());
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view word = s_.substr(start, pos_ - start);
            if (word == "x") {
                const std::size_t dstart = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (dstart == pos_) {
                    pos_ = start;
                    fail("expected coordinate index after 'x'");
                }
                const int k = std::atoi(std::string(s_.substr(dstart, pos_ - dstart)).c_str());
                if (k < 1 || k > dim_) {
                    pos_ = start;
                    fail("coordinate x" + std::to_string(k) + " out of range 1.." + std::to_string(dim_));
                }
                return make_variable(k - 1);
            }
            Func f;
            if (word == "sin") f = Func::Sin;
            else if (word == "cos") f = Func::Cos;
            else if (word == "exp") f = Func::Exp;
            else if (word == "log") f = Func::Log;
            else if (word == "sqrt") f = Func::Sqrt;
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(word) + "'");
            }
            expect('(');
            auto arg = expr();
            expect(')');
            auto e = std::make_shared<Expr>();
            e->kind = ExprKind::Function;
            e->func = f;
            e->lhs = std::move(arg);
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    int dim_;
    int line_;
    int col0_;
    std::size_t pos_ = 0;
};

std::string fmt_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

template <class T, class Env>
T eval_node(const Expr& e, const Env& env) {
    switch (e.kind) {
        case ExprKind::Constant:
            if constexpr (std::is_same_v<T, Jet>) return Jet(e.number, env.empty() ? 0 : env[0].directions());
            else return e.number;
        case ExprKind::Variable:
            return env[static_cast<std::size_t>(e.var)];
        case ExprKind::Negate:
            return -eval_node<T>(*e.lhs, env);
        case ExprKind::Add:
            return eval_node<T>(*e.lhs, env) + eval_node<T>(*e.rhs, env);
        case ExprKind::Sub:
            return eval_node<T>(*e.lhs, env) - eval_node<T>(*e.rhs, env);
        case ExprKind::Mul:
            return eval_node<T>(*e.lhs, env) * eval_node<T>(*e.rhs, env);
        case ExprKind::Div: {
            const T den = eval_node<T>(*e.rhs, env);
            if constexpr (std::is_same_v<T, double>) {
                if (!(std::abs(den) > Jet::kTiny)) throw DomainError("division by zero in expression");
            }
            return eval_node<T>(*e.lhs, env) / den;
        }
        case ExprKind::Pow: {
            const T b = eval_node<T>(*e.lhs, env);
            if constexpr (std::is_same_v<T, Jet>) {
                return pow(b, e.number);
            } else {
                if (std::floor(e.number) != e.number && !(b > 0.0))
                    throw DomainError("fractional power of non-positive base");
                if (e.number < 0.0 && !(std::abs(b) > Jet::kTiny)) throw DomainError("negative power of zero");
                return e.number == 0.0 ? 1.0 : std::pow(b, e.number);
            }
        }
        case ExprKind::Function: {
            const T a = eval_node<T>(*e.lhs, env);
            if constexpr (std::is_same_v<T, Jet>) {
                switch (e.func) {
                    case Func::Sin: return sin(a);
                    case Func::Cos: return cos(a);
                    case Func::Exp: return exp(a);
                    case Func::Log: return log(a);
                    case Func::Sqrt: return sqrt(a);
                }
            } else {
                switch (e.func) {
                    case Func::Sin: return std::sin(a);
                    case Func::Cos: return std::cos(a);
                    case Func::Exp: return std::exp(a);
                    case Func::Log:
                        if (!(a > Jet::kTiny)) throw DomainError("log of non-positive value");
                        return std::log(a);
                    case Func::Sqrt:
                        if (!(a > Jet::kTiny)) throw DomainError("sqrt of non-positive value");
                        return std::sqrt(a);
                }
            }
        }
    }
    throw std::logic_error("corrupt expression node");
}

}  // namespace

ExprPtr parse_expression(std::string_view text, int dim, int line, int column_offset) {
    return Parser(text, dim, line, column_offset).parse();
}

std::string to_string(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Constant:
            return e.number < 0 ? "(" + fmt_number(e.number) + ")" : fmt_number(e.number);
        case ExprKind::Variable: return "x" + std::to_string(e.var + 1);
        case ExprKind::Negate: return "(-" + to_string(*e.lhs) + ")";
        case ExprKind::Add: return "(" + to_string(*e.lhs) + " + " + to_string(*e.rhs) + ")";
        case ExprKind::Sub: return "(" + to_string(*e.lhs) + " - " + to_string(*e.rhs) + ")";
        case ExprKind::Mul: return "(" + to_string(*e.lhs) + " * " + to_string(*e.rhs) + ")";
        case ExprKind::Div: return "(" + to_string(*e.lhs) + " / " + to_string(*e.rhs) + ")";
        case ExprKind::Pow: return "(" + to_string(*e.lhs) + ")^" + fmt_number(e.number);
        case ExprKind::Function: return std::string(func_name(e.func)) + "(" + to_string(*e.lhs) + ")";
    }
    return "?";
}

Jet evaluate(const Expr& e, std::span<const Jet> env) { return eval_node<Jet>(e, env); }

double evaluate(const Expr& e, std::span<const double> x) { return eval_node<double>(e, x); }

}  // namespace finsler
