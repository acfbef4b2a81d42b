#include "relgeo/expression.hpp"

#include <cctype>
#include <cmath>

namespace relgeo {

struct Expression::Node {
    enum class Kind { Number, VarU, VarV, Add, Sub, Mul, Div, Pow, Neg, Abs, Log, Exp };

    Kind kind;
    double number = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    template <class T>
    T evaluate(const T& u, const T& v) const {
        using std::abs;
        using std::exp;
        using std::log;
        using std::pow;
        switch (kind) {
            case Kind::Number:
                if constexpr (std::is_same_v<T, Series2>)
                    return Series2::constant(number, u.order());
                else
                    return number;
            case Kind::VarU: return u;
            case Kind::VarV: return v;
            case Kind::Add: return lhs->evaluate(u, v) + rhs->evaluate(u, v);
            case Kind::Sub: return lhs->evaluate(u, v) - rhs->evaluate(u, v);
            case Kind::Mul: return lhs->evaluate(u, v) * rhs->evaluate(u, v);
            case Kind::Div: return lhs->evaluate(u, v) / rhs->evaluate(u, v);
            case Kind::Pow: {
                if (rhs->kind != Kind::Number)
                    throw ExpressionError("exponent must be a numeric literal");
                return pow(lhs->evaluate(u, v), rhs->number);
            }
            case Kind::Neg: {
                if constexpr (std::is_same_v<T, Series2>)
                    return -lhs->evaluate(u, v);
                else
                    return -lhs->evaluate(u, v);
            }
            case Kind::Abs: return abs(lhs->evaluate(u, v));
            case Kind::Log: return log(lhs->evaluate(u, v));
            case Kind::Exp: return exp(lhs->evaluate(u, v));
        }
        throw ExpressionError("corrupt expression node");
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_number(double x) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = x;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ExpressionError("trailing characters in expression: " + s_);
        return e;
    }

private:
    // expr := term (('+'|'-') term)*
    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                e = make(Node::Kind::Add, e, term());
            else if (accept('-'))
                e = make(Node::Kind::Sub, e, term());
            else
                return e;
        }
    }

    // term := factor (('*'|'/') factor)*
    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            skip_ws();
            if (accept('*'))
                e = make(Node::Kind::Mul, e, factor());
            else if (accept('/'))
                e = make(Node::Kind::Div, e, factor());
            else
                return e;
        }
    }

    // factor := unary ('^' factor)?   (right-associative)
    NodePtr factor() {
        NodePtr e = unary();
        skip_ws();
        if (accept('^')) {
            // The exponent must be a (possibly signed) numeric literal:
            // series powers are only defined for constant exponents.
            skip_ws();
            double sign = 1.0;
            if (accept('-'))
                sign = -1.0;
            else
                accept('+');
            skip_ws();
            if (!(pos_ < s_.size() &&
                  (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')))
                throw ExpressionError("exponent must be a numeric literal");
            NodePtr n = number();
            if (sign < 0) n = make_number(-n->number);
            return make(Node::Kind::Pow, e, n);
        }
        return e;
    }

    NodePtr unary() {
        skip_ws();
        if (accept('-')) return make(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            return number();
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::string name = identifier();
            if (name == "u") return make(Node::Kind::VarU);
            if (name == "v") return make(Node::Kind::VarV);
            Node::Kind k;
            if (name == "abs")
                k = Node::Kind::Abs;
            else if (name == "log")
                k = Node::Kind::Log;
            else if (name == "exp")
                k = Node::Kind::Exp;
            else
                throw ExpressionError("unknown identifier '" + name + "'");
            skip_ws();
            expect('(');
            NodePtr arg = expr();
            expect(')');
            return make(k, arg);
        }
        throw ExpressionError("unexpected character in expression: " + s_.substr(pos_));
    }

    NodePtr number() {
        size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                s_[end] == 'e' || s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                 (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
            ++end;
        double x = std::stod(s_.substr(pos_, end - pos_));
        pos_ = end;
        return make_number(x);
    }

    std::string identifier() {
        size_t end = pos_;
        while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
        std::string name = s_.substr(pos_, end - pos_);
        pos_ = end;
        return name;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ExpressionError(std::string("expected '") + c + "' in expression");
    }

    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    return Expression(Parser(text).parse(), text);
}

double Expression::eval(double u, double v) const { return root_->evaluate<double>(u, v); }

Series2 Expression::eval(const Series2& u, const Series2& v) const {
    return root_->evaluate<Series2>(u, v);
}

}  // namespace relgeo
