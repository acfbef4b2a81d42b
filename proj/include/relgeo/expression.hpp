#pragma once

#include <memory>
#include <string>

#include "relgeo/series.hpp"

namespace relgeo {

/// Small arithmetic-expression interpreter.
///
/// Grammar: + - * / ^, parentheses, numeric literals, variables u and v,
/// and the functions abs, log, exp.  Expressions evaluate either to plain
/// doubles or to truncated Taylor series, so an expression can serve both as
/// a pointwise function and as an analytic jet source.
class Expression {
public:
    static Expression parse(const std::string& text);

    double eval(double u, double v) const;
    Series2 eval(const Series2& u, const Series2& v) const;

    const std::string& text() const { return text_; }

    struct Node;

private:
    explicit Expression(std::shared_ptr<const Node> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Thrown on malformed expression text.
struct ExpressionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace relgeo
