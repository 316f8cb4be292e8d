#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "uf/quadrature.hpp"

namespace uf {

struct Variables {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double u = 0.0;
    double r = 0.0;  // Euclidean norm of (x, y, z)
};

/// Arithmetic expression over t, x, y, z, u, r and the constant pi.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | identifier | func '(' expr ')' | '(' expr ')'
///   func    := abs | sin | cos | exp
///
/// Parse errors carry the byte offset of the offending token.
class Expression {
public:
    static Expression parse(std::string_view source);

    double eval(const Variables& v) const;
    const std::string& source() const { return source_; }
    bool uses(char variable) const;

    struct Node;

private:
    Expression(std::string source, std::shared_ptr<const Node> root);
    std::string source_;
    std::shared_ptr<const Node> root_;
};

// f(point) with x, y, z (and r) taken from the point, t = u = 0.
PointFunction to_point_function(const Expression& e);

}  // namespace uf
