#include "uf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "uf/error.hpp"

namespace uf {

struct Expression::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Sin, Cos, Exp };
    Kind kind = Kind::Number;
    double value = 0.0;
    char var = 0;
    std::unique_ptr<Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;

class Parser {
public:
    explicit Parser(std::string_view s) : src_(s) {}

    std::unique_ptr<Node> parse() {
        auto e = expr();
        skip();
        if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static std::unique_ptr<Node> make(Kind k, std::unique_ptr<Node> l = nullptr, std::unique_ptr<Node> r = nullptr) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    std::unique_ptr<Node> expr() {
        auto n = term();
        while (true) {
            if (accept('+'))
                n = make(Kind::Add, std::move(n), term());
            else if (accept('-'))
                n = make(Kind::Sub, std::move(n), term());
            else
                return n;
        }
    }
    std::unique_ptr<Node> term() {
        auto n = unary();
        while (true) {
            if (accept('*'))
                n = make(Kind::Mul, std::move(n), unary());
            else if (accept('/'))
                n = make(Kind::Div, std::move(n), unary());
            else
                return n;
        }
    }
    std::unique_ptr<Node> unary() {
        if (accept('-')) return make(Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }
    std::unique_ptr<Node> power() {
        auto base = primary();
        if (accept('^')) return make(Kind::Pow, std::move(base), unary());
        return base;
    }
    std::unique_ptr<Node> primary() {
        skip();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (accept('(')) {
            auto e = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }
    std::unique_ptr<Node> number() {
        const std::size_t start = pos_;
        std::string text(src_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str()) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(end - text.c_str());
        auto n = make(Kind::Number);
        n->value = v;
        return n;
    }
    std::unique_ptr<Node> identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name.size() == 1 && std::string_view("txyzur").find(name[0]) != std::string_view::npos) {
            auto n = make(Kind::Var);
            n->var = name[0];
            return n;
        }
        if (name == "pi") {
            auto n = make(Kind::Number);
            n->value = std::numbers::pi;
            return n;
        }
        Kind k;
        if (name == "abs")
            k = Kind::Abs;
        else if (name == "sin")
            k = Kind::Sin;
        else if (name == "cos")
            k = Kind::Cos;
        else if (name == "exp")
            k = Kind::Exp;
        else
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
        auto arg = expr();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make(k, std::move(arg));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

double eval_node(const Node& n, const Variables& v) {
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Var:
            switch (n.var) {
                case 't': return v.t;
                case 'x': return v.x;
                case 'y': return v.y;
                case 'z': return v.z;
                case 'u': return v.u;
                default: return v.r;
            }
        case Kind::Neg: return -eval_node(*n.lhs, v);
        case Kind::Add: return eval_node(*n.lhs, v) + eval_node(*n.rhs, v);
        case Kind::Sub: return eval_node(*n.lhs, v) - eval_node(*n.rhs, v);
        case Kind::Mul: return eval_node(*n.lhs, v) * eval_node(*n.rhs, v);
        case Kind::Div: return eval_node(*n.lhs, v) / eval_node(*n.rhs, v);
        case Kind::Pow: {
            const double e = eval_node(*n.rhs, v);
            const double b = eval_node(*n.lhs, v);
            if (e == 2.0) return b * b;
            return std::pow(b, e);
        }
        case Kind::Abs: return std::abs(eval_node(*n.lhs, v));
        case Kind::Sin: return std::sin(eval_node(*n.lhs, v));
        case Kind::Cos: return std::cos(eval_node(*n.lhs, v));
        case Kind::Exp: return std::exp(eval_node(*n.lhs, v));
    }
    return 0.0;
}

bool node_uses(const Node& n, char var) {
    if (n.kind == Kind::Var && n.var == var) return true;
    return (n.lhs && node_uses(*n.lhs, var)) || (n.rhs && node_uses(*n.rhs, var));
}

}  // namespace

Expression::Expression(std::string source, std::shared_ptr<const Node> root)
    : source_(std::move(source)), root_(std::move(root)) {}

Expression Expression::parse(std::string_view source) {
    Parser p(source);
    std::shared_ptr<const Node> root = p.parse();
    return Expression(std::string(source), std::move(root));
}

double Expression::eval(const Variables& v) const { return eval_node(*root_, v); }

bool Expression::uses(char variable) const { return node_uses(*root_, variable); }

PointFunction to_point_function(const Expression& e) {
    return [e](std::span<const double> p) {
        Variables v;
        double r2 = 0.0;
        if (!p.empty()) v.x = p[0];
        if (p.size() > 1) v.y = p[1];
        if (p.size() > 2) v.z = p[2];
        for (double c : p) r2 += c * c;
        v.r = std::sqrt(r2);
        return e.eval(v);
    };
}

}  // namespace uf
