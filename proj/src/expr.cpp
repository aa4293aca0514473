#include "pinncert/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "pinncert/util.hpp"

namespace pinncert {
namespace detail {

enum class Op {
    kNumber,
    kVar,
    kParam,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,  // integer exponent in `exponent`
    kSin,
    kCos,
    kExp,
};

struct ExprNode {
    Op op;
    double value = 0.0;       // kNumber
    std::string name;         // kParam
    int exponent = 0;         // kPow
    NodePtr a, b;             // children

    ExprNode(Op o) : op(o) {}
};

namespace {

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>(Op::kNumber);
    n->value = v;
    return n;
}

bool is_number(const NodePtr& n) { return n->op == Op::kNumber; }

double eval_node(const ExprNode& n, double x, const Bindings* bindings);

// Smart constructors fold subtrees whose children are all literals. No other
// simplification is performed; a folding that would itself fault (0/0) is
// left in place so the error surfaces at eval time.
NodePtr make_unary(Op op, NodePtr a) {
    if (is_number(a)) {
        auto n = ExprNode(op);
        n.a = a;
        double v = eval_node(n, 0.0, nullptr);
        if (std::isfinite(v)) return make_number(v);
    }
    auto n = std::make_shared<ExprNode>(op);
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    if (is_number(a) && is_number(b)) {
        if (op != Op::kDiv || b->value != 0.0) {
            auto n = ExprNode(op);
            n.a = a;
            n.b = b;
            double v = eval_node(n, 0.0, nullptr);
            if (std::isfinite(v)) return make_number(v);
        }
    }
    auto n = std::make_shared<ExprNode>(op);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
    if (is_number(base)) {
        double v = std::pow(base->value, exponent);
        if (std::isfinite(v)) return make_number(v);
    }
    auto n = std::make_shared<ExprNode>(Op::kPow);
    n->a = std::move(base);
    n->exponent = exponent;
    return n;
}

double powi(double base, int e) {
    double acc = 1.0, p = base;
    for (; e > 0; e >>= 1) {
        if (e & 1) acc *= p;
        p *= p;
    }
    return acc;
}

double eval_node(const ExprNode& n, double x, const Bindings* bindings) {
    switch (n.op) {
        case Op::kNumber: return n.value;
        case Op::kVar: return x;
        case Op::kParam: {
            if (bindings) {
                auto it = bindings->find(n.name);
                if (it != bindings->end()) return it->second;
            }
            throw EvalError("unbound parameter '" + n.name + "'");
        }
        case Op::kNeg: return -eval_node(*n.a, x, bindings);
        case Op::kAdd: return eval_node(*n.a, x, bindings) + eval_node(*n.b, x, bindings);
        case Op::kSub: return eval_node(*n.a, x, bindings) - eval_node(*n.b, x, bindings);
        case Op::kMul: return eval_node(*n.a, x, bindings) * eval_node(*n.b, x, bindings);
        case Op::kDiv: {
            double num = eval_node(*n.a, x, bindings);
            double den = eval_node(*n.b, x, bindings);
            if (den == 0.0)
                throw EvalError("division by zero at x = " + format_double(x));
            return num / den;
        }
        case Op::kPow: return powi(eval_node(*n.a, x, bindings), n.exponent);
        case Op::kSin: return std::sin(eval_node(*n.a, x, bindings));
        case Op::kCos: return std::cos(eval_node(*n.a, x, bindings));
        case Op::kExp: return std::exp(eval_node(*n.a, x, bindings));
    }
    throw EvalError("corrupt expression node");
}

NodePtr diff_node(const NodePtr& n) {
    switch (n->op) {
        case Op::kNumber:
        case Op::kParam: return make_number(0.0);
        case Op::kVar: return make_number(1.0);
        case Op::kNeg: return make_unary(Op::kNeg, diff_node(n->a));
        case Op::kAdd: return make_binary(Op::kAdd, diff_node(n->a), diff_node(n->b));
        case Op::kSub: return make_binary(Op::kSub, diff_node(n->a), diff_node(n->b));
        case Op::kMul:
            // (uv)' = u'v + uv'
            return make_binary(Op::kAdd, make_binary(Op::kMul, diff_node(n->a), n->b),
                               make_binary(Op::kMul, n->a, diff_node(n->b)));
        case Op::kDiv:
            // (u/v)' = (u'v - uv') / v^2
            return make_binary(
                Op::kDiv,
                make_binary(Op::kSub, make_binary(Op::kMul, diff_node(n->a), n->b),
                            make_binary(Op::kMul, n->a, diff_node(n->b))),
                make_pow(n->b, 2));
        case Op::kPow: {
            if (n->exponent == 0) return make_number(0.0);
            // (u^k)' = k u^{k-1} u'
            return make_binary(
                Op::kMul,
                make_binary(Op::kMul, make_number(n->exponent), make_pow(n->a, n->exponent - 1)),
                diff_node(n->a));
        }
        case Op::kSin:
            return make_binary(Op::kMul, make_unary(Op::kCos, n->a), diff_node(n->a));
        case Op::kCos:
            return make_binary(Op::kMul, make_unary(Op::kNeg, make_unary(Op::kSin, n->a)),
                               diff_node(n->a));
        case Op::kExp:
            return make_binary(Op::kMul, make_unary(Op::kExp, n->a), diff_node(n->a));
    }
    throw EvalError("corrupt expression node");
}

NodePtr bind_node(const NodePtr& n, const Bindings& bindings) {
    switch (n->op) {
        case Op::kNumber:
        case Op::kVar: return n;
        case Op::kParam: {
            auto it = bindings.find(n->name);
            if (it == bindings.end())
                throw EvalError("unbound parameter '" + n->name + "'");
            return make_number(it->second);
        }
        case Op::kNeg: return make_unary(Op::kNeg, bind_node(n->a, bindings));
        case Op::kSin: return make_unary(Op::kSin, bind_node(n->a, bindings));
        case Op::kCos: return make_unary(Op::kCos, bind_node(n->a, bindings));
        case Op::kExp: return make_unary(Op::kExp, bind_node(n->a, bindings));
        case Op::kPow: return make_pow(bind_node(n->a, bindings), n->exponent);
        default:
            return make_binary(n->op, bind_node(n->a, bindings), bind_node(n->b, bindings));
    }
}

bool node_is_constant(const ExprNode& n) {
    switch (n.op) {
        case Op::kNumber: return true;
        case Op::kVar:
        case Op::kParam: return false;
        case Op::kNeg:
        case Op::kSin:
        case Op::kCos:
        case Op::kExp:
        case Op::kPow: return node_is_constant(*n.a);
        default: return node_is_constant(*n.a) && node_is_constant(*n.b);
    }
}

// Precedence levels for printing: additive < multiplicative < unary < power.
int precedence(Op op) {
    switch (op) {
        case Op::kAdd:
        case Op::kSub: return 1;
        case Op::kMul:
        case Op::kDiv: return 2;
        case Op::kNeg: return 3;
        case Op::kPow: return 4;
        default: return 5;
    }
}

void print_node(const ExprNode& n, std::ostream& os, int parent_prec) {
    const int prec = precedence(n.op);
    const bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (n.op) {
        case Op::kNumber:
            if (n.value < 0 || std::signbit(n.value)) {
                // negative literals print through unary minus so the text
                // stays inside the grammar
                os << '-';
                os << format_double(-n.value);
            } else {
                os << format_double(n.value);
            }
            break;
        case Op::kVar: os << 'x'; break;
        case Op::kParam: os << n.name; break;
        case Op::kNeg:
            os << '-';
            print_node(*n.a, os, prec);
            break;
        case Op::kAdd:
            print_node(*n.a, os, prec);
            os << '+';
            print_node(*n.b, os, prec + 1);
            break;
        case Op::kSub:
            print_node(*n.a, os, prec);
            os << '-';
            print_node(*n.b, os, prec + 1);
            break;
        case Op::kMul:
            print_node(*n.a, os, prec);
            os << '*';
            print_node(*n.b, os, prec + 1);
            break;
        case Op::kDiv:
            print_node(*n.a, os, prec);
            os << '/';
            print_node(*n.b, os, prec + 1);
            break;
        case Op::kPow:
            print_node(*n.a, os, prec + 1);
            os << '^' << n.exponent;
            break;
        case Op::kSin:
        case Op::kCos:
        case Op::kExp:
            os << (n.op == Op::kSin ? "sin" : n.op == Op::kCos ? "cos" : "exp") << '(';
            print_node(*n.a, os, 0);
            os << ')';
            break;
    }
    if (parens) os << ')';
}

void dump_node(const ExprNode& n, std::ostream& os) {
    switch (n.op) {
        case Op::kNumber: os << format_double(n.value); return;
        case Op::kVar: os << 'x'; return;
        case Op::kParam: os << n.name; return;
        default: break;
    }
    const char* tag = nullptr;
    switch (n.op) {
        case Op::kNeg: tag = "neg"; break;
        case Op::kAdd: tag = "+"; break;
        case Op::kSub: tag = "-"; break;
        case Op::kMul: tag = "*"; break;
        case Op::kDiv: tag = "/"; break;
        case Op::kPow: tag = "^"; break;
        case Op::kSin: tag = "sin"; break;
        case Op::kCos: tag = "cos"; break;
        case Op::kExp: tag = "exp"; break;
        default: tag = "?"; break;
    }
    os << '(' << tag;
    if (n.op == Op::kPow) {
        os << ' ';
        dump_node(*n.a, os);
        os << ' ' << n.exponent;
    } else {
        os << ' ';
        dump_node(*n.a, os);
        if (n.b) {
            os << ' ';
            dump_node(*n.b, os);
        }
    }
    os << ')';
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' exponent)?        exponent := integer ('^' integer)*
//   atom   := number | 'x' | 'pi' | param | func '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus and associates to the right; exponents
// are restricted to nonnegative integer literals so differentiation stays
// closed over the grammar.
// ---------------------------------------------------------------------------

struct Token {
    enum Kind { kNum, kIdent, kOp, kEnd } kind;
    double num = 0.0;
    std::string text;
    char op = 0;
    std::size_t offset = 0;
};

class Lexer {
public:
    Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size()) {
            t.kind = Token::kEnd;
            return t;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // 'e' belongs to the next token
                }
            }
            std::string text(src_.substr(start, pos_ - start));
            char* end = nullptr;
            t.num = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size())
                throw ParseError("malformed number '" + text + "'", start);
            t.kind = Token::kNum;
            t.text = text;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            t.kind = Token::kIdent;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
            ++pos_;
            t.kind = Token::kOp;
            t.op = c;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, const std::set<std::string>& params)
        : lexer_(src), params_(params) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        if (cur_.kind != Token::kEnd)
            throw ParseError("unexpected trailing input", cur_.offset);
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept_op(char c) {
        if (cur_.kind == Token::kOp && cur_.op == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect_op(char c) {
        if (!accept_op(c))
            throw ParseError(std::string("expected '") + c + "'", cur_.offset);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept_op('+'))
                lhs = make_binary(Op::kAdd, lhs, parse_term());
            else if (accept_op('-'))
                lhs = make_binary(Op::kSub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (accept_op('*'))
                lhs = make_binary(Op::kMul, lhs, parse_factor());
            else if (accept_op('/'))
                lhs = make_binary(Op::kDiv, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        if (accept_op('-')) return make_unary(Op::kNeg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!accept_op('^')) return base;
        return make_pow(base, parse_exponent());
    }

    int parse_exponent() {
        if (cur_.kind != Token::kNum)
            throw ParseError("exponent must be a nonnegative integer literal", cur_.offset);
        double v = cur_.num;
        std::size_t off = cur_.offset;
        if (v != std::floor(v) || v < 0 || v > 1e9)
            throw ParseError("exponent must be a nonnegative integer literal", off);
        advance();
        int e = static_cast<int>(v);
        if (accept_op('^')) return static_cast<int>(powi(e, parse_exponent()));  // right-assoc
        return e;
    }

    NodePtr parse_atom() {
        if (cur_.kind == Token::kNum) {
            double v = cur_.num;
            advance();
            return make_number(v);
        }
        if (cur_.kind == Token::kIdent) {
            std::string name = cur_.text;
            std::size_t off = cur_.offset;
            advance();
            if (name == "x") return std::make_shared<ExprNode>(Op::kVar);
            if (name == "pi") return make_number(M_PI);
            if (name == "sin" || name == "cos" || name == "exp") {
                expect_op('(');
                NodePtr arg = parse_expr();
                expect_op(')');
                Op op = name == "sin" ? Op::kSin : name == "cos" ? Op::kCos : Op::kExp;
                return make_unary(op, arg);
            }
            if (params_.count(name)) {
                auto n = std::make_shared<ExprNode>(Op::kParam);
                n->name = name;
                return n;
            }
            throw ParseError("unknown identifier '" + name + "'", off);
        }
        if (accept_op('(')) {
            NodePtr e = parse_expr();
            expect_op(')');
            return e;
        }
        throw ParseError("expected a number, identifier or '('", cur_.offset);
    }

    Lexer lexer_;
    Token cur_;
    const std::set<std::string>& params_;
};

}  // namespace
}  // namespace detail

using detail::ExprNode;
using detail::NodePtr;

Expr::Expr() : node_(detail::make_number(0.0)) {}
Expr::Expr(NodePtr node) : node_(std::move(node)) {}

Expr Expr::number(double v) { return Expr(detail::make_number(v)); }
Expr Expr::variable() { return Expr(std::make_shared<ExprNode>(detail::Op::kVar)); }

Expr Expr::parameter(const std::string& name) {
    auto n = std::make_shared<ExprNode>(detail::Op::kParam);
    n->name = name;
    return Expr(n);
}

double Expr::eval(double x, const Bindings& bindings) const {
    double v = detail::eval_node(*node_, x, &bindings);
    return v;
}

Expr Expr::diff() const { return Expr(detail::diff_node(node_)); }

Expr Expr::bind(const Bindings& bindings) const {
    return Expr(detail::bind_node(node_, bindings));
}

std::string Expr::str() const {
    std::ostringstream os;
    detail::print_node(*node_, os, 0);
    return os.str();
}

std::string Expr::dump() const {
    std::ostringstream os;
    detail::dump_node(*node_, os);
    return os.str();
}

bool Expr::is_constant() const { return detail::node_is_constant(*node_); }

Expr Expr::operator+(const Expr& rhs) const {
    return Expr(detail::make_binary(detail::Op::kAdd, node_, rhs.node_));
}
Expr Expr::operator-(const Expr& rhs) const {
    return Expr(detail::make_binary(detail::Op::kSub, node_, rhs.node_));
}
Expr Expr::operator*(const Expr& rhs) const {
    return Expr(detail::make_binary(detail::Op::kMul, node_, rhs.node_));
}
Expr Expr::operator-() const { return Expr(detail::make_unary(detail::Op::kNeg, node_)); }

Expr parse(std::string_view source, const std::set<std::string>& params) {
    detail::Parser p(source, params);
    return Expr(p.parse_all());
}

}  // namespace pinncert
