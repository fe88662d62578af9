#include "blochlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace blochlab {

namespace {

using Op = ExprNode::Op;

ExprPtr make(Op op, cx value, int index, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->value = value;
    n->index = index;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const ExprPtr& e, double v) {
    return e->op == Op::Const && e->value == cx(v);
}

} // namespace

ExprPtr expr_const(cx v) {
    if (v.imag() == 0.0 && v.real() < 0.0) return expr_neg(expr_const(-v));
    return make(Op::Const, v, 0, nullptr, nullptr);
}

ExprPtr expr_imag() { return make(Op::Imag, cx(0.0, 1.0), 0, nullptr, nullptr); }

ExprPtr expr_var(int index1) {
    if (index1 < 1) throw ValidationError("variable index must be positive");
    return make(Op::Var, 0.0, index1, nullptr, nullptr);
}

ExprPtr expr_neg(ExprPtr a) {
    if (is_const(a, 0.0)) return a;
    if (a->op == Op::Neg) return a->a;
    return make(Op::Neg, 0.0, 0, std::move(a), nullptr);
}

ExprPtr expr_add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make(Op::Add, 0.0, 0, std::move(a), std::move(b));
}

ExprPtr expr_sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return expr_neg(std::move(b));
    return make(Op::Sub, 0.0, 0, std::move(a), std::move(b));
}

ExprPtr expr_mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return a;
    if (is_const(b, 0.0)) return b;
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make(Op::Mul, 0.0, 0, std::move(a), std::move(b));
}

ExprPtr expr_div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return a;
    if (is_const(b, 1.0)) return a;
    return make(Op::Div, 0.0, 0, std::move(a), std::move(b));
}

ExprPtr expr_pow(ExprPtr a, int k) {
    if (k == 1) return a;
    if (k == 0) return expr_const(1.0);
    return make(Op::Pow, 0.0, k, std::move(a), nullptr);
}

ExprPtr expr_fn(Op fn, ExprPtr a) {
    if (fn != Op::Exp && fn != Op::Log && fn != Op::Sqrt)
        throw ValidationError("expr_fn expects exp, log, or sqrt");
    return make(fn, 0.0, 0, std::move(a), nullptr);
}

namespace {

class ExprParser {
public:
    ExprParser(const std::string& text, int dim) : s_(text), dim_(dim) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("expression syntax error at position " + std::to_string(pos_) +
                              ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+'))
                e = expr_add(e, term());
            else if (eat('-'))
                e = expr_sub(e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (eat('*'))
                e = expr_mul(e, factor());
            else if (eat('/'))
                e = expr_div(e, factor());
            else
                return e;
        }
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (eat('^')) return expr_pow(std::move(b), exponent());
        return b;
    }

    ExprPtr base() {
        char c = peek();
        if (c == '\0') fail("unexpected end of expression");
        if (c == '-') {
            ++pos_;
            return expr_neg(base());
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    int exponent() {
        skip_ws();
        bool negative = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            negative = s_[pos_] == '-';
            ++pos_;
        }
        size_t start = pos_;
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1000000) fail("exponent out of range");
            ++pos_;
        }
        if (pos_ == start) fail("expected integer exponent");
        return static_cast<int>(negative ? -v : v);
    }

    ExprPtr number() {
        size_t start = pos_;
        bool digits = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
            digits = true;
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
                digits = true;
            }
        }
        if (!digits) fail("malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            size_t dstart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ == dstart) pos_ = mark;  // bare 'e' belongs to the next token
        }
        return expr_const(std::stod(s_.substr(start, pos_ - start)));
    }

    ExprPtr identifier() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "i") return expr_imag();
        if (name == "z") {
            size_t dstart = pos_;
            long idx = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                idx = idx * 10 + (s_[pos_] - '0');
                if (idx > 1000000) fail("variable index out of range");
                ++pos_;
            }
            if (pos_ == dstart) fail("expected digits after 'z'");
            if (idx < 1 || idx > dim_)
                throw ValidationError("variable z" + std::to_string(idx) +
                                      " exceeds declared dimension " + std::to_string(dim_));
            return expr_var(static_cast<int>(idx));
        }
        if (name == "exp" || name == "log" || name == "sqrt") {
            if (!eat('(')) fail("expected '(' after function name");
            ExprPtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            return expr_fn(name == "exp" ? Op::Exp : name == "log" ? Op::Log : Op::Sqrt,
                           std::move(arg));
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    const std::string& s_;
    int dim_;
    size_t pos_ = 0;
};

} // namespace

ExprPtr parse_expr(const std::string& text, int dimension) {
    if (dimension < 1) throw ValidationError("expression dimension must be positive");
    return ExprParser(text, dimension).run();
}

namespace {

bool is_atom(const ExprPtr& e) {
    return e->op == Op::Const || e->op == Op::Imag || e->op == Op::Var || e->op == Op::Exp ||
           e->op == Op::Log || e->op == Op::Sqrt;
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int prec(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        default: return 4;
    }
}

void print_node(const ExprPtr& e, std::string& out);

void print_child(const ExprPtr& c, std::string& out, int parent_prec, bool right) {
    bool parens = prec(c->op) < parent_prec || (right && prec(c->op) == parent_prec) ||
                  (right && c->op == Op::Neg);
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
}

void print_node(const ExprPtr& e, std::string& out) {
    switch (e->op) {
        case Op::Const:
            if (e->value.imag() == 0.0) {
                out += fmt_real(e->value.real());
            } else if (e->value.real() == 0.0 && e->value.imag() == 1.0) {
                out += 'i';
            } else {
                out += '(' + fmt_real(e->value.real()) +
                       (e->value.imag() < 0 ? "-" : "+") + fmt_real(std::abs(e->value.imag())) +
                       "*i)";
            }
            return;
        case Op::Imag: out += 'i'; return;
        case Op::Var: out += 'z' + std::to_string(e->index); return;
        case Op::Neg:
            out += '-';
            // the child must read as a single `base`
            if (is_atom(e->a) || e->a->op == Op::Neg) {
                print_node(e->a, out);
            } else {
                out += '(';
                print_node(e->a, out);
                out += ')';
            }
            return;
        case Op::Add:
        case Op::Sub:
            print_child(e->a, out, 1, false);
            out += e->op == Op::Add ? '+' : '-';
            print_child(e->b, out, 1, true);
            return;
        case Op::Mul:
        case Op::Div:
            print_child(e->a, out, 2, false);
            out += e->op == Op::Mul ? '*' : '/';
            print_child(e->b, out, 2, true);
            return;
        case Op::Pow:
            // a bare '-'base keeps its grammar reading (-x)^k; composite
            // bases need parentheses
            if (is_atom(e->a) || e->a->op == Op::Neg) {
                print_node(e->a, out);
            } else {
                out += '(';
                print_node(e->a, out);
                out += ')';
            }
            out += '^' + std::to_string(e->index);
            return;
        case Op::Exp:
        case Op::Log:
        case Op::Sqrt:
            out += e->op == Op::Exp ? "exp(" : e->op == Op::Log ? "log(" : "sqrt(";
            print_node(e->a, out);
            out += ')';
            return;
    }
}

} // namespace

std::string print_expr(const ExprPtr& ast) {
    if (!ast) throw ValidationError("print_expr: empty expression");
    std::string out;
    print_node(ast, out);
    return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->value != b->value || a->index != b->index) return false;
    return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
}

int expr_max_var(const ExprPtr& ast) {
    if (!ast) return 0;
    int m = ast->op == Op::Var ? ast->index : 0;
    return std::max({m, expr_max_var(ast->a), expr_max_var(ast->b)});
}

namespace {

constexpr double kDivFloor = 1e-14;

void warn(std::vector<std::string>* w, const char* msg) {
    if (w && std::find(w->begin(), w->end(), msg) == w->end()) w->push_back(msg);
}

cx ipow(cx v, int k) {
    if (k < 0) {
        cx p = ipow(v, -k);
        if (std::abs(p) < kDivFloor)
            throw SingularityError("negative power of a near-zero base");
        return 1.0 / p;
    }
    cx r = 1.0;
    while (k) {
        if (k & 1) r *= v;
        v *= v;
        k >>= 1;
    }
    return r;
}

// A computed -0.0 imaginary part would flip log/sqrt onto the lower branch;
// principal values are defined by approach from above.
cx unsign_zero(cx v) { return v.imag() == 0.0 ? cx(v.real(), 0.0) : v; }

cx eval_node(const ExprPtr& e, const CVec& z, std::vector<std::string>* w) {
    switch (e->op) {
        case Op::Const: return e->value;
        case Op::Imag: return cx(0.0, 1.0);
        case Op::Var:
            if (e->index > static_cast<int>(z.size()))
                throw ValidationError("expression variable z" + std::to_string(e->index) +
                                      " exceeds point dimension");
            return z[e->index - 1];
        case Op::Neg: return -eval_node(e->a, z, w);
        case Op::Add: return eval_node(e->a, z, w) + eval_node(e->b, z, w);
        case Op::Sub: return eval_node(e->a, z, w) - eval_node(e->b, z, w);
        case Op::Mul: return eval_node(e->a, z, w) * eval_node(e->b, z, w);
        case Op::Div: {
            cx num = eval_node(e->a, z, w);
            cx den = eval_node(e->b, z, w);
            if (std::abs(den) < kDivFloor)
                throw SingularityError("division by a value of modulus below 1e-14");
            return num / den;
        }
        case Op::Pow: {
            cx v = eval_node(e->a, z, w);
            if (e->index < 0 && std::abs(v) < kDivFloor)
                throw SingularityError("negative power of a near-zero base");
            return ipow(v, e->index);
        }
        case Op::Exp: return std::exp(eval_node(e->a, z, w));
        case Op::Log: {
            cx v = unsign_zero(eval_node(e->a, z, w));
            if (std::abs(v) == 0.0) throw SingularityError("log of zero");
            if (v.real() < 0.0 && std::abs(v.imag()) < 1e-12)
                warn(w, "log evaluated on its branch cut (negative real axis)");
            return std::log(v);
        }
        case Op::Sqrt: {
            cx v = unsign_zero(eval_node(e->a, z, w));
            if (v.real() < 0.0 && std::abs(v.imag()) < 1e-12)
                warn(w, "sqrt evaluated on its branch cut (negative real axis)");
            return std::sqrt(v);
        }
    }
    throw ValidationError("malformed expression node");
}

ExprPtr derivative(const ExprPtr& e, int j) {
    switch (e->op) {
        case Op::Const:
        case Op::Imag: return expr_const(0.0);
        case Op::Var: return expr_const(e->index == j ? 1.0 : 0.0);
        case Op::Neg: return expr_neg(derivative(e->a, j));
        case Op::Add: return expr_add(derivative(e->a, j), derivative(e->b, j));
        case Op::Sub: return expr_sub(derivative(e->a, j), derivative(e->b, j));
        case Op::Mul:
            return expr_add(expr_mul(derivative(e->a, j), e->b),
                            expr_mul(e->a, derivative(e->b, j)));
        case Op::Div:
            return expr_div(expr_sub(expr_mul(derivative(e->a, j), e->b),
                                     expr_mul(e->a, derivative(e->b, j))),
                            expr_pow(e->b, 2));
        case Op::Pow:
            if (e->index == 0) return expr_const(0.0);
            return expr_mul(expr_mul(expr_const(e->index), expr_pow(e->a, e->index - 1)),
                            derivative(e->a, j));
        case Op::Exp: return expr_mul(expr_fn(Op::Exp, e->a), derivative(e->a, j));
        case Op::Log: return expr_div(derivative(e->a, j), e->a);
        case Op::Sqrt:
            return expr_div(derivative(e->a, j),
                            expr_mul(expr_const(2.0), expr_fn(Op::Sqrt, e->a)));
    }
    throw ValidationError("malformed expression node");
}

} // namespace

cx eval_expr(const ExprPtr& ast, const CVec& z, std::vector<std::string>* warnings) {
    if (!ast) throw ValidationError("eval_expr: empty expression");
    return eval_node(ast, z, warnings);
}

std::vector<ExprPtr> expr_gradient(const ExprPtr& ast, int dimension) {
    if (!ast) throw ValidationError("expr_gradient: empty expression");
    if (dimension < 1) throw ValidationError("expr_gradient: dimension must be positive");
    if (expr_max_var(ast) > dimension)
        throw ValidationError("expression references variables beyond the given dimension");
    std::vector<ExprPtr> grad;
    grad.reserve(dimension);
    for (int j = 1; j <= dimension; ++j) grad.push_back(derivative(ast, j));
    return grad;
}

} // namespace blochlab
