#pragma once

// Scalar holomorphic expressions supplied as text.
//
// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' int)?
//   base   := number | 'i' | 'z'digits | fn '(' expr ')' | '(' expr ')' | '-' base
//   fn     := exp | log | sqrt          (principal branches)
//
// Note the grammar places unary minus inside `base`, so "-z1^2" parses as
// (-z1)^2; the printer preserves that reading.

#include <memory>
#include <string>
#include <vector>

#include "blochlab/linalg.hpp"

namespace blochlab {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Op { Const, Imag, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt };
    Op op = Op::Const;
    cx value{};     // Const payload
    int index = 0;  // Var: 1-based coordinate; Pow: integer exponent
    ExprPtr a, b;
};

// Node builders with identity simplifications (0+x → x, 1·x → x, x^1 → x, …)
// so symbolic derivatives stay readable. Negative real constants normalize to
// Neg(Const) to match what the parser would produce.
ExprPtr expr_const(cx v);
ExprPtr expr_imag();
ExprPtr expr_var(int index1);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_add(ExprPtr a, ExprPtr b);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_div(ExprPtr a, ExprPtr b);
ExprPtr expr_pow(ExprPtr a, int k);
ExprPtr expr_fn(ExprNode::Op fn, ExprPtr a);

// Throws ValidationError with the offending position on syntax errors and on
// variable indices above `dimension`.
ExprPtr parse_expr(const std::string& text, int dimension);

// Emits text that re-parses to a structurally identical tree.
std::string print_expr(const ExprPtr& ast);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

int expr_max_var(const ExprPtr& ast);

// Principal-branch evaluation. Divisors of modulus < 1e-14, log 0, and
// negative powers of near-zero bases raise SingularityError. Contact with the
// log/sqrt branch cut (Re < 0 and |Im| < 1e-12) appends a note to `warnings`
// when given.
cx eval_expr(const ExprPtr& ast, const CVec& z,
             std::vector<std::string>* warnings = nullptr);

// Symbolic partials ∂f/∂z_j for j = 1..dimension.
std::vector<ExprPtr> expr_gradient(const ExprPtr& ast, int dimension);

} // namespace blochlab
