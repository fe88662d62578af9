#pragma once

// Random expression trees for the differentiation suites. Depth-bounded and
// biased toward benign numerics: log/sqrt arguments and divisors get a
// positive offset so most draws evaluate cleanly on the small test boxes.
// Candidates that still hit a singularity or an unstable finite difference
// are screened out by gradient_fd_check, not counted as failures.

#include <cmath>

#include "blochlab/expr.hpp"
#include "test_util.hpp"

namespace testu {

using blochlab::ExprNode;
using blochlab::ExprPtr;

inline ExprPtr random_expr(Rng& rng, int dim, int depth) {
    namespace b = blochlab;
    if (depth <= 0) {
        double a = rng.uniform();
        if (a < 0.5) return b::expr_var(1 + static_cast<int>(rng.uniform() * dim));
        if (a < 0.65) return b::expr_imag();
        return b::expr_const(0.25 + 0.25 * static_cast<int>(rng.uniform() * 10));
    }
    double p = rng.uniform();
    if (p < 0.18)
        return b::expr_add(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
    if (p < 0.34)
        return b::expr_sub(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
    if (p < 0.52)
        return b::expr_mul(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
    if (p < 0.62)
        return b::expr_div(random_expr(rng, dim, depth - 1),
                           b::expr_add(b::expr_const(1.5 + rng.uniform()),
                                       random_expr(rng, dim, depth - 1)));
    if (p < 0.70) return b::expr_neg(random_expr(rng, dim, depth - 1));
    if (p < 0.80)
        return b::expr_pow(random_expr(rng, dim, depth - 1),
                           2 + static_cast<int>(rng.uniform() * 2));
    if (p < 0.88) return b::expr_fn(ExprNode::Op::Exp, random_expr(rng, dim, depth - 1));
    ExprNode::Op fn = p < 0.94 ? ExprNode::Op::Log : ExprNode::Op::Sqrt;
    return b::expr_fn(fn, b::expr_add(b::expr_const(2.0 + rng.uniform()),
                                      random_expr(rng, dim, depth - 1)));
}

struct GradCheckOutcome {
    bool usable;  // candidate evaluated cleanly and the FD stencil is stable
    double err;   // relative gap between symbolic and central differences
};

inline GradCheckOutcome gradient_fd_check(const ExprPtr& e, const blochlab::CVec& z) {
    namespace b = blochlab;
    const int dim = static_cast<int>(z.size());
    const double h = 1e-5;
    try {
        double scale = std::abs(b::eval_expr(e, z));
        if (!std::isfinite(scale) || scale > 1e4) return {false, 0.0};
        std::vector<ExprPtr> grad = b::expr_gradient(e, dim);
        double err = 0.0, gnorm = 0.0;
        for (int j = 0; j < dim; ++j) {
            b::cx sym = b::eval_expr(grad[j], z);
            if (!std::isfinite(std::abs(sym)) || std::abs(sym) > 1e4) return {false, 0.0};
            b::CVec zp = z, zm = z;
            zp[j] = z[j] + h;
            zm[j] = z[j] - h;
            b::cx f1 = (b::eval_expr(e, zp) - b::eval_expr(e, zm)) / (2.0 * h);
            zp[j] = z[j] + 0.5 * h;
            zm[j] = z[j] - 0.5 * h;
            b::cx f2 = (b::eval_expr(e, zp) - b::eval_expr(e, zm)) / h;
            // two-step agreement screens out branch-cut crossings and blowups
            if (std::abs(f1 - f2) > 1e-7 * std::max(1.0, std::abs(f2))) return {false, 0.0};
            err += std::norm(sym - f2);
            gnorm += std::norm(sym);
        }
        return {true, std::sqrt(err) / std::max(1.0, std::sqrt(gnorm))};
    } catch (const b::SingularityError&) {
        return {false, 0.0};
    }
}

} // namespace testu
