#include "blochlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "blochlab/errors.hpp"

namespace blochlab {
namespace {

long long lcm_checked(long long a, long long b) {
    const long long g = std::gcd(a, b);
    const long long scaled = a / g;
    if (scaled > std::numeric_limits<long long>::max() / b)
        throw ValidationError("spectrum: cyclic group order overflows");
    return scaled * b;
}

void require_permutation(const std::vector<int>& tau) {
    const int n = static_cast<int>(tau.size());
    if (n == 0) throw ValidationError("permutation: empty image list");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int image : tau) {
        if (image < 1 || image > n || seen[static_cast<std::size_t>(image - 1)])
            throw ValidationError("permutation: image list is not a bijection of {1..n}");
        seen[static_cast<std::size_t>(image - 1)] = 1;
    }
}

// Turns form ℚ/ℤ; all subgroup arithmetic happens on reduced fractions.
RotationNumber turn_fraction(long long p, long long q) { return RotationNumber::rational(p, q); }

}  // namespace

RotationNumber RotationNumber::rational(long long p, long long q) {
    if (q <= 0) throw ValidationError("rotation number: denominator must be positive");
    RotationNumber r;
    r.rational_ = true;
    p %= q;
    if (p < 0) p += q;
    const long long g = std::gcd(p, q);
    r.p_ = p / (g == 0 ? 1 : g);
    r.q_ = q / (g == 0 ? 1 : g);
    if (p == 0) {
        r.p_ = 0;
        r.q_ = 1;
    }
    return r;
}

RotationNumber RotationNumber::irrational(double approx, std::string label) {
    if (!(approx >= 0.0 && approx < 1.0))
        throw ValidationError("rotation number: irrational turn must lie in [0,1)");
    RotationNumber r;
    r.rational_ = false;
    r.approx_ = approx;
    r.label_ = std::move(label);
    return r;
}

double RotationNumber::turn() const {
    return rational_ ? static_cast<double>(p_) / static_cast<double>(q_) : approx_;
}

cx RotationNumber::unimodular() const { return std::polar(1.0, 2.0 * std::numbers::pi * turn()); }

std::string RotationNumber::turn_string() const {
    if (rational_) return std::to_string(p_) + "/" + std::to_string(q_);
    if (!label_.empty()) return label_;
    std::ostringstream out;
    out << approx_;
    return out.str();
}

RotationNumber RotationNumber::plus(const RotationNumber& other) const {
    if (!rational_ || !other.rational_)
        throw ValidationError("rotation number: exact addition needs rational turns");
    const long long q = lcm_checked(q_, other.q_);
    return rational(p_ * (q / q_) + other.p_ * (q / other.q_), q);
}

RotationNumber RotationNumber::inverse() const {
    if (!rational_) throw ValidationError("rotation number: exact inverse needs a rational turn");
    return rational(q_ - p_, q_);
}

bool operator==(const RotationNumber& a, const RotationNumber& b) {
    if (!a.rational_ || !b.rational_)
        throw ValidationError("rotation number: declared irrationals have no exact equality");
    return a.p_ == b.p_ && a.q_ == b.q_;
}

bool operator!=(const RotationNumber& a, const RotationNumber& b) { return !(a == b); }

std::optional<long long> order(const RotationNumber& r) {
    if (!r.is_rational()) return std::nullopt;
    return r.q();
}

CycleDecomposition cycle_decomposition(const std::vector<int>& tau) {
    require_permutation(tau);
    const int n = static_cast<int>(tau.size());
    CycleDecomposition out;
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    for (int start = 1; start <= n; ++start) {
        if (visited[static_cast<std::size_t>(start - 1)]) continue;
        std::vector<int> cycle;
        int at = start;
        do {
            visited[static_cast<std::size_t>(at - 1)] = 1;
            cycle.push_back(at);
            at = tau[static_cast<std::size_t>(at - 1)];
        } while (at != start);
        out.order = lcm_checked(out.order, static_cast<long long>(cycle.size()));
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

SpectrumResult spectrum(const PolydiskSymbol& sym) {
    SpectrumResult result;
    switch (sym.class_hint) {
    case SymbolClass::Unknown:
        throw ValidationError(
            "spectrum: symbol class is Unknown; classify the symbol (e.g. via the isometry "
            "checkers) first");
    case SymbolClass::NonAutoOnto:
        result.kind = SpectrumResult::Kind::ClosedUnitDisk;
        return result;
    case SymbolClass::Automorphism:
        break;
    }

    if (sym.lambdas.empty() || sym.lambdas.size() != sym.tau.size())
        throw ValidationError("spectrum: automorphism symbol needs one rotation per coordinate");
    const CycleDecomposition cycles = cycle_decomposition(sym.tau);

    for (const RotationNumber& lambda : sym.lambdas)
        if (!lambda.is_rational()) {
            result.kind = SpectrumResult::Kind::UnitCircle;
            return result;
        }

    long long L = cycles.order;
    long long G = 1;
    for (const RotationNumber& lambda : sym.lambdas) {
        L = lcm_checked(L, lambda.q());
        G = lcm_checked(G, lambda.q());
    }

    result.kind = SpectrumResult::Kind::FiniteCyclicGroup;
    result.group_order = L;
    result.elements.reserve(static_cast<std::size_t>(L));
    for (long long k = 0; k < L; ++k) result.elements.push_back(turn_fraction(k, L));
    result.guaranteed_eigenvalues.reserve(static_cast<std::size_t>(G));
    for (long long k = 0; k < G; ++k) result.guaranteed_eigenvalues.push_back(turn_fraction(k, G));
    return result;
}

cx resolvent_determinant(int alpha, cx mu) {
    if (alpha < 1) throw ValidationError("resolvent determinant: cycle length must be positive");
    const int n = alpha;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = -mu;
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) += cx(1.0);
    a(n - 1, 0) += cx(1.0);

    // Gaussian elimination with partial pivoting; the determinant is the
    // pivot product with the row-swap sign.
    cx det(1.0);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
        if (std::abs(a(pivot, col)) == 0.0) return cx(0.0);
        if (pivot != col) {
            for (int k = col; k < n; ++k) std::swap(a(col, k), a(pivot, k));
            det = -det;
        }
        det *= a(col, col);
        for (int row = col + 1; row < n; ++row) {
            const cx factor = a(row, col) / a(col, col);
            for (int k = col; k < n; ++k) a(row, k) -= factor * a(col, k);
        }
    }
    return det;
}

std::vector<CVec> permutation_eigenfunctions(const std::vector<int>& tau,
                                             const std::vector<RotationNumber>& lambdas,
                                             const RotationNumber& eig) {
    require_permutation(tau);
    if (lambdas.size() != tau.size())
        throw ValidationError("eigenfunctions: one rotation per coordinate required");
    if (!eig.is_rational())
        throw ValidationError("eigenfunctions: candidate eigenvalue must be an exact turn");

    const std::size_t n = tau.size();
    const CycleDecomposition cycles = cycle_decomposition(tau);
    std::vector<CVec> basis;
    for (const std::vector<int>& cycle : cycles.cycles) {
        // Nontrivial solutions on this cycle exist iff Π λ_{c_i} = λ_eig^α.
        bool exact = true;
        RotationNumber product = RotationNumber::rational(0, 1);
        RotationNumber target = RotationNumber::rational(0, 1);
        for (int idx : cycle) {
            const RotationNumber& lambda = lambdas[static_cast<std::size_t>(idx - 1)];
            if (!lambda.is_rational()) {
                exact = false;
                break;
            }
            product = product.plus(lambda);
            target = target.plus(eig);
        }
        if (!exact || !(product == target)) continue;

        // x_{τ(j)} = (λ_j / λ_eig) x_j walked around the cycle; the turns are
        // exact rationals, so the loop closes identically.
        CVec x(n, cx(0.0));
        RotationNumber t = RotationNumber::rational(0, 1);
        for (int idx : cycle) {
            x[static_cast<std::size_t>(idx - 1)] = t.unimodular();
            t = t.plus(lambdas[static_cast<std::size_t>(idx - 1)]).plus(eig.inverse());
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace blochlab
