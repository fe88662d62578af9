#pragma once

// Exact spectra of composition operators with rotation-type polydisk
// symbols. Everything here is integer/rational arithmetic on turns: a
// unimodular constant is either an exact fraction p/q of a full turn or a
// declared irrational. Order is discontinuous in the angle, so no
// floating-point inference happens anywhere in this module.
//
// Permutations are 1-based image lists: tau[k-1] is the image of k.

#include <optional>
#include <string>
#include <vector>

#include "blochlab/linalg.hpp"

namespace blochlab {

class RotationNumber {
public:
    // e^{2πi·p/q}; stored reduced with 0 ≤ p < q.
    static RotationNumber rational(long long p, long long q);
    static RotationNumber irrational(double approx, std::string label = {});

    bool is_rational() const { return rational_; }
    long long p() const { return p_; }
    long long q() const { return q_; }
    double turn() const;        // p/q, or the declared approximation
    const std::string& label() const { return label_; }
    cx unimodular() const;      // e^{2πi·turn}
    std::string turn_string() const;

    RotationNumber plus(const RotationNumber& other) const;  // rational only
    RotationNumber inverse() const;                          // rational only

    // Exact equality is defined for rational pairs only; comparing a
    // declared irrational is a contract violation and throws.
    friend bool operator==(const RotationNumber& a, const RotationNumber& b);
    friend bool operator!=(const RotationNumber& a, const RotationNumber& b);

private:
    RotationNumber() = default;
    bool rational_ = true;
    long long p_ = 0, q_ = 1;
    double approx_ = 0.0;
    std::string label_;
};

// Smallest positive k with λ^k = 1; nullopt means infinite order.
std::optional<long long> order(const RotationNumber& r);

enum class SymbolClass { Automorphism, NonAutoOnto, Unknown };

// φ(z) = (λ₁ z_{τ(1)}, …, λₙ z_{τ(n)}) when Automorphism; otherwise the
// class hint is caller-supplied knowledge about an isometric symbol.
struct PolydiskSymbol {
    std::vector<RotationNumber> lambdas;
    std::vector<int> tau;  // 1-based images
    SymbolClass class_hint = SymbolClass::Unknown;
};

struct CycleDecomposition {
    std::vector<std::vector<int>> cycles;  // 1-based, traversal order
    long long order = 1;                   // lcm of the cycle lengths
};

CycleDecomposition cycle_decomposition(const std::vector<int>& tau);

struct SpectrumResult {
    enum class Kind { ClosedUnitDisk, UnitCircle, FiniteCyclicGroup };
    Kind kind = Kind::ClosedUnitDisk;
    long long group_order = 0;                           // FiniteCyclicGroup only
    std::vector<RotationNumber> elements;                // exactly {k/L}
    std::vector<RotationNumber> guaranteed_eigenvalues;  // subgroup from the λ_j
};

// NonAutoOnto → closed unit disk; automorphism with an irrational rotation →
// unit circle; automorphism with all rotations rational → the cyclic group of
// order lcm(q₁,…,qₙ, ord τ). Guaranteed eigenvalues are the subgroup the λ_j
// generate on their own; whether the rest of the group consists of
// eigenvalues is left open, which is why the two lists are separate.
SpectrumResult spectrum(const PolydiskSymbol& sym);

// Determinant of the α×α matrix with −μ on the diagonal, 1 on the
// superdiagonal and 1 in the lower-left corner; equals (−1)^α(μ^α − 1).
cx resolvent_determinant(int alpha, cx mu);

// Coefficient vectors x with f(φ(z)) = λ_eig f(z) for f(z) = Σ x_j z_j.
// One basis vector per τ-cycle whose rotation product matches λ_eig^α
// exactly; an empty list is a valid outcome. Cycles carrying a declared
// irrational rotation never match a rational candidate.
std::vector<CVec> permutation_eigenfunctions(const std::vector<int>& tau,
                                             const std::vector<RotationNumber>& lambdas,
                                             const RotationNumber& eig);

}  // namespace blochlab
