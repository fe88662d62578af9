#pragma once

// Holomorphic maps with analytic Jacobians.
//
// A HoloMap is an immutable value: a domain, a codomain (a DomainSpec for
// maps landing in a bounded domain, absent for scalar/ℂ^k-valued functions),
// and per-kind parameters. Jacobians are closed-form or symbolic for every
// kind; finite differences appear only in tests, as cross-checks.
//
// Jacobian layout: J(i,j) = ∂w_i/∂z_j, rows = codomain dimension.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blochlab/domains.hpp"
#include "blochlab/expr.hpp"

namespace blochlab {

class HoloMap;

// Parameter record; only the fields of the active kind are meaningful.
// Exposed read-only for introspection (zeros of a Blaschke product, the
// center of an involution, …).
struct MapNode;

class HoloMap {
public:
    enum class Kind {
        MobiusDisk,            // z ↦ e^{iθ}(a−z)/(1−āz)
        BallAutomorphism,      // U ∘ φ_a
        PolydiskAutomorphism,  // w_k = T_k(z_{τ(k)})
        BlaschkeProduct,       // Π (z̄_k/|z_k|)(z_k−z)/(1−z̄_k z), factor z at z_k=0
        Projection,            // z ↦ z_j
        ModifiedProjection,    // z ↦ z_r ± i·z_s
        DiagonalEmbedding,     // z ↦ (z,…,z)
        ExtremalLogMap,        // z ↦ ½ log((‖a‖+⟨z,a⟩)/(‖a‖−⟨z,a⟩))
        Example51Map,          // (z,ζ) ↦ (U(z), φ(ζ)) with U(0)=0
        ProductMap,
        Compose,
        Constant,
        ExprMap,
        Identity,
    };

    static HoloMap mobius_disk(cx a, double theta);
    static HoloMap ball_automorphism(CMatrix unitary, Point a);
    static HoloMap polydisk_automorphism(std::vector<HoloMap> mobius_components,
                                         std::vector<int> tau);  // tau 0-based
    static HoloMap blaschke_product(CVec zeros, cx front = cx(1.0));
    static HoloMap projection(DomainSpec domain, int j);  // j 1-based
    static HoloMap modified_projection(DomainSpec domain, int r, int s, int sign);
    static HoloMap diagonal_embedding(int n);
    static HoloMap extremal_log_map(Point a);
    static HoloMap example51(HoloMap origin_fixing_automorphism, HoloMap disk_self_map);
    static HoloMap product_map(std::vector<HoloMap> factors);
    static HoloMap constant(DomainSpec domain, Point value);
    static HoloMap expr_map(DomainSpec domain, const std::vector<std::string>& components);
    static HoloMap expr_map(DomainSpec domain, std::vector<ExprPtr> components);
    static HoloMap identity(DomainSpec domain);

    Kind kind() const;
    const DomainSpec& domain() const;
    const std::optional<DomainSpec>& codomain() const;
    int codomain_dim() const;
    const MapNode& node() const { return *node_; }

    // Requires z interior to domain(). Warnings (log/sqrt branch contact in
    // expression components) are appended when a sink is given.
    Point evaluate(const Point& z, std::vector<std::string>* warnings = nullptr) const;
    CMatrix jacobian(const Point& z) const;

private:
    explicit HoloMap(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}
    friend HoloMap compose(HoloMap f, HoloMap g);
    std::shared_ptr<const MapNode> node_;
};

struct MapNode {
    HoloMap::Kind kind;
    DomainSpec domain = DomainSpec::disk();
    std::optional<DomainSpec> codomain;
    int codim = 1;

    cx a{};                       // MobiusDisk center
    double theta = 0.0;           // MobiusDisk rotation
    CMatrix unitary;              // BallAutomorphism
    Point center;                 // BallAutomorphism / ExtremalLogMap a, Constant value
    std::vector<HoloMap> subs;    // components / factors / {outer, inner}
    std::vector<int> tau;         // PolydiskAutomorphism permutation, 0-based
    CVec zeros;                   // BlaschkeProduct
    cx front = cx(1.0);           // BlaschkeProduct unimodular factor
    int j = 0, r = 0, s = 0;      // projection slots, 1-based
    int sign = +1;                // ModifiedProjection
    std::vector<ExprPtr> comps;   // ExprMap components
    std::vector<std::vector<ExprPtr>> grads;  // ExprMap symbolic gradients
};

// f ∘ g; requires dim(domain of f) = codomain dimension of g.
HoloMap compose(HoloMap f, HoloMap g);

// The involutive automorphism exchanging a and 0: Möbius per disk factor,
// the ball involution on ball factors. Cartan factors are not provided.
HoloMap involution_at(const DomainSpec& spec, const Point& a);

// True for the automorphism kinds (and products/compositions thereof).
bool is_automorphism(const HoloMap& map);

} // namespace blochlab
