#pragma once

// Numerical checkers for composition-operator isometries.
//
// On the disk, C_φ is an isometry of the Bloch space exactly when φ(0) = 0
// and the symbol is extremal enough (a rotation, or in the candidate cases
// an infinite Blaschke product with thin zeros). The checkers here measure
// the finite, computable shadows of those conditions: estimated seminorm and
// dilation (target 1), the deleted products d_k at the supplied zeros, and
// the residuals of φ∘S_k against the identity for proposed automorphism
// sequences. A verdict is three-valued on purpose: the infinite conditions
// cannot be certified from a truncation, so "consistent" reports proximity
// and never claims a proof.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blochlab/bloch_analysis.hpp"
#include "blochlab/domains.hpp"
#include "blochlab/maps.hpp"

namespace blochlab {

enum class IsometryVerdict {
    ConsistentWithIsometry,
    FailsNecessaryCondition,
    AutomorphismExact,
};

struct IsometryReport {
    bool fixes_origin = false;
    double beta_hat = 0.0;     // certified lower bound for the symbol seminorm
    double bergman_hat = 0.0;  // certified lower bound for the metric dilation
    // sup_k (1−|z_k|²)|φ′(z_k)| over the supplied zeros; Blaschke symbols only.
    std::optional<double> condition_e_value;
    std::vector<double> thinness_profile;       // d_k per zero, Blaschke symbols
    std::vector<double> condition_g_residuals;  // ‖φ∘S_k − id‖ on the default grid
    int truncation_level = 0;                   // number of zeros probed
    IsometryVerdict verdict = IsometryVerdict::ConsistentWithIsometry;
    std::string verdict_reason;  // "origin" or "beta" when a condition fails
};

// Deleted pseudo-hyperbolic products d_k = Π_{j≠k} |(z_k−z_j)/(1−z̄_j z_k)|.
// An empty deleted product is 1; duplicate zeros are rejected.
std::vector<double> thinness_products(const CVec& zeros);

// Necessary-condition report for a holomorphic self-map of the disk.
IsometryReport check_disk_isometry(const HoloMap& phi, const EstimateConfig& config = {});

enum class CheckStatus { Pass, Fail, Inconclusive };

struct ConditionCheck {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double value = 0.0;   // measured quantity
    double target = 0.0;  // required value (threshold for the Gram check)
};

struct NecessaryConditionsReport {
    std::vector<ConditionCheck> checks;  // origin, independence, then seminorms
    bool all_pass = false;
};

// Component-wise necessary conditions for a self-map of a product domain:
// φ(0) = 0, linearly independent components, and per-factor component
// seminorms matching the factor's Bloch constant (modified components
// z_r ± i·z_s on Lie-ball factors). Seminorm estimates are lower bounds, so
// exceeding the target is a hard failure while falling short is reported as
// inconclusive; either way the check does not pass.
NecessaryConditionsReport check_necessary_conditions(const HoloMap& phi, const DomainSpec& spec,
                                                     const EstimateConfig& config = {});

struct GridConfig {
    int points = 200;
    double radius_cap = 0.7;
    std::uint64_t seed = 42;
};

// residual_k = max over a compact grid of ‖φ(S_k(z)) − z‖. The grid takes
// the capped sample set plus each point rescaled to the cap shell: the
// difference is holomorphic, so its maximum lives on the shell, and sharing
// one grid across all k keeps the residual sequence comparable.
std::vector<double> identity_convergence_check(const HoloMap& phi,
                                               const std::vector<HoloMap>& autos,
                                               const DomainSpec& spec,
                                               const GridConfig& grid = {});

// S_k = (involution at z_k) ∘ (rotation aligning (φ∘S_k)'(0) to be real
// positive), one per zero of the Blaschke product, in stored order.
std::vector<HoloMap> propose_unit_disk_automorphism_sequence(const HoloMap& phi);

}  // namespace blochlab
