#pragma once

// Pointwise invariant-gradient norms, their suprema, and the operator-norm
// bounds built from them.
//
// The supremum over directions in Q_f is always evaluated in closed form
// (a Hermitian solve); only the supremum over the domain is estimated, by
// seeded quasi-random sampling plus compass ascent. Every estimate is a
// certified lower bound: the reported value is the exact pointwise quantity
// at the reported witness.

#include <cstdint>
#include <string>
#include <vector>

#include "blochlab/domains.hpp"
#include "blochlab/maps.hpp"

namespace blochlab {

// Scale choice for the pointwise gradient norm on the ball: the metric form
// or the boundary-free expression [(1-‖z‖²)(‖∇f‖²-|Rf|²)]^{1/2}. The two
// differ by the constant factor √(2/(n+1)).
enum class QNormalization { Metric, Zhu };

struct EstimateConfig {
    int samples = 20000;
    std::uint64_t seed = 42;
    std::vector<double> radius_schedule = {0.5, 0.9, 0.99, 0.999};
};

struct EstimateReport {
    double value = 0.0;
    Point witness;
    long samples_used = 0;
    std::uint64_t seed = 0;
    std::vector<double> radius_schedule;
    bool converged_flag = false;
    bool lower_bound_certified = false;
    std::vector<std::string> warnings;
};

// √(gᵀ M_z⁻¹ ḡ) with g = ∇f(z); the closed form of sup_u |∇f(z)u| over
// directions of unit metric length. f must be scalar-valued.
double q_norm(const HoloMap& f, const DomainSpec& spec, const Point& z);

// [(1-‖z‖²)(‖∇f(z)‖² - |Rf(z)|²)]^{1/2} on the unit ball, with the radial
// derivative Rf(z) = Σ z_k ∂f/∂z_k.
double zhu_q_ball(const HoloMap& f, const Point& z, int n);

EstimateReport bloch_seminorm(const HoloMap& f, const DomainSpec& spec,
                              const EstimateConfig& config = {},
                              QNormalization normalization = QNormalization::Metric);

// |f(0)| + seminorm value.
double bloch_norm(const HoloMap& f, const DomainSpec& spec,
                  const EstimateConfig& config = {});

// √(max eigenvalue of the pullback metric against the metric at z): the
// factor by which φ stretches infinitesimal metric length at z. The pullback
// uses the codomain metric at φ(z); self-maps measure both sides in spec.
double local_dilation(const HoloMap& phi, const DomainSpec& spec, const Point& z);

EstimateReport bergman_constant(const HoloMap& phi, const DomainSpec& spec,
                                const EstimateConfig& config = {});

// max over sampled pairs of |f(z)-f(w)| / dist(z,w); never exceeds the
// Bloch seminorm. Pairs mix global samples with short steps along the
// optimal direction at strong sample points.
double lipschitz_ratio(const HoloMap& f, const DomainSpec& spec, int pair_count,
                       std::uint64_t seed);

struct NormBounds {
    double lower = 1.0;
    double upper = 1.0;
    double rho_at_origin = 0.0;     // distance from φ(0) to 0
    double bergman_hat = 0.0;       // estimated B_φ entering the upper bound
};

// 1 ≤ ‖C_φ‖ ≤ max{1, ρ(φ(0),0) + B_φ}, with the sharper lower bound
// max{1, ρ(φ(0),0)} on the disk and ball. Ball distances use the Zhu form.
NormBounds composition_norm_bounds(const HoloMap& phi, const DomainSpec& spec,
                                   const EstimateConfig& config = {});

struct LscResult {
    double beta_limit = 0.0;
    double min_tail_beta = 0.0;
    std::vector<double> tail_betas;
    double final_grid_gap = 0.0;  // max |f_last - f_limit| on the check grid
};

// Lower semicontinuity probe: the supplied maps are a tail of a sequence
// converging to f_limit (convergence verified on a sample grid). Returns
// the seminorm of the limit and the minimum over the supplied tail.
LscResult lsc_check(const std::vector<HoloMap>& tail, const HoloMap& f_limit,
                    const DomainSpec& spec, const EstimateConfig& config = {});

} // namespace blochlab
