#pragma once

// Bounded symmetric domains and their Bergman-style metrics.
//
// Supported families, with D always in its Harish-Chandra realization:
//   disk          𝔻 ⊂ ℂ
//   ball:n        B_n = {‖z‖ < 1} ⊂ ℂⁿ
//   polydisk:n    𝔻ⁿ
//   cartan1:mxn   R_I   = {Z ∈ ℂ^{m×n} : I − ZZ* ≻ 0},  m ≥ n ≥ 1
//   cartan2:n     R_II  = {Z symmetric : I − ZZ* ≻ 0},  n ≥ 2
//   cartan3:n     R_III = {Z antisymmetric : I − ZZ* ≻ 0},  n ≥ 5
//   cartan4:n     R_IV  = {‖z‖² < (1+|q|²)/2, |q| < 1},  q = Σz_j²,  n ≥ 5
//   product(...)  finite products, factors flattened and never Product
//
// Points are flat complex coordinate vectors. Matrix domains use the
// row-major free-variable layout: all entries for R_I, the on-and-above
// diagonal entries for R_II, the strictly-above diagonal entries for R_III.
//
// Metric normalization: the matrix M returned by metric_matrix satisfies
// H_z(u,ū) = u†Mu with H_0(e) = (m+n)/2, resp. (n+1)/2, (n−1)/2, n/2 on the
// canonical extremal directions of R_I..R_IV, (n+1)/2·I on the ball, and
// 1/(1−|z_k|²)² per polydisk coordinate. With this scaling the Bloch constant
// c_D below is exactly the reciprocal of the inner radius r_D = inf_{∂D} H_0^½.

#include <cstdint>
#include <string>
#include <vector>

#include "blochlab/linalg.hpp"

namespace blochlab {

using Point = CVec;

class DomainSpec {
public:
    enum class Kind { Disk, Ball, Polydisk, CartanI, CartanII, CartanIII, CartanIV, Product };

    static DomainSpec disk();
    static DomainSpec ball(int n);
    static DomainSpec polydisk(int n);
    static DomainSpec cartan1(int m, int n);
    static DomainSpec cartan2(int n);
    static DomainSpec cartan3(int n);
    static DomainSpec cartan4(int n);
    static DomainSpec product(std::vector<DomainSpec> factors);

    Kind kind() const { return kind_; }
    int rows() const { return m_; }         // R_I row count, otherwise == n
    int n() const { return n_; }
    const std::vector<DomainSpec>& factors() const { return factors_; }

    int dimension() const;
    bool operator==(const DomainSpec& o) const;
    bool operator!=(const DomainSpec& o) const { return !(*this == o); }

private:
    DomainSpec(Kind k, int m, int n) : kind_(k), m_(m), n_(n) {}
    Kind kind_ = Kind::Disk;
    int m_ = 0, n_ = 0;
    std::vector<DomainSpec> factors_;
};

// Grammar: disk | ball:<n> | polydisk:<n> | cartan1:<m>x<n> | cartan2:<n>
//          | cartan3:<n> | cartan4:<n> | product(<spec>,<spec>,...)
DomainSpec parse_domain(const std::string& text);
std::string to_string(const DomainSpec& spec);

struct Containment {
    bool inside;     // strictly interior
    double margin;   // signed slack; 0 on the boundary, negative outside
};

Containment contains(const DomainSpec& spec, const Point& z);

// Metric matrix M with H_z(u,ū) = u†Mu; requires z interior.
HermitianForm metric_matrix(const DomainSpec& spec, const Point& z);

double bloch_constant(const DomainSpec& spec);
int rank(const DomainSpec& spec);

// Extremal boundary directions: the finite family attaining
// r_D = inf_{u ∈ ∂D} H_0(u,ū)^{1/2}; inner_radius is that minimum.
std::vector<Point> extremal_boundary_directions(const DomainSpec& spec);
double inner_radius(const DomainSpec& spec);

// Geodesic distance in the metric normalization above. Available for disk,
// ball, polydisk and products of those; matrix factors raise UnsupportedError.
double bergman_distance(const DomainSpec& spec, const Point& z, const Point& w);

// Classical invariant distance on the ball: artanh ‖φ_z(w)‖ (no metric
// prefactor; the metric-consistent version is √((n+1)/2) times this).
double zhu_distance_ball(const Point& z, const Point& w);

// Ball involution φ_a with φ_a(0) = a, φ_a(a) = 0, φ_a ∘ φ_a = id.
Point ball_involution(const Point& a, const Point& w);

// Deterministic interior sampling. Every returned point has containment
// margin at least the value implied by the radius cap: 1 − cap for
// disk/ball/polydisk, 1 − cap² for matrix families (cap bounds the spectral
// norm) and for R_IV (cap bounds √2·‖z‖). Same seed ⇒ identical list.
std::vector<Point> sample_points(const DomainSpec& spec, int count,
                                 double radius_cap, std::uint64_t seed);

// Number of unit-cube coordinates consumed per point by the constructions
// behind sample_points, and the deterministic cube → interior-point map they
// share (also used by the quasi-random estimators).
int unit_cube_dims(const DomainSpec& spec);
Point point_from_unit_cube(const DomainSpec& spec, const std::vector<double>& u,
                           double radius_cap);

// Row-major matrix embedding for Cartan I/II/III coordinates.
CMatrix cartan_embed(const DomainSpec& spec, const Point& z);
Point cartan_flatten(const DomainSpec& spec, const CMatrix& Z);
std::vector<CMatrix> cartan_basis(const DomainSpec& spec);

} // namespace blochlab
