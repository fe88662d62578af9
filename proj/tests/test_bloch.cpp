#include "blochlab/bloch_analysis.hpp"

#include <cmath>

#include "blochlab/domains.hpp"
#include "blochlab/errors.hpp"
#include "blochlab/linalg.hpp"
#include "blochlab/maps.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace blochlab;

namespace {

EstimateConfig light_config(std::uint64_t seed = 42, int samples = 4000) {
    EstimateConfig config;
    config.samples = samples;
    config.seed = seed;
    return config;
}

HoloMap scalar_expr(const DomainSpec& spec, const std::string& text) {
    return HoloMap::expr_map(spec, std::vector<std::string>{text});
}

CVec row_of(const CMatrix& jac) {
    CVec g(static_cast<std::size_t>(jac.cols()));
    for (int k = 0; k < jac.cols(); ++k) g[k] = jac(0, k);
    return g;
}

} // namespace

TEST_CASE("pointwise gradient norm closed form") {
    const DomainSpec p2 = DomainSpec::polydisk(2);
    const HoloMap p1 = HoloMap::projection(p2, 1);
    CHECK(testu::approx_eq(q_norm(p1, p2, {cx(0.0), cx(0.0)}), 1.0, 1e-12));

    const DomainSpec r1 = DomainSpec::cartan1(2, 2);
    const HoloMap q1 = HoloMap::projection(r1, 1);
    CHECK(testu::approx_eq(q_norm(q1, r1, Point(4, cx(0.0))), std::sqrt(0.5), 1e-12));

    const DomainSpec disk = DomainSpec::disk();
    const HoloMap square = scalar_expr(disk, "z1^2");
    CHECK(testu::approx_eq(q_norm(square, disk, {cx(0.5)}), 0.75, 1e-12));

    const DomainSpec lie = DomainSpec::cartan4(5);
    const HoloMap mp = HoloMap::modified_projection(lie, 1, 2, +1);
    CHECK(testu::approx_eq(q_norm(mp, lie, Point(5, cx(0.0))), std::sqrt(0.4), 1e-12));

    CHECK_THROWS_AS(q_norm(HoloMap::diagonal_embedding(2), disk, {cx(0.0)}),
                    ValidationError);
}

TEST_CASE("direction supremum is attained at the solve direction") {
    testu::Rng rng(91);
    const std::vector<std::pair<DomainSpec, std::string>> cases = {
        {DomainSpec::disk(), "z1^2+z1"},
        {DomainSpec::ball(2), "z1*z2+2*z1"},
        {DomainSpec::polydisk(2), "z1^2*z2+z2"},
        {DomainSpec::cartan1(2, 2), "z1*z4+z2^2+z3"},
    };
    for (const auto& [spec, text] : cases) {
        CAPTURE(to_string(spec));
        const HoloMap f = scalar_expr(spec, text);
        const Point z = sample_points(spec, 1, 0.7, 23)[0];
        const double q = q_norm(f, spec, z);
        const HermitianForm metric = metric_matrix(spec, z);
        const CVec g = row_of(f.jacobian(z));

        for (int trial = 0; trial < 1000; ++trial) {
            const CVec u = testu::random_cvec(rng, spec.dimension(), 1.0);
            cx pairing(0.0);
            for (std::size_t k = 0; k < u.size(); ++k) pairing += g[k] * u[k];
            const double ratio = std::abs(pairing) / std::sqrt(metric.quad(u));
            CHECK(ratio <= q + 1e-12);
        }

        CVec gbar(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) gbar[k] = std::conj(g[k]);
        const CVec best = hermitian_solve(metric, gbar);
        cx pairing(0.0);
        for (std::size_t k = 0; k < best.size(); ++k) pairing += g[k] * best[k];
        const double attained = std::abs(pairing) / std::sqrt(metric.quad(best));
        CHECK(testu::approx_eq(attained, q, 1e-10));
    }
}

TEST_CASE("ball gradient norm in the boundary-free form") {
    const HoloMap f = scalar_expr(DomainSpec::ball(2), "z1+z2");
    const Point zero = {cx(0.0), cx(0.0)};
    // Both correction terms vanish at the origin.
    CHECK(testu::approx_eq(zhu_q_ball(f, zero, 2), std::sqrt(2.0), 1e-14));

    const HoloMap ext = HoloMap::extremal_log_map({cx(0.6), cx(0.0, 0.3)});
    CHECK(testu::approx_eq(zhu_q_ball(ext, zero, 2), 1.0, 1e-14));

    // Conversion to the metric normalization, across the ball.
    for (int n : {2, 3}) {
        const DomainSpec ball = DomainSpec::ball(n);
        const HoloMap g = scalar_expr(ball, n == 2 ? "z1^2+z2*z1+z2" : "z1*z3+z2^2+z1");
        const double factor = std::sqrt(2.0 / (n + 1));
        for (int k = 0; k < 50; ++k) {
            const Point z = sample_points(ball, 1, 0.85, 400 + k)[0];
            const double lhs = q_norm(g, ball, z);
            const double rhs = factor * zhu_q_ball(g, z, n);
            CHECK(testu::rel_err(lhs, rhs) < 1e-9);
        }
    }

    CHECK_THROWS_AS(zhu_q_ball(f, {cx(0.0)}, 1), ValidationError);
    CHECK_THROWS_AS(zhu_q_ball(f, {cx(2.0), cx(0.0)}, 2), ValidationError);
}

TEST_CASE("seminorm estimates on the disk") {
    const DomainSpec disk = DomainSpec::disk();

    const EstimateReport id = bloch_seminorm(scalar_expr(disk, "z1"), disk, light_config());
    CHECK(std::abs(id.value - 1.0) < 1e-6);
    CHECK(std::abs(id.witness[0]) < 1e-3);
    CHECK(id.converged_flag);
    CHECK(id.lower_bound_certified);
    CHECK(id.samples_used > 3000);

    const HoloMap square = scalar_expr(disk, "z1^2");
    const EstimateReport sq = bloch_seminorm(square, disk, light_config());
    CHECK(std::abs(sq.value - 4.0 / (3.0 * std::sqrt(3.0))) < 1e-5);
    CHECK(std::abs(std::abs(sq.witness[0]) - 1.0 / std::sqrt(3.0)) < 1e-4);
    // The reported value is the exact pointwise quantity at the witness.
    CHECK(sq.value == q_norm(square, disk, sq.witness));

    // Deterministic in the seed.
    const EstimateReport again = bloch_seminorm(square, disk, light_config());
    CHECK(again.value == sq.value);
    CHECK(again.witness[0] == sq.witness[0]);
}

TEST_CASE("seminorm of the extremal map under the boundary-free scale") {
    const HoloMap ext = HoloMap::extremal_log_map({cx(0.5), cx(0.2, 0.3)});
    const DomainSpec ball = DomainSpec::ball(2);
    const EstimateReport report =
        bloch_seminorm(ext, ball, light_config(), QNormalization::Zhu);
    CHECK(std::abs(report.value - 1.0) < 1e-9);
}

TEST_CASE("estimator records singular samples and survives them") {
    const DomainSpec disk = DomainSpec::disk();
    const HoloMap spiky = scalar_expr(disk, "1/(1-2*z1)");
    const EstimateReport report = bloch_seminorm(spiky, disk, light_config(0, 800));
    CHECK(report.value > 0.0);
    CHECK(std::isfinite(report.value));

    const HoloMap always = scalar_expr(disk, "1/(z1-z1)");
    CHECK_THROWS_AS(bloch_seminorm(always, disk, light_config(0, 50)),
                    SingularityError);

    EstimateConfig bad = light_config();
    bad.radius_schedule = {0.5, 1.5};
    CHECK_THROWS_AS(bloch_seminorm(spiky, disk, bad), ValidationError);
}

TEST_CASE("norm adds the origin value") {
    const DomainSpec disk = DomainSpec::disk();
    CHECK(testu::approx_eq(bloch_norm(scalar_expr(disk, "1"), disk, light_config()),
                           1.0, 1e-12));
    CHECK(std::abs(bloch_norm(scalar_expr(disk, "z1"), disk, light_config()) - 1.0) <
          1e-6);
    CHECK(std::abs(bloch_norm(scalar_expr(disk, "z1^2"), disk, light_config()) -
                   4.0 / (3.0 * std::sqrt(3.0))) < 1e-5);
}

TEST_CASE("local dilation values") {
    const DomainSpec disk = DomainSpec::disk();
    const HoloMap square = scalar_expr(disk, "z1^2");
    CHECK(testu::approx_eq(local_dilation(square, disk, {cx(0.5)}), 0.8, 1e-12));

    // Automorphisms stretch nothing, anywhere.
    testu::Rng rng(92);
    const HoloMap mob = HoloMap::mobius_disk(cx(0.4, 0.2), 1.3);
    for (int k = 0; k < 10; ++k) {
        const Point z = sample_points(disk, 1, 0.9, 600 + k)[0];
        CHECK(std::abs(local_dilation(mob, disk, z) - 1.0) < 1e-10);
    }
    const DomainSpec b2 = DomainSpec::ball(2);
    const HoloMap ba = HoloMap::ball_automorphism(CMatrix::identity(2),
                                                  {cx(0.3), cx(0.1, 0.4)});
    for (int k = 0; k < 10; ++k) {
        const Point z = sample_points(b2, 1, 0.85, 700 + k)[0];
        CHECK(std::abs(local_dilation(ba, b2, z) - 1.0) < 1e-10);
    }

    // The diagonal embedding dilates by √n at every point of the disk.
    const HoloMap diag = HoloMap::diagonal_embedding(3);
    for (const cx z : {cx(0.0), cx(0.5), cx(-0.2, 0.6)})
        CHECK(std::abs(local_dilation(diag, disk, {z}) - std::sqrt(3.0)) < 1e-10);

    // Image must stay interior; scalar maps need a metric target.
    CHECK_THROWS_AS(local_dilation(scalar_expr(disk, "2*z1"), disk, {cx(0.6)}),
                    ValidationError);
    CHECK_THROWS_AS(local_dilation(HoloMap::projection(b2, 1), b2,
                                   Point{cx(0.0), cx(0.0)}),
                    ValidationError);
}

TEST_CASE("dilation supremum estimates") {
    const DomainSpec disk = DomainSpec::disk();
    const EstimateReport aut =
        bergman_constant(HoloMap::mobius_disk(cx(0.3), 0.8), disk, light_config());
    CHECK(std::abs(aut.value - 1.0) < 1e-9);

    const EstimateReport diag =
        bergman_constant(HoloMap::diagonal_embedding(3), disk, light_config());
    CHECK(std::abs(diag.value - std::sqrt(3.0)) < 1e-6);

    // sup 2r/(1+r²) = 1 is approached, never attained.
    const EstimateReport sq =
        bergman_constant(scalar_expr(disk, "z1^2"), disk, light_config());
    CHECK(sq.value > 0.99);
    CHECK(sq.value <= 1.0 + 1e-9);
}

TEST_CASE("lipschitz ratios stay under the seminorm") {
    const DomainSpec disk = DomainSpec::disk();

    CHECK(lipschitz_ratio(HoloMap::constant(disk, {cx(0.3)}), disk, 500, 5) == 0.0);

    const double id_ratio = lipschitz_ratio(scalar_expr(disk, "z1"), disk, 2000, 7);
    CHECK(id_ratio > 0.95);
    CHECK(id_ratio <= 1.0 + 1e-9);

    const HoloMap square = scalar_expr(disk, "z1^2");
    const double beta = bloch_seminorm(square, disk, light_config()).value;
    const double sq_ratio = lipschitz_ratio(square, disk, 2000, 11);
    CHECK(sq_ratio <= beta + 1e-9);
    CHECK(sq_ratio >= 0.95 * beta);

    const DomainSpec b2 = DomainSpec::ball(2);
    const HoloMap p1 = HoloMap::projection(b2, 1);
    const double ball_beta = bloch_seminorm(p1, b2, light_config()).value;
    const double ball_ratio = lipschitz_ratio(p1, b2, 2000, 13);
    CHECK(ball_ratio <= ball_beta + 1e-9);
    CHECK(ball_ratio >= 0.95 * ball_beta);

    CHECK_THROWS_AS(lipschitz_ratio(HoloMap::projection(DomainSpec::cartan1(2, 2), 1),
                                    DomainSpec::cartan1(2, 2), 100, 3),
                    UnsupportedError);
}

TEST_CASE("composition operator norm bounds") {
    const DomainSpec disk = DomainSpec::disk();
    const DomainSpec b2 = DomainSpec::ball(2);

    // Origin-fixing ball symbol: both bounds collapse to 1.
    const HoloMap fix0 = HoloMap::ball_automorphism(CMatrix::identity(2),
                                                    {cx(0.0), cx(0.0)});
    const NormBounds triv = composition_norm_bounds(fix0, b2, light_config());
    CHECK(triv.lower == 1.0);
    CHECK(std::abs(triv.upper - 1.0) < 1e-6);

    const NormBounds held =
        composition_norm_bounds(HoloMap::constant(disk, {cx(0.9)}), disk,
                                light_config());
    const double half_log19 = 0.5 * std::log(19.0);
    CHECK(testu::approx_eq(held.lower, half_log19, 1e-9));
    CHECK(testu::approx_eq(held.upper, half_log19, 1e-9));
    CHECK(held.bergman_hat == 0.0);

    const NormBounds mob =
        composition_norm_bounds(HoloMap::mobius_disk(cx(0.5), 0.0), disk,
                                light_config());
    CHECK(mob.lower == 1.0);
    CHECK(std::abs(mob.upper - (std::atanh(0.5) + 1.0)) < 1e-9);

    // Polydisk symbols get the generic lower bound.
    std::vector<HoloMap> comps = {HoloMap::mobius_disk(cx(0.5), 0.0),
                                  HoloMap::mobius_disk(cx(0.0), 0.3)};
    const HoloMap pd = HoloMap::polydisk_automorphism(comps, {0, 1});
    const NormBounds pd_bounds =
        composition_norm_bounds(pd, DomainSpec::polydisk(2), light_config());
    CHECK(pd_bounds.lower == 1.0);
    CHECK(std::abs(pd_bounds.upper - (std::atanh(0.5) + 1.0)) < 1e-9);
    CHECK(pd_bounds.lower <= pd_bounds.upper);

    CHECK_THROWS_AS(composition_norm_bounds(HoloMap::identity(DomainSpec::cartan1(2, 2)),
                                            DomainSpec::cartan1(2, 2), light_config()),
                    UnsupportedError);
}

TEST_CASE("lower semicontinuity probes") {
    const DomainSpec disk = DomainSpec::disk();
    const HoloMap id = scalar_expr(disk, "z1");

    const LscResult same = lsc_check({id, id}, id, disk, light_config());
    CHECK(same.beta_limit == same.min_tail_beta);
    CHECK(same.final_grid_gap == 0.0);

    // Scaled identities marching up to the identity itself.
    std::vector<HoloMap> tail;
    tail.push_back(scalar_expr(disk, "0.875*z1"));
    tail.push_back(scalar_expr(disk, "0.9*z1"));
    tail.push_back(scalar_expr(disk, "0.95*z1"));
    const LscResult scaled = lsc_check(tail, id, disk, light_config());
    CHECK(std::abs(scaled.min_tail_beta - 0.875) < 1e-6);
    CHECK(scaled.beta_limit <= scaled.min_tail_beta + 0.125);

    // Truncations of a zero sequence marching to the boundary.
    auto thin = [](int upto) {
        CVec zeros;
        for (int k = 1; k <= upto; ++k) zeros.push_back(cx(1.0 - std::exp(-std::pow(2.0, k))));
        return HoloMap::blaschke_product(zeros);
    };
    const LscResult blaschke =
        lsc_check({thin(3), thin(4)}, thin(5), disk, light_config(42, 2000));
    CHECK(blaschke.beta_limit <= blaschke.min_tail_beta + 1e-3);
    CHECK(blaschke.final_grid_gap < 1e-9);

    CHECK_THROWS_AS(lsc_check({id, id}, scalar_expr(disk, "z1^2"), disk, light_config()),
                    ValidationError);
    CHECK_THROWS_AS(lsc_check({}, id, disk, light_config()), ValidationError);
}

TEST_CASE("seminorm is automorphism invariant pointwise") {
    testu::Rng rng(93);
    const std::vector<DomainSpec> specs = {DomainSpec::disk(), DomainSpec::ball(2),
                                           DomainSpec::polydisk(2)};
    for (const DomainSpec& spec : specs) {
        CAPTURE(to_string(spec));
        const HoloMap f = scalar_expr(spec, spec.dimension() == 1 ? "z1^2+z1"
                                                                  : "z1*z2+z1^2");
        for (int trial = 0; trial < 15; ++trial) {
            HoloMap s = [&]() {
                switch (spec.kind()) {
                case DomainSpec::Kind::Disk:
                    return HoloMap::mobius_disk(rng.complex_box(0.5),
                                                rng.uniform(0.0, 6.28));
                case DomainSpec::Kind::Ball:
                    return HoloMap::ball_automorphism(
                        hermitian_eigensystem(HermitianForm{testu::random_hpd(rng, 2)})
                            .vectors,
                        testu::random_cvec(rng, 2, 0.4));
                default: {
                    std::vector<HoloMap> comps = {
                        HoloMap::mobius_disk(rng.complex_box(0.5), rng.uniform(0.0, 6.28)),
                        HoloMap::mobius_disk(rng.complex_box(0.5), rng.uniform(0.0, 6.28))};
                    return HoloMap::polydisk_automorphism(comps, {1, 0});
                }
                }
            }();
            const Point z = sample_points(spec, 1, 0.75, 810 + trial)[0];
            const double lhs = q_norm(compose(f, s), spec, z);
            const double rhs = q_norm(f, spec, s.evaluate(z));
            CHECK(testu::rel_err(lhs, rhs) < 1e-9);
        }
    }
}

TEST_CASE("composition contracts through the local dilation") {
    const DomainSpec disk = DomainSpec::disk();
    const DomainSpec b2 = DomainSpec::ball(2);
    struct Setup {
        DomainSpec spec;
        HoloMap phi;
        HoloMap f;
    };
    const std::vector<Setup> setups = {
        {disk, scalar_expr(disk, "z1^2"), scalar_expr(disk, "z1^2+z1")},
        {disk, HoloMap::blaschke_product({cx(0.0), cx(0.5)}), scalar_expr(disk, "exp(z1)")},
        {b2, HoloMap::expr_map(b2, std::vector<std::string>{"z1*z2", "z1/2"}),
         scalar_expr(b2, "z1+z2^2")},
        {b2, HoloMap::ball_automorphism(CMatrix::identity(2), {cx(0.2), cx(0.1)}),
         scalar_expr(b2, "z1*z2")},
    };
    for (const Setup& setup : setups) {
        for (int k = 0; k < 25; ++k) {
            const Point z = sample_points(setup.spec, 1, 0.8, 500 + k)[0];
            const double lhs = q_norm(compose(setup.f, setup.phi), setup.spec, z);
            const double rhs = local_dilation(setup.phi, setup.spec, z) *
                               q_norm(setup.f, setup.spec, setup.phi.evaluate(z));
            CHECK(lhs <= rhs + 1e-10);
        }
    }
}

TEST_CASE("dilation bounds from rank") {
    // Rank one: no self-map of disk or ball stretches the metric.
    const DomainSpec disk = DomainSpec::disk();
    const DomainSpec b2 = DomainSpec::ball(2);
    const std::vector<HoloMap> disk_maps = {
        scalar_expr(disk, "z1^2"), scalar_expr(disk, "(z1^2+z1)/2"),
        HoloMap::blaschke_product({cx(0.3, 0.4), cx(-0.5)}),
        HoloMap::mobius_disk(cx(0.6), 2.0)};
    for (const HoloMap& phi : disk_maps)
        for (int k = 0; k < 20; ++k) {
            const Point z = sample_points(disk, 1, 0.9, 40 + k)[0];
            CHECK(local_dilation(phi, disk, z) <= 1.0 + 1e-9);
        }
    const std::vector<HoloMap> ball_maps = {
        HoloMap::expr_map(b2, std::vector<std::string>{"z1*z2", "z1/2"}),
        HoloMap::expr_map(b2, std::vector<std::string>{"z2^2", "z1*z2/2"}),
        HoloMap::ball_automorphism(CMatrix::identity(2), {cx(0.4), cx(0.2, 0.1)})};
    for (const HoloMap& phi : ball_maps)
        for (int k = 0; k < 20; ++k) {
            const Point z = sample_points(b2, 1, 0.85, 60 + k)[0];
            CHECK(local_dilation(phi, b2, z) <= 1.0 + 1e-9);
        }

    // Higher rank: the bound is √rank of the target, reached by the
    // diagonal embedding.
    const DomainSpec p3 = DomainSpec::polydisk(3);
    const std::vector<HoloMap> poly_maps = {
        HoloMap::expr_map(p3, std::vector<std::string>{"z2*z3", "z1^2", "(z1+z2)/2"}),
        HoloMap::polydisk_automorphism({HoloMap::mobius_disk(cx(0.2), 0.1),
                                        HoloMap::mobius_disk(cx(0.0), 1.0),
                                        HoloMap::mobius_disk(cx(-0.3, 0.2), 0.0)},
                                       {2, 0, 1})};
    for (const HoloMap& phi : poly_maps)
        for (int k = 0; k < 20; ++k) {
            const Point z = sample_points(p3, 1, 0.85, 80 + k)[0];
            CHECK(local_dilation(phi, p3, z) <= std::sqrt(3.0) + 1e-9);
        }
    CHECK(std::abs(local_dilation(HoloMap::diagonal_embedding(3), disk, {cx(0.4, 0.2)}) -
                   std::sqrt(3.0)) < 1e-10);
}

TEST_CASE("bounded maps into the disk are Bloch with the domain constant") {
    struct Setup {
        DomainSpec spec;
        HoloMap f;
    };
    const std::vector<Setup> setups = {
        {DomainSpec::disk(), HoloMap::blaschke_product({cx(0.0), cx(0.5)})},
        {DomainSpec::ball(2), HoloMap::projection(DomainSpec::ball(2), 1)},
        {DomainSpec::cartan1(2, 2), HoloMap::projection(DomainSpec::cartan1(2, 2), 1)},
        {DomainSpec::cartan4(5),
         HoloMap::modified_projection(DomainSpec::cartan4(5), 2, 4, -1)},
    };
    for (const Setup& setup : setups) {
        CAPTURE(to_string(setup.spec));
        const double beta =
            bloch_seminorm(setup.f, setup.spec, light_config(42, 1500)).value;
        CHECK(beta <= bloch_constant(setup.spec) + 1e-6);
    }
}
