#include "blochlab/bloch_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "blochlab/errors.hpp"
#include "blochlab/linalg.hpp"
#include "blochlab/rng.hpp"

namespace blochlab {

namespace {

constexpr double kAscentStep = 0.05;
constexpr double kAscentShrink = 0.5;
constexpr double kAscentStop = 1e-7;
constexpr int kAscentSeeds = 5;
constexpr double kInteriorFloor = 1e-12;

double norm_sq(const Point& z) {
    double s = 0.0;
    for (const cx& v : z) s += std::norm(v);
    return s;
}

CVec gradient_row(const HoloMap& f, const Point& z) {
    const CMatrix jac = f.jacobian(z);
    CVec g(static_cast<std::size_t>(jac.cols()));
    for (int k = 0; k < jac.cols(); ++k) g[k] = jac(0, k);
    return g;
}

void require_scalar(const HoloMap& f, const char* who) {
    if (f.codomain_dim() != 1)
        throw ValidationError(std::string(who) + ": map must be scalar-valued");
}

HermitianForm hermitized(CMatrix m) {
    for (int i = 0; i < m.rows(); ++i) {
        m(i, i) = cx(m(i, i).real());
        for (int k = i + 1; k < m.cols(); ++k) {
            const cx avg = 0.5 * (m(i, k) + std::conj(m(k, i)));
            m(i, k) = avg;
            m(k, i) = std::conj(avg);
        }
    }
    return HermitianForm(std::move(m));
}

// The pointwise quantity whose supremum is being estimated.
using PointValue = std::function<double(const Point&)>;

struct Candidate {
    double value;
    Point z;
};

// Seeded quasi-random sweep over the radius schedule, then compass ascent
// over the real coordinates from the strongest seeds. Deterministic in
// (spec, config): the whole sample list is generated up front.
EstimateReport estimate_sup(const DomainSpec& spec, const EstimateConfig& config,
                            const PointValue& value) {
    if (config.samples < 1)
        throw ValidationError("estimate: sample count must be positive");
    if (config.radius_schedule.empty())
        throw ValidationError("estimate: radius schedule must be nonempty");
    for (double cap : config.radius_schedule)
        if (!(cap > 0.0 && cap < 1.0))
            throw ValidationError("estimate: radius caps must lie in (0,1)");

    EstimateReport report;
    report.seed = config.seed;
    report.radius_schedule = config.radius_schedule;

    long used = 0;
    long skipped = 0;
    std::vector<Candidate> best;
    auto offer = [&](double v, const Point& z) {
        best.push_back({v, z});
        std::sort(best.begin(), best.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
        if (static_cast<int>(best.size()) > kAscentSeeds) best.pop_back();
    };
    auto probe = [&](const Point& z) -> std::optional<double> {
        try {
            const double v = value(z);
            ++used;
            return v;
        } catch (const SingularityError&) {
            ++skipped;
            return std::nullopt;
        }
    };

    const Point origin(static_cast<std::size_t>(spec.dimension()), cx(0.0));
    if (auto v = probe(origin)) offer(*v, origin);

    const int dims = unit_cube_dims(spec);
    RdSequence seq(dims, config.seed);
    const int per_cap =
        std::max(1, config.samples / static_cast<int>(config.radius_schedule.size()));
    for (double cap : config.radius_schedule) {
        for (int i = 0; i < per_cap; ++i) {
            const Point z = point_from_unit_cube(spec, seq.next(), cap);
            if (auto v = probe(z)) offer(*v, z);
        }
    }

    if (best.empty())
        throw SingularityError("estimate: every sample hit a singularity");
    if (skipped > 0)
        report.warnings.push_back("skipped " + std::to_string(skipped) +
                                  " singular samples");

    // Compass ascent on the 2d real coordinates; candidates outside the
    // domain (or across a singularity) are rejected, shrinking the step.
    // The margin floor keeps the ascent out of the sliver past the radius
    // schedule, where the metric's conditioning drowns the value in noise.
    const double max_cap =
        *std::max_element(config.radius_schedule.begin(), config.radius_schedule.end());
    const double ascent_floor = std::max(kInteriorFloor, 0.5 * (1.0 - max_cap));
    const int dim = spec.dimension();
    Candidate winner = best.front();
    bool converged = false;
    for (const Candidate& seed_candidate : best) {
        Candidate cur = seed_candidate;
        double step = kAscentStep;
        int sweeps = 0;
        while (step >= kAscentStop && ++sweeps <= 400) {
            bool improved = false;
            for (int axis = 0; axis < 2 * dim; ++axis) {
                for (double dir : {+1.0, -1.0}) {
                    Point cand = cur.z;
                    cx& slot = cand[axis / 2];
                    slot += (axis % 2 == 0) ? cx(dir * step, 0.0) : cx(0.0, dir * step);
                    const Containment loc = contains(spec, cand);
                    if (!loc.inside || loc.margin <= ascent_floor) continue;
                    if (auto v = probe(cand)) {
                        if (*v > cur.value) {
                            cur = {*v, cand};
                            improved = true;
                        }
                    }
                }
            }
            if (!improved) step *= kAscentShrink;
        }
        if (step < kAscentStop) converged = true;
        if (cur.value > winner.value) winner = cur;
    }

    report.value = value(winner.z);  // exact re-evaluation at the witness
    report.witness = winner.z;
    report.samples_used = used;
    report.converged_flag = converged;
    report.lower_bound_certified = true;
    return report;
}

PointValue q_value_fn(const HoloMap& f, const DomainSpec& spec,
                      QNormalization normalization) {
    if (normalization == QNormalization::Zhu) {
        if (spec.kind() != DomainSpec::Kind::Ball && spec.kind() != DomainSpec::Kind::Disk)
            throw ValidationError("zhu normalization is defined on the ball only");
        const int n = spec.dimension();
        return [&f, n](const Point& z) { return zhu_q_ball(f, z, n); };
    }
    return [&f, &spec](const Point& z) { return q_norm(f, spec, z); };
}

} // namespace

double q_norm(const HoloMap& f, const DomainSpec& spec, const Point& z) {
    require_scalar(f, "q_norm");
    const CVec g = gradient_row(f, z);
    const double quad = hermitian_quadratic_solve(metric_matrix(spec, z), g);
    return std::sqrt(std::max(0.0, quad));
}

double zhu_q_ball(const HoloMap& f, const Point& z, int n) {
    require_scalar(f, "zhu_q_ball");
    if (static_cast<int>(z.size()) != n)
        throw ValidationError("zhu_q_ball: point dimension does not match n");
    const double s = norm_sq(z);
    if (s >= 1.0)
        throw ValidationError("zhu_q_ball: point must be interior to the ball");
    const CVec g = gradient_row(f, z);
    cx radial(0.0);
    double gg = 0.0;
    for (int k = 0; k < n; ++k) {
        radial += z[k] * g[k];
        gg += std::norm(g[k]);
    }
    return std::sqrt(std::max(0.0, (1.0 - s) * (gg - std::norm(radial))));
}

EstimateReport bloch_seminorm(const HoloMap& f, const DomainSpec& spec,
                              const EstimateConfig& config,
                              QNormalization normalization) {
    require_scalar(f, "bloch_seminorm");
    if (f.domain().dimension() != spec.dimension())
        throw ValidationError("bloch_seminorm: map domain does not match the spec");
    return estimate_sup(spec, config, q_value_fn(f, spec, normalization));
}

double bloch_norm(const HoloMap& f, const DomainSpec& spec,
                  const EstimateConfig& config) {
    const Point origin(static_cast<std::size_t>(spec.dimension()), cx(0.0));
    const double at0 = std::abs(f.evaluate(origin)[0]);
    return at0 + bloch_seminorm(f, spec, config).value;
}

double local_dilation(const HoloMap& phi, const DomainSpec& spec, const Point& z) {
    if (phi.domain().dimension() != spec.dimension())
        throw ValidationError("local_dilation: map domain does not match the spec");
    DomainSpec target = spec;
    if (phi.codomain()) {
        target = *phi.codomain();
    } else if (phi.codomain_dim() != spec.dimension()) {
        throw ValidationError("local_dilation: map has no domain-valued codomain");
    }
    const Point w = phi.evaluate(z);
    if (!contains(target, w).inside)
        throw ValidationError("local_dilation: image point is not interior");
    const CMatrix jac = phi.jacobian(z);
    const CMatrix pulled = jac.adjoint() * metric_matrix(target, w).matrix() * jac;
    const double top =
        max_generalized_eigenvalue(hermitized(pulled), metric_matrix(spec, z));
    return std::sqrt(std::max(0.0, top));
}

EstimateReport bergman_constant(const HoloMap& phi, const DomainSpec& spec,
                                const EstimateConfig& config) {
    if (phi.domain().dimension() != spec.dimension())
        throw ValidationError("bergman_constant: map domain does not match the spec");
    return estimate_sup(spec, config, [&phi, &spec](const Point& z) {
        return local_dilation(phi, spec, z);
    });
}

double lipschitz_ratio(const HoloMap& f, const DomainSpec& spec, int pair_count,
                       std::uint64_t seed) {
    require_scalar(f, "lipschitz_ratio");
    if (pair_count < 1)
        throw ValidationError("lipschitz_ratio: pair count must be positive");

    const int half = std::max(1, pair_count / 2);
    const std::vector<Point> first = sample_points(spec, half, 0.9, seed);
    const std::vector<Point> second = sample_points(spec, half, 0.9, seed + 1);

    // Short steps along the optimal direction u = M⁻¹ḡ at strong points
    // push the ratio toward the seminorm; include the estimator witness.
    EstimateConfig probe_config;
    probe_config.samples = std::max(2000, pair_count / 4);
    probe_config.seed = seed;
    const EstimateReport beta = bloch_seminorm(f, spec, probe_config);

    std::vector<std::pair<Point, Point>> pairs;
    pairs.reserve(static_cast<std::size_t>(half) * 2 + 8);
    for (int k = 0; k < half; ++k) pairs.emplace_back(first[k], second[k]);

    auto local_pair = [&](const Point& z) -> std::optional<std::pair<Point, Point>> {
        CVec g;
        try {
            g = gradient_row(f, z);
        } catch (const SingularityError&) {
            return std::nullopt;
        }
        double gg = 0.0;
        for (const cx& v : g) gg += std::norm(v);
        if (gg < 1e-30) return std::nullopt;
        CVec ghat(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) ghat[i] = std::conj(g[i]);
        const CVec dir = hermitian_solve(metric_matrix(spec, z), ghat);
        double dd = std::sqrt(norm_sq(dir));
        if (dd < 1e-30) return std::nullopt;
        for (double scale = 1e-4; scale > 1e-12; scale *= 0.1) {
            Point w = z;
            for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale / dd * dir[i];
            if (contains(spec, w).inside) return std::make_pair(z, w);
        }
        return std::nullopt;
    };

    if (auto p = local_pair(beta.witness)) pairs.push_back(*p);
    for (int k = 0; k < half; ++k)
        if (auto p = local_pair(first[k])) pairs.push_back(*p);

    double best = 0.0;
    for (const auto& [z, w] : pairs) {
        double dist;
        try {
            dist = bergman_distance(spec, z, w);
        } catch (const SingularityError&) {
            continue;
        }
        if (dist < 1e-14) continue;
        try {
            const cx fz = f.evaluate(z)[0];
            const cx fw = f.evaluate(w)[0];
            best = std::max(best, std::abs(fz - fw) / dist);
        } catch (const SingularityError&) {
            continue;
        }
    }
    return best;
}

NormBounds composition_norm_bounds(const HoloMap& phi, const DomainSpec& spec,
                                   const EstimateConfig& config) {
    if (phi.domain().dimension() != spec.dimension() ||
        phi.codomain_dim() != spec.dimension())
        throw ValidationError("composition_norm_bounds: map must be a self-map of the spec");

    const Point origin(static_cast<std::size_t>(spec.dimension()), cx(0.0));
    const Point at0 = phi.evaluate(origin);

    double rho;
    const bool sharp_lower = spec.kind() == DomainSpec::Kind::Disk ||
                             spec.kind() == DomainSpec::Kind::Ball;
    if (spec.kind() == DomainSpec::Kind::Ball)
        rho = zhu_distance_ball(at0, origin);
    else
        rho = bergman_distance(spec, at0, origin);  // Cartan factors reject here

    NormBounds bounds;
    bounds.rho_at_origin = rho;
    bounds.bergman_hat = bergman_constant(phi, spec, config).value;
    bounds.lower = sharp_lower ? std::max(1.0, rho) : 1.0;
    bounds.upper = std::max(1.0, rho + bounds.bergman_hat);
    return bounds;
}

LscResult lsc_check(const std::vector<HoloMap>& tail, const HoloMap& f_limit,
                    const DomainSpec& spec, const EstimateConfig& config) {
    if (tail.empty())
        throw ValidationError("lsc_check: tail must be nonempty");
    require_scalar(f_limit, "lsc_check");
    for (const HoloMap& f : tail) require_scalar(f, "lsc_check");

    const int grid_size = std::clamp(config.samples / 100, 50, 400);
    const std::vector<Point> grid = sample_points(spec, grid_size, 0.7, config.seed);

    std::vector<double> gaps;
    for (const HoloMap& f : tail) {
        double gap = 0.0;
        for (const Point& z : grid)
            gap = std::max(gap, std::abs(f.evaluate(z)[0] - f_limit.evaluate(z)[0]));
        gaps.push_back(gap);
    }
    // A tail that is not closing in on the limit is rejected; a single
    // supplied element is taken on trust.
    if (gaps.size() >= 2 && gaps.back() > std::max(0.9 * gaps.front(), 1e-9))
        throw ValidationError("lsc_check: sequence does not converge to the limit "
                              "on the sample grid");

    LscResult result;
    result.final_grid_gap = gaps.back();
    result.beta_limit = bloch_seminorm(f_limit, spec, config).value;
    result.min_tail_beta = std::numeric_limits<double>::infinity();
    for (const HoloMap& f : tail) {
        const double b = bloch_seminorm(f, spec, config).value;
        result.tail_betas.push_back(b);
        result.min_tail_beta = std::min(result.min_tail_beta, b);
    }
    return result;
}

} // namespace blochlab
