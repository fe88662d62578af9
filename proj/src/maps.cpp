#include "blochlab/maps.hpp"

#include <cmath>
#include <utility>

#include "blochlab/errors.hpp"

namespace blochlab {

namespace {

constexpr double kSingularFloor = 1e-14;

double norm_sq(const Point& z) {
    double s = 0.0;
    for (const cx& v : z) s += std::norm(v);
    return s;
}

std::shared_ptr<MapNode> fresh(HoloMap::Kind kind) {
    auto node = std::make_shared<MapNode>();
    node->kind = kind;
    return node;
}

bool is_valid_permutation(const std::vector<int>& tau) {
    std::vector<char> seen(tau.size(), 0);
    for (int t : tau) {
        if (t < 0 || t >= static_cast<int>(tau.size()) || seen[t]) return false;
        seen[t] = 1;
    }
    return true;
}

// T(z) = e^{iθ}(a−z)/(1−āz) and its derivative e^{iθ}(|a|²−1)/(1−āz)².
cx mobius_value(cx a, double theta, cx z) {
    const cx den = cx(1.0) - std::conj(a) * z;
    if (std::abs(den) < kSingularFloor)
        throw SingularityError("mobius evaluation: denominator vanishes");
    return std::polar(1.0, theta) * (a - z) / den;
}

cx mobius_derivative(cx a, double theta, cx z) {
    const cx den = cx(1.0) - std::conj(a) * z;
    if (std::abs(den) < kSingularFloor)
        throw SingularityError("mobius derivative: denominator vanishes");
    return std::polar(1.0, theta) * (std::norm(a) - 1.0) / (den * den);
}

// One Blaschke factor; zeros at the origin contribute the factor z itself.
cx blaschke_factor(cx zero, cx z) {
    if (zero == cx(0.0)) return z;
    const cx den = cx(1.0) - std::conj(zero) * z;
    if (std::abs(den) < kSingularFloor)
        throw SingularityError("blaschke factor: denominator vanishes");
    return (std::conj(zero) / std::abs(zero)) * (zero - z) / den;
}

cx blaschke_factor_derivative(cx zero, cx z) {
    if (zero == cx(0.0)) return cx(1.0);
    const cx den = cx(1.0) - std::conj(zero) * z;
    if (std::abs(den) < kSingularFloor)
        throw SingularityError("blaschke factor: denominator vanishes");
    return (std::conj(zero) / std::abs(zero)) * (std::norm(zero) - 1.0) / (den * den);
}

// Jacobian of the ball involution φ_a. With L = s·I + (1−s)·aa†/‖a‖²,
// s = √(1−‖a‖²) and δ(z) = 1−⟨z,a⟩, the map is (a−Lz)/δ, so
// J = −L/δ + (a−Lz)ā^T/δ².
CMatrix ball_involution_jacobian(const Point& a, const Point& z) {
    const int n = static_cast<int>(a.size());
    const double aa = norm_sq(a);
    if (aa == 0.0) return cx(-1.0) * CMatrix::identity(n);
    const double s = std::sqrt(1.0 - aa);
    CMatrix L(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            L(i, k) = (1.0 - s) * a[i] * std::conj(a[k]) / aa;
            if (i == k) L(i, k) += s;
        }
    }
    cx inner(0.0);
    for (int k = 0; k < n; ++k) inner += std::conj(a[k]) * z[k];
    const cx den = cx(1.0) - inner;
    if (std::abs(den) < kSingularFloor)
        throw SingularityError("ball involution: denominator vanishes");
    Point num(n);
    for (int i = 0; i < n; ++i) {
        cx lz(0.0);
        for (int k = 0; k < n; ++k) lz += L(i, k) * z[k];
        num[i] = a[i] - lz;
    }
    CMatrix jac(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            jac(i, k) = -L(i, k) / den + num[i] * std::conj(a[k]) / (den * den);
    return jac;
}

Point slice(const Point& z, int offset, int len) {
    return Point(z.begin() + offset, z.begin() + offset + len);
}

Point eval_node(const MapNode& nd, const Point& z, std::vector<std::string>* warnings);

CMatrix jacobian_node(const MapNode& nd, const Point& z);

// B(ψ_a(w)) for a Blaschke product B and the involution ψ_a, factor by
// factor:
//   b_j(ψ_a(w)) = σ_j[(z_j−a) + w(1−z_j ā)] / [(1−z̄_j a) + w(z̄_j−ā)].
// Materializing ψ_a(w) first destroys the boundary margin 1−|ψ_a(w)| by
// cancellation once a zero sits within ~1e-8 of ∂𝔻; combining the
// coefficients before rounding keeps the z_j = a factor exact and the rest
// at machine precision, which is what lets the convergence residuals of the
// proposed automorphism sequences keep decreasing at the deepest zeros.
cx blaschke_after_involution(const MapNode& bl, cx a, cx w) {
    cx acc = bl.front;
    for (const cx& zj : bl.zeros) {
        if (zj == cx(0.0)) {
            const cx den0 = 1.0 - std::conj(a) * w;
            if (std::abs(den0) < kSingularFloor)
                throw SingularityError("blaschke product: involution pole reached");
            acc *= (a - w) / den0;
            continue;
        }
        const cx num = (zj - a) + w * (1.0 - zj * std::conj(a));
        const cx den = (1.0 - std::conj(zj) * a) + w * (std::conj(zj) - std::conj(a));
        if (std::abs(den) < kSingularFloor)
            throw SingularityError("blaschke product: factor pole reached");
        acc *= (std::conj(zj) / std::abs(zj)) * num / den;
    }
    return acc;
}

Point eval_node(const MapNode& nd, const Point& z, std::vector<std::string>* warnings) {
    switch (nd.kind) {
    case HoloMap::Kind::MobiusDisk:
        return {mobius_value(nd.a, nd.theta, z[0])};
    case HoloMap::Kind::BallAutomorphism:
        return nd.unitary * ball_involution(nd.center, z);
    case HoloMap::Kind::PolydiskAutomorphism: {
        Point w(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) {
            const MapNode& comp = nd.subs[k].node();
            w[k] = mobius_value(comp.a, comp.theta, z[nd.tau[k]]);
        }
        return w;
    }
    case HoloMap::Kind::BlaschkeProduct: {
        cx acc = nd.front;
        for (const cx& zero : nd.zeros) acc *= blaschke_factor(zero, z[0]);
        return {acc};
    }
    case HoloMap::Kind::Projection:
        return {z[nd.j - 1]};
    case HoloMap::Kind::ModifiedProjection:
        return {z[nd.r - 1] + cx(0.0, static_cast<double>(nd.sign)) * z[nd.s - 1]};
    case HoloMap::Kind::DiagonalEmbedding:
        return Point(static_cast<std::size_t>(nd.codim), z[0]);
    case HoloMap::Kind::ExtremalLogMap: {
        const double b = std::sqrt(norm_sq(nd.center));
        cx t(0.0);
        for (std::size_t k = 0; k < z.size(); ++k) t += z[k] * std::conj(nd.center[k]);
        if (std::abs(cx(b) - t) < kSingularFloor || std::abs(cx(b) + t) < kSingularFloor)
            throw SingularityError("extremal log map: argument reaches a pole");
        return {0.5 * std::log((cx(b) + t) / (cx(b) - t))};
    }
    case HoloMap::Kind::Example51Map:
    case HoloMap::Kind::ProductMap: {
        Point w;
        w.reserve(static_cast<std::size_t>(nd.codim));
        int offset = 0;
        for (const HoloMap& f : nd.subs) {
            const int d = f.domain().dimension();
            Point piece = f.evaluate(slice(z, offset, d), warnings);
            w.insert(w.end(), piece.begin(), piece.end());
            offset += d;
        }
        return w;
    }
    case HoloMap::Kind::Compose: {
        const MapNode& outer = nd.subs[0].node();
        const MapNode& in = nd.subs[1].node();
        if (outer.kind == HoloMap::Kind::BlaschkeProduct) {
            if (in.kind == HoloMap::Kind::MobiusDisk && in.theta == 0.0)
                return {blaschke_after_involution(outer, in.a, z[0])};
            if (in.kind == HoloMap::Kind::Compose &&
                in.subs[0].kind() == HoloMap::Kind::MobiusDisk &&
                in.subs[0].node().theta == 0.0) {
                const Point w = in.subs[1].evaluate(z, warnings);
                return {blaschke_after_involution(outer, in.subs[0].node().a, w[0])};
            }
        }
        if ((outer.kind == HoloMap::Kind::ProductMap ||
             outer.kind == HoloMap::Kind::Example51Map) &&
            in.kind == HoloMap::Kind::ProductMap && outer.subs.size() == in.subs.size()) {
            // Slot-aligned product compositions evaluate slotwise so the
            // Blaschke-after-involution form above stays reachable inside
            // product symbols.
            bool aligned = true;
            for (std::size_t i = 0; i < in.subs.size(); ++i)
                if (in.subs[i].codomain_dim() != outer.subs[i].domain().dimension())
                    aligned = false;
            if (aligned) {
                Point w;
                w.reserve(static_cast<std::size_t>(nd.codim));
                int offset = 0;
                for (std::size_t i = 0; i < in.subs.size(); ++i) {
                    const int d = in.subs[i].domain().dimension();
                    Point piece = compose(outer.subs[i], in.subs[i])
                                      .evaluate(slice(z, offset, d), warnings);
                    w.insert(w.end(), piece.begin(), piece.end());
                    offset += d;
                }
                return w;
            }
        }
        return nd.subs[0].evaluate(nd.subs[1].evaluate(z, warnings), warnings);
    }
    case HoloMap::Kind::Constant:
        return nd.center;
    case HoloMap::Kind::ExprMap: {
        Point w(nd.comps.size());
        for (std::size_t i = 0; i < nd.comps.size(); ++i)
            w[i] = eval_expr(nd.comps[i], z, warnings);
        return w;
    }
    case HoloMap::Kind::Identity:
        return z;
    }
    throw ValidationError("evaluate: unknown map kind");
}

CMatrix jacobian_node(const MapNode& nd, const Point& z) {
    const int dim = nd.domain.dimension();
    switch (nd.kind) {
    case HoloMap::Kind::MobiusDisk: {
        CMatrix jac(1, 1);
        jac(0, 0) = mobius_derivative(nd.a, nd.theta, z[0]);
        return jac;
    }
    case HoloMap::Kind::BallAutomorphism:
        return nd.unitary * ball_involution_jacobian(nd.center, z);
    case HoloMap::Kind::PolydiskAutomorphism: {
        CMatrix jac(dim, dim);
        for (int k = 0; k < dim; ++k) {
            const MapNode& comp = nd.subs[k].node();
            jac(k, nd.tau[k]) = mobius_derivative(comp.a, comp.theta, z[nd.tau[k]]);
        }
        return jac;
    }
    case HoloMap::Kind::BlaschkeProduct: {
        // Product rule; the term for zero k keeps every other factor.
        cx sum(0.0);
        for (std::size_t k = 0; k < nd.zeros.size(); ++k) {
            cx term = blaschke_factor_derivative(nd.zeros[k], z[0]);
            for (std::size_t j = 0; j < nd.zeros.size(); ++j)
                if (j != k) term *= blaschke_factor(nd.zeros[j], z[0]);
            sum += term;
        }
        CMatrix jac(1, 1);
        jac(0, 0) = nd.front * sum;
        return jac;
    }
    case HoloMap::Kind::Projection: {
        CMatrix jac(1, dim);
        jac(0, nd.j - 1) = cx(1.0);
        return jac;
    }
    case HoloMap::Kind::ModifiedProjection: {
        CMatrix jac(1, dim);
        jac(0, nd.r - 1) = cx(1.0);
        jac(0, nd.s - 1) = cx(0.0, static_cast<double>(nd.sign));
        return jac;
    }
    case HoloMap::Kind::DiagonalEmbedding: {
        CMatrix jac(nd.codim, 1);
        for (int i = 0; i < nd.codim; ++i) jac(i, 0) = cx(1.0);
        return jac;
    }
    case HoloMap::Kind::ExtremalLogMap: {
        // ∂_j f = ā_j b/(b²−t²) with t = ⟨z,a⟩, b = ‖a‖.
        const double b = std::sqrt(norm_sq(nd.center));
        cx t(0.0);
        for (std::size_t k = 0; k < z.size(); ++k) t += z[k] * std::conj(nd.center[k]);
        const cx den = cx(b * b) - t * t;
        if (std::abs(den) < kSingularFloor)
            throw SingularityError("extremal log map: argument reaches a pole");
        CMatrix jac(1, dim);
        for (int k = 0; k < dim; ++k) jac(0, k) = std::conj(nd.center[k]) * cx(b) / den;
        return jac;
    }
    case HoloMap::Kind::Example51Map:
    case HoloMap::Kind::ProductMap: {
        CMatrix jac(nd.codim, dim);
        int row = 0, col = 0;
        for (const HoloMap& f : nd.subs) {
            const int d = f.domain().dimension();
            CMatrix block = f.jacobian(slice(z, col, d));
            for (int i = 0; i < block.rows(); ++i)
                for (int k = 0; k < block.cols(); ++k)
                    jac(row + i, col + k) = block(i, k);
            row += block.rows();
            col += d;
        }
        return jac;
    }
    case HoloMap::Kind::Compose: {
        const Point mid = nd.subs[1].evaluate(z);
        return nd.subs[0].jacobian(mid) * nd.subs[1].jacobian(z);
    }
    case HoloMap::Kind::Constant:
        return CMatrix(nd.codim, dim);
    case HoloMap::Kind::ExprMap: {
        CMatrix jac(nd.codim, dim);
        for (int i = 0; i < nd.codim; ++i)
            for (int k = 0; k < dim; ++k)
                jac(i, k) = eval_expr(nd.grads[i][k], z);
        return jac;
    }
    case HoloMap::Kind::Identity:
        return CMatrix::identity(dim);
    }
    throw ValidationError("jacobian: unknown map kind");
}

} // namespace

HoloMap::Kind HoloMap::kind() const { return node_->kind; }
const DomainSpec& HoloMap::domain() const { return node_->domain; }
const std::optional<DomainSpec>& HoloMap::codomain() const { return node_->codomain; }
int HoloMap::codomain_dim() const { return node_->codim; }

Point HoloMap::evaluate(const Point& z, std::vector<std::string>* warnings) const {
    if (static_cast<int>(z.size()) != node_->domain.dimension())
        throw ValidationError("evaluate: point dimension " + std::to_string(z.size()) +
                              " does not match domain dimension " +
                              std::to_string(node_->domain.dimension()));
    if (!contains(node_->domain, z).inside)
        throw ValidationError("evaluate: point is not interior to the map domain");
    return eval_node(*node_, z, warnings);
}

CMatrix HoloMap::jacobian(const Point& z) const {
    if (static_cast<int>(z.size()) != node_->domain.dimension())
        throw ValidationError("jacobian: point dimension " + std::to_string(z.size()) +
                              " does not match domain dimension " +
                              std::to_string(node_->domain.dimension()));
    if (!contains(node_->domain, z).inside)
        throw ValidationError("jacobian: point is not interior to the map domain");
    return jacobian_node(*node_, z);
}

HoloMap HoloMap::mobius_disk(cx a, double theta) {
    if (std::norm(a) >= 1.0)
        throw ValidationError("mobius_disk: center must lie inside the unit disk");
    auto node = fresh(Kind::MobiusDisk);
    node->domain = DomainSpec::disk();
    node->codomain = DomainSpec::disk();
    node->codim = 1;
    node->a = a;
    node->theta = theta;
    return HoloMap(std::move(node));
}

HoloMap HoloMap::ball_automorphism(CMatrix unitary, Point a) {
    const int n = static_cast<int>(a.size());
    if (n < 1) throw ValidationError("ball_automorphism: empty center");
    if (unitary.rows() != n || unitary.cols() != n)
        throw ValidationError("ball_automorphism: matrix shape does not match center length");
    const CMatrix gram = unitary.adjoint() * unitary;
    if ((gram - CMatrix::identity(n)).max_abs() > 1e-10)
        throw ValidationError("ball_automorphism: matrix is not unitary");
    if (norm_sq(a) >= 1.0)
        throw ValidationError("ball_automorphism: center must lie inside the ball");
    auto node = fresh(Kind::BallAutomorphism);
    node->domain = DomainSpec::ball(n);
    node->codomain = node->domain;
    node->codim = n;
    node->unitary = std::move(unitary);
    node->center = std::move(a);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::polydisk_automorphism(std::vector<HoloMap> mobius_components,
                                       std::vector<int> tau) {
    const int n = static_cast<int>(mobius_components.size());
    if (n < 1) throw ValidationError("polydisk_automorphism: needs at least one component");
    if (static_cast<int>(tau.size()) != n || !is_valid_permutation(tau))
        throw ValidationError("polydisk_automorphism: tau is not a permutation of the slots");
    for (const HoloMap& comp : mobius_components)
        if (comp.kind() != Kind::MobiusDisk)
            throw ValidationError("polydisk_automorphism: every component must be a disk mobius map");
    auto node = fresh(Kind::PolydiskAutomorphism);
    node->domain = DomainSpec::polydisk(n);
    node->codomain = node->domain;
    node->codim = n;
    node->subs = std::move(mobius_components);
    node->tau = std::move(tau);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::blaschke_product(CVec zeros, cx front) {
    if (zeros.empty())
        throw ValidationError("blaschke_product: needs at least one zero");
    for (const cx& zero : zeros)
        if (std::norm(zero) >= 1.0)
            throw ValidationError("blaschke_product: zeros must lie inside the unit disk");
    if (std::abs(std::abs(front) - 1.0) > 1e-12)
        throw ValidationError("blaschke_product: front factor must be unimodular");
    auto node = fresh(Kind::BlaschkeProduct);
    node->domain = DomainSpec::disk();
    node->codomain = DomainSpec::disk();
    node->codim = 1;
    node->zeros = std::move(zeros);
    node->front = front;
    return HoloMap(std::move(node));
}

HoloMap HoloMap::projection(DomainSpec domain, int j) {
    if (j < 1 || j > domain.dimension())
        throw ValidationError("projection: slot " + std::to_string(j) + " out of range");
    auto node = fresh(Kind::Projection);
    node->domain = std::move(domain);
    node->codim = 1;
    node->j = j;
    return HoloMap(std::move(node));
}

HoloMap HoloMap::modified_projection(DomainSpec domain, int r, int s, int sign) {
    const int dim = domain.dimension();
    if (r < 1 || r > dim || s < 1 || s > dim || r == s)
        throw ValidationError("modified_projection: slots must be distinct and in range");
    if (sign != 1 && sign != -1)
        throw ValidationError("modified_projection: sign must be +1 or -1");
    auto node = fresh(Kind::ModifiedProjection);
    node->domain = std::move(domain);
    node->codim = 1;
    node->r = r;
    node->s = s;
    node->sign = sign;
    return HoloMap(std::move(node));
}

HoloMap HoloMap::diagonal_embedding(int n) {
    if (n < 1) throw ValidationError("diagonal_embedding: n must be positive");
    auto node = fresh(Kind::DiagonalEmbedding);
    node->domain = DomainSpec::disk();
    node->codomain = DomainSpec::polydisk(n);
    node->codim = n;
    return HoloMap(std::move(node));
}

HoloMap HoloMap::extremal_log_map(Point a) {
    const double nn = norm_sq(a);
    if (nn == 0.0)
        throw ValidationError("extremal_log_map: center must be nonzero");
    if (nn >= 1.0)
        throw ValidationError("extremal_log_map: center must lie inside the ball");
    const int n = static_cast<int>(a.size());
    auto node = fresh(Kind::ExtremalLogMap);
    node->domain = n == 1 ? DomainSpec::disk() : DomainSpec::ball(n);
    node->codim = 1;
    node->center = std::move(a);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::example51(HoloMap origin_fixing_automorphism, HoloMap disk_self_map) {
    const HoloMap& u = origin_fixing_automorphism;
    if (!is_automorphism(u))
        throw ValidationError("example51: first argument must be an automorphism");
    const Point origin(u.domain().dimension(), cx(0.0));
    const Point image = u.evaluate(origin);
    if (std::sqrt(norm_sq(image)) > 1e-12)
        throw ValidationError("example51: first argument must fix the origin");
    if (disk_self_map.domain() != DomainSpec::disk() ||
        !disk_self_map.codomain() || *disk_self_map.codomain() != DomainSpec::disk())
        throw ValidationError("example51: second argument must be a disk self-map");
    auto node = fresh(Kind::Example51Map);
    node->domain = DomainSpec::product({u.domain(), DomainSpec::disk()});
    node->codomain = node->domain;
    node->codim = node->domain.dimension();
    node->subs = {u, std::move(disk_self_map)};
    return HoloMap(std::move(node));
}

HoloMap HoloMap::product_map(std::vector<HoloMap> factors) {
    if (factors.empty())
        throw ValidationError("product_map: needs at least one factor");
    std::vector<DomainSpec> domains;
    std::vector<DomainSpec> codomains;
    bool all_bounded = true;
    int codim = 0;
    for (const HoloMap& f : factors) {
        domains.push_back(f.domain());
        codim += f.codomain_dim();
        if (f.codomain()) codomains.push_back(*f.codomain());
        else all_bounded = false;
    }
    auto node = fresh(Kind::ProductMap);
    node->domain = DomainSpec::product(domains);
    if (all_bounded) node->codomain = DomainSpec::product(codomains);
    node->codim = codim;
    node->subs = std::move(factors);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::constant(DomainSpec domain, Point value) {
    if (static_cast<int>(value.size()) != domain.dimension())
        throw ValidationError("constant: value dimension does not match the domain");
    if (!contains(domain, value).inside)
        throw ValidationError("constant: value must lie inside the domain");
    auto node = fresh(Kind::Constant);
    node->codomain = domain;
    node->domain = std::move(domain);
    node->codim = static_cast<int>(value.size());
    node->center = std::move(value);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::expr_map(DomainSpec domain, const std::vector<std::string>& components) {
    std::vector<ExprPtr> parsed;
    parsed.reserve(components.size());
    for (const std::string& text : components)
        parsed.push_back(parse_expr(text, domain.dimension()));
    return expr_map(std::move(domain), std::move(parsed));
}

HoloMap HoloMap::expr_map(DomainSpec domain, std::vector<ExprPtr> components) {
    if (components.empty())
        throw ValidationError("expr_map: needs at least one component");
    const int dim = domain.dimension();
    auto node = fresh(Kind::ExprMap);
    node->codim = static_cast<int>(components.size());
    for (const ExprPtr& c : components) node->grads.push_back(expr_gradient(c, dim));
    node->comps = std::move(components);
    node->domain = std::move(domain);
    return HoloMap(std::move(node));
}

HoloMap HoloMap::identity(DomainSpec domain) {
    auto node = fresh(Kind::Identity);
    node->codomain = domain;
    node->codim = domain.dimension();
    node->domain = std::move(domain);
    return HoloMap(std::move(node));
}

HoloMap compose(HoloMap f, HoloMap g) {
    if (f.domain().dimension() != g.codomain_dim())
        throw ValidationError("compose: inner map produces dimension " +
                              std::to_string(g.codomain_dim()) + " but outer map expects " +
                              std::to_string(f.domain().dimension()));
    auto node = fresh(HoloMap::Kind::Compose);
    node->domain = g.domain();
    node->codomain = f.codomain();
    node->codim = f.codomain_dim();
    node->subs = {std::move(f), std::move(g)};
    return HoloMap(std::move(node));
}

HoloMap involution_at(const DomainSpec& spec, const Point& a) {
    if (static_cast<int>(a.size()) != spec.dimension())
        throw ValidationError("involution_at: point dimension does not match the domain");
    if (!contains(spec, a).inside)
        throw ValidationError("involution_at: point must be interior");
    switch (spec.kind()) {
    case DomainSpec::Kind::Disk:
        return HoloMap::mobius_disk(a[0], 0.0);
    case DomainSpec::Kind::Ball:
        return HoloMap::ball_automorphism(CMatrix::identity(spec.n()), a);
    case DomainSpec::Kind::Polydisk: {
        std::vector<HoloMap> comps;
        std::vector<int> tau;
        for (int k = 0; k < spec.n(); ++k) {
            comps.push_back(HoloMap::mobius_disk(a[k], 0.0));
            tau.push_back(k);
        }
        return HoloMap::polydisk_automorphism(std::move(comps), std::move(tau));
    }
    case DomainSpec::Kind::Product: {
        std::vector<HoloMap> parts;
        int offset = 0;
        for (const DomainSpec& factor : spec.factors()) {
            const int d = factor.dimension();
            parts.push_back(involution_at(factor, slice(a, offset, d)));
            offset += d;
        }
        return HoloMap::product_map(std::move(parts));
    }
    default:
        throw UnsupportedError("involution_at: matrix factors have no involution here");
    }
}

bool is_automorphism(const HoloMap& map) {
    switch (map.kind()) {
    case HoloMap::Kind::MobiusDisk:
    case HoloMap::Kind::BallAutomorphism:
    case HoloMap::Kind::PolydiskAutomorphism:
    case HoloMap::Kind::Identity:
        return true;
    case HoloMap::Kind::BlaschkeProduct:
        // A single factor is a disk automorphism; longer products are not.
        return map.node().zeros.size() == 1;
    case HoloMap::Kind::Example51Map:
    case HoloMap::Kind::ProductMap: {
        for (const HoloMap& f : map.node().subs)
            if (!is_automorphism(f)) return false;
        return true;
    }
    case HoloMap::Kind::Compose: {
        const HoloMap& outer = map.node().subs[0];
        const HoloMap& inner = map.node().subs[1];
        return is_automorphism(outer) && is_automorphism(inner) &&
               outer.domain() == inner.domain();
    }
    default:
        return false;
    }
}

} // namespace blochlab
