#include "blochlab/domains.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "blochlab/rng.hpp"

namespace blochlab {

namespace {

double norm_sq(const Point& z) {
    double s = 0.0;
    for (const cx& c : z) s += std::norm(c);
    return s;
}

bool is_matrix_kind(DomainSpec::Kind k) {
    return k == DomainSpec::Kind::CartanI || k == DomainSpec::Kind::CartanII ||
           k == DomainSpec::Kind::CartanIII;
}

// Average away the ~1e-15 Hermitian asymmetry a matrix product leaves behind.
void hermitize(CMatrix& m) {
    for (int j = 0; j < m.rows(); ++j) {
        m(j, j) = cx(m(j, j).real(), 0.0);
        for (int k = j + 1; k < m.cols(); ++k) {
            cx avg = 0.5 * (m(j, k) + std::conj(m(k, j)));
            m(j, k) = avg;
            m(k, j) = std::conj(avg);
        }
    }
}

} // namespace

DomainSpec DomainSpec::disk() { return DomainSpec(Kind::Disk, 1, 1); }

DomainSpec DomainSpec::ball(int n) {
    if (n < 1) throw ValidationError("ball requires n >= 1");
    return DomainSpec(Kind::Ball, n, n);
}

DomainSpec DomainSpec::polydisk(int n) {
    if (n < 1) throw ValidationError("polydisk requires n >= 1");
    return DomainSpec(Kind::Polydisk, n, n);
}

DomainSpec DomainSpec::cartan1(int m, int n) {
    if (n < 1 || m < n) throw ValidationError("cartan1 requires m >= n >= 1");
    return DomainSpec(Kind::CartanI, m, n);
}

DomainSpec DomainSpec::cartan2(int n) {
    if (n < 2) throw ValidationError("cartan2 requires n >= 2");
    return DomainSpec(Kind::CartanII, n, n);
}

DomainSpec DomainSpec::cartan3(int n) {
    if (n < 5) throw ValidationError("cartan3 requires n >= 5");
    return DomainSpec(Kind::CartanIII, n, n);
}

DomainSpec DomainSpec::cartan4(int n) {
    if (n < 5) throw ValidationError("cartan4 requires n >= 5");
    return DomainSpec(Kind::CartanIV, n, n);
}

DomainSpec DomainSpec::product(std::vector<DomainSpec> factors) {
    std::vector<DomainSpec> flat;
    for (DomainSpec& f : factors) {
        if (f.kind() == Kind::Product) {
            for (const DomainSpec& g : f.factors()) flat.push_back(g);
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) throw ValidationError("product requires at least one factor");
    if (flat.size() == 1) return flat[0];
    DomainSpec s(Kind::Product, 0, 0);
    s.factors_ = std::move(flat);
    return s;
}

int DomainSpec::dimension() const {
    switch (kind_) {
        case Kind::Disk: return 1;
        case Kind::Ball:
        case Kind::Polydisk:
        case Kind::CartanIV: return n_;
        case Kind::CartanI: return m_ * n_;
        case Kind::CartanII: return n_ * (n_ + 1) / 2;
        case Kind::CartanIII: return n_ * (n_ - 1) / 2;
        case Kind::Product: {
            int d = 0;
            for (const DomainSpec& f : factors_) d += f.dimension();
            return d;
        }
    }
    return 0;
}

bool DomainSpec::operator==(const DomainSpec& o) const {
    return kind_ == o.kind_ && m_ == o.m_ && n_ == o.n_ && factors_ == o.factors_;
}

namespace {

class DomainParser {
public:
    explicit DomainParser(std::string text) : s_(std::move(text)) {}

    DomainSpec run() {
        DomainSpec spec = parse_spec();
        if (pos_ != s_.size())
            throw ValidationError("domain string has trailing characters at position " +
                                  std::to_string(pos_));
        return spec;
    }

private:
    DomainSpec parse_spec() {
        if (eat("product(")) {
            std::vector<DomainSpec> factors;
            factors.push_back(parse_spec());
            while (eat(",")) factors.push_back(parse_spec());
            if (!eat(")"))
                throw ValidationError("expected ')' in product at position " + std::to_string(pos_));
            return DomainSpec::product(std::move(factors));
        }
        if (eat("disk")) return DomainSpec::disk();
        if (eat("ball:")) return DomainSpec::ball(parse_int());
        if (eat("polydisk:")) return DomainSpec::polydisk(parse_int());
        if (eat("cartan1:")) {
            int m = parse_int();
            if (!eat("x"))
                throw ValidationError("cartan1 expects <m>x<n> at position " + std::to_string(pos_));
            int n = parse_int();
            return DomainSpec::cartan1(m, n);
        }
        if (eat("cartan2:")) return DomainSpec::cartan2(parse_int());
        if (eat("cartan3:")) return DomainSpec::cartan3(parse_int());
        if (eat("cartan4:")) return DomainSpec::cartan4(parse_int());
        throw ValidationError("unrecognized domain at position " + std::to_string(pos_) + " in '" +
                              s_ + "'");
    }

    bool eat(const std::string& tok) {
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    int parse_int() {
        size_t start = pos_;
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 100000) throw ValidationError("domain size out of range");
            ++pos_;
        }
        if (pos_ == start)
            throw ValidationError("expected integer at position " + std::to_string(pos_));
        return static_cast<int>(v);
    }

    std::string s_;
    size_t pos_ = 0;
};

} // namespace

DomainSpec parse_domain(const std::string& text) {
    std::string stripped;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    return DomainParser(std::move(stripped)).run();
}

std::string to_string(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk: return "disk";
        case K::Ball: return "ball:" + std::to_string(spec.n());
        case K::Polydisk: return "polydisk:" + std::to_string(spec.n());
        case K::CartanI:
            return "cartan1:" + std::to_string(spec.rows()) + "x" + std::to_string(spec.n());
        case K::CartanII: return "cartan2:" + std::to_string(spec.n());
        case K::CartanIII: return "cartan3:" + std::to_string(spec.n());
        case K::CartanIV: return "cartan4:" + std::to_string(spec.n());
        case K::Product: {
            std::string out = "product(";
            for (size_t i = 0; i < spec.factors().size(); ++i) {
                if (i) out += ",";
                out += to_string(spec.factors()[i]);
            }
            return out + ")";
        }
    }
    throw ValidationError("invalid domain spec");
}

CMatrix cartan_embed(const DomainSpec& spec, const Point& z) {
    using K = DomainSpec::Kind;
    if (!is_matrix_kind(spec.kind()))
        throw ValidationError("cartan_embed requires a Cartan I/II/III domain");
    if (static_cast<int>(z.size()) != spec.dimension())
        throw ValidationError("cartan_embed: coordinate length mismatch");
    const int m = spec.rows(), n = spec.n();
    CMatrix Z(m, n);
    int idx = 0;
    if (spec.kind() == K::CartanI) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) Z(r, c) = z[idx++];
    } else if (spec.kind() == K::CartanII) {
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) {
                Z(r, c) = z[idx];
                Z(c, r) = z[idx];
                ++idx;
            }
    } else {
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) {
                Z(r, c) = z[idx];
                Z(c, r) = -z[idx];
                ++idx;
            }
    }
    return Z;
}

Point cartan_flatten(const DomainSpec& spec, const CMatrix& Z) {
    using K = DomainSpec::Kind;
    if (!is_matrix_kind(spec.kind()))
        throw ValidationError("cartan_flatten requires a Cartan I/II/III domain");
    if (Z.rows() != spec.rows() || Z.cols() != spec.n())
        throw ValidationError("cartan_flatten: matrix shape mismatch");
    constexpr double tol = 1e-10;
    Point out;
    out.reserve(spec.dimension());
    if (spec.kind() == K::CartanI) {
        for (int r = 0; r < Z.rows(); ++r)
            for (int c = 0; c < Z.cols(); ++c) out.push_back(Z(r, c));
    } else if (spec.kind() == K::CartanII) {
        for (int r = 0; r < Z.rows(); ++r)
            for (int c = r; c < Z.cols(); ++c) {
                if (std::abs(Z(c, r) - Z(r, c)) > tol)
                    throw ValidationError("cartan_flatten: matrix is not symmetric");
                out.push_back(Z(r, c));
            }
    } else {
        for (int r = 0; r < Z.rows(); ++r) {
            if (std::abs(Z(r, r)) > tol)
                throw ValidationError("cartan_flatten: matrix is not antisymmetric");
            for (int c = r + 1; c < Z.cols(); ++c) {
                if (std::abs(Z(c, r) + Z(r, c)) > tol)
                    throw ValidationError("cartan_flatten: matrix is not antisymmetric");
                out.push_back(Z(r, c));
            }
        }
    }
    return out;
}

std::vector<CMatrix> cartan_basis(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    if (!is_matrix_kind(spec.kind()))
        throw ValidationError("cartan_basis requires a Cartan I/II/III domain");
    const int m = spec.rows(), n = spec.n();
    std::vector<CMatrix> basis;
    basis.reserve(spec.dimension());
    auto single = [&](int r, int c) {
        CMatrix b(m, n);
        b(r, c) = 1.0;
        return b;
    };
    if (spec.kind() == K::CartanI) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) basis.push_back(single(r, c));
    } else if (spec.kind() == K::CartanII) {
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) {
                CMatrix b(m, n);
                b(r, c) = 1.0;
                b(c, r) = 1.0;
                basis.push_back(b);
            }
    } else {
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) {
                CMatrix b(m, n);
                b(r, c) = 1.0;
                b(c, r) = -1.0;
                basis.push_back(b);
            }
    }
    return basis;
}

Containment contains(const DomainSpec& spec, const Point& z) {
    using K = DomainSpec::Kind;
    if (static_cast<int>(z.size()) != spec.dimension())
        throw ValidationError("contains: coordinate length " + std::to_string(z.size()) +
                              " does not match domain dimension " +
                              std::to_string(spec.dimension()));
    double margin = 0.0;
    switch (spec.kind()) {
        case K::Disk:
            margin = 1.0 - std::abs(z[0]);
            break;
        case K::Ball:
            margin = 1.0 - std::sqrt(norm_sq(z));
            break;
        case K::Polydisk: {
            margin = std::numeric_limits<double>::infinity();
            for (const cx& c : z) margin = std::min(margin, 1.0 - std::abs(c));
            break;
        }
        case K::CartanI:
        case K::CartanII:
        case K::CartanIII: {
            CMatrix Z = cartan_embed(spec, z);
            CMatrix G = CMatrix::identity(spec.rows()) - Z * Z.adjoint();
            margin = hermitian_eigenvalues(HermitianForm(std::move(G))).front();
            break;
        }
        case K::CartanIV: {
            cx q = 0.0;
            for (const cx& c : z) q += c * c;
            double a = std::norm(q) + 1.0 - 2.0 * norm_sq(z);
            margin = std::min(a, 1.0 - std::abs(q));
            break;
        }
        case K::Product: {
            margin = std::numeric_limits<double>::infinity();
            size_t off = 0;
            for (const DomainSpec& f : spec.factors()) {
                size_t d = static_cast<size_t>(f.dimension());
                Point sub(z.begin() + off, z.begin() + off + d);
                margin = std::min(margin, contains(f, sub).margin);
                off += d;
            }
            break;
        }
    }
    return Containment{margin > 0.0, margin};
}

namespace {

CMatrix metric_impl(const DomainSpec& spec, const Point& z);

CMatrix ball_metric(const Point& z) {
    const int n = static_cast<int>(z.size());
    const double s = norm_sq(z);
    const double c = (n + 1) / (2.0 * (1.0 - s) * (1.0 - s));
    CMatrix M(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            cx v = z[j] * std::conj(z[k]);
            if (j == k) v += 1.0 - s;
            M(j, k) = c * v;
        }
    return M;
}

CMatrix trace_form_metric(const DomainSpec& spec, const Point& z) {
    using K = DomainSpec::Kind;
    const int m = spec.rows(), n = spec.n(), d = spec.dimension();
    const double kappa = spec.kind() == K::CartanI    ? 0.5 * (m + n)
                         : spec.kind() == K::CartanII ? 0.5 * (n + 1)
                                                      : 0.5 * (n - 1);
    CMatrix Z = cartan_embed(spec, z);
    CMatrix P = hermitian_inverse(HermitianForm(CMatrix::identity(m) - Z * Z.adjoint()));
    CMatrix Q = hermitian_inverse(HermitianForm(CMatrix::identity(n) - Z.adjoint() * Z));
    std::vector<CMatrix> basis = cartan_basis(spec);
    std::vector<CMatrix> X(basis.size());
    for (int j = 0; j < d; ++j) X[j] = P * basis[j] * Q;
    // T encodes H(u,v̄) = Σ T_jk u_j v̄_k; the stored u†Mu convention is its
    // transpose.
    CMatrix M(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            cx acc = 0.0;
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < n; ++c) acc += X[j](r, c) * std::conj(basis[k](r, c));
            M(k, j) = kappa * acc;
        }
    hermitize(M);
    return M;
}

// Lie ball: H_z = (n/2) × mixed Wirtinger Hessian of −log A with
// A = |q|² + 1 − 2‖z‖², q = Σ z_j².  Closed form, with a_i = ∂A/∂z_i:
//   ∂²(−log A)/∂z_i∂z̄_j = [a_i·conj(a_j) − A·(4 z_i z̄_j − 2δ_ij)] / A².
CMatrix lie_ball_metric(const Point& z) {
    const int n = static_cast<int>(z.size());
    cx q = 0.0;
    for (const cx& c : z) q += c * c;
    const double A = std::norm(q) + 1.0 - 2.0 * norm_sq(z);
    CVec a(n);
    for (int i = 0; i < n; ++i) a[i] = 2.0 * (z[i] * std::conj(q) - std::conj(z[i]));
    const double scale = 0.5 * n / (A * A);
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx f = a[i] * std::conj(a[j]) - A * (4.0 * z[i] * std::conj(z[j]) -
                                                 (i == j ? cx(2.0) : cx(0.0)));
            M(i, j) = scale * std::conj(f);
        }
    return M;
}

CMatrix metric_impl(const DomainSpec& spec, const Point& z) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk: {
            CMatrix M(1, 1);
            double t = 1.0 - std::norm(z[0]);
            M(0, 0) = 1.0 / (t * t);
            return M;
        }
        case K::Ball: return ball_metric(z);
        case K::Polydisk: {
            const int n = spec.n();
            CMatrix M(n, n);
            for (int k = 0; k < n; ++k) {
                double t = 1.0 - std::norm(z[k]);
                M(k, k) = 1.0 / (t * t);
            }
            return M;
        }
        case K::CartanI:
        case K::CartanII:
        case K::CartanIII: return trace_form_metric(spec, z);
        case K::CartanIV: return lie_ball_metric(z);
        case K::Product: {
            const int d = spec.dimension();
            CMatrix M(d, d);
            size_t off = 0;
            for (const DomainSpec& f : spec.factors()) {
                size_t fd = static_cast<size_t>(f.dimension());
                Point sub(z.begin() + off, z.begin() + off + fd);
                CMatrix B = metric_impl(f, sub);
                for (size_t r = 0; r < fd; ++r)
                    for (size_t c = 0; c < fd; ++c)
                        M(static_cast<int>(off + r), static_cast<int>(off + c)) =
                            B(static_cast<int>(r), static_cast<int>(c));
                off += fd;
            }
            return M;
        }
    }
    throw ValidationError("invalid domain spec");
}

} // namespace

HermitianForm metric_matrix(const DomainSpec& spec, const Point& z) {
    Containment c = contains(spec, z);
    if (!c.inside)
        throw ValidationError("metric_matrix: point is not interior (margin " +
                              std::to_string(c.margin) + ")");
    return HermitianForm(metric_impl(spec, z));
}

double bloch_constant(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk:
        case K::Polydisk: return 1.0;
        case K::Ball: return std::sqrt(2.0 / (spec.n() + 1));
        case K::CartanI: return std::sqrt(2.0 / (spec.rows() + spec.n()));
        case K::CartanII: return std::sqrt(2.0 / (spec.n() + 1));
        case K::CartanIII: return std::sqrt(1.0 / (spec.n() - 1));
        case K::CartanIV: return std::sqrt(2.0 / spec.n());
        case K::Product: {
            double c = 0.0;
            for (const DomainSpec& f : spec.factors()) c = std::max(c, bloch_constant(f));
            return c;
        }
    }
    throw ValidationError("invalid domain spec");
}

int rank(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk:
        case K::Ball: return 1;
        case K::Polydisk: return spec.n();
        case K::CartanI: return spec.n();
        case K::CartanII: return spec.n();
        case K::CartanIII: return spec.n() / 2;
        case K::CartanIV: return 2;
        case K::Product: {
            int r = 0;
            for (const DomainSpec& f : spec.factors()) r += rank(f);
            return r;
        }
    }
    throw ValidationError("invalid domain spec");
}

std::vector<Point> extremal_boundary_directions(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    const int d = spec.dimension();
    auto unit = [&](int j) {
        Point p(d, cx(0.0));
        p[j] = 1.0;
        return p;
    };
    std::vector<Point> out;
    switch (spec.kind()) {
        case K::Disk:
        case K::Ball:
        case K::Polydisk:
        case K::CartanI:
        case K::CartanIII:
            // every free coordinate direction reaches the boundary at modulus 1
            for (int j = 0; j < d; ++j) out.push_back(unit(j));
            break;
        case K::CartanII: {
            // rank-one symmetric matrices: the diagonal coordinate slots
            int idx = 0;
            for (int r = 0; r < spec.n(); ++r) {
                out.push_back(unit(idx));
                idx += spec.n() - r;
            }
            break;
        }
        case K::CartanIV: {
            // isotropic pairs (e_r ± i e_s)/2 sit on the Lie-ball boundary
            const int n = spec.n();
            for (int r = 0; r < n; ++r)
                for (int s = r + 1; s < n; ++s)
                    for (int sign : {+1, -1}) {
                        Point p(d, cx(0.0));
                        p[r] = 0.5;
                        p[s] = cx(0.0, 0.5 * sign);
                        out.push_back(p);
                    }
            break;
        }
        case K::Product: {
            size_t off = 0;
            for (const DomainSpec& f : spec.factors()) {
                for (const Point& u : extremal_boundary_directions(f)) {
                    Point p(d, cx(0.0));
                    std::copy(u.begin(), u.end(), p.begin() + off);
                    out.push_back(p);
                }
                off += static_cast<size_t>(f.dimension());
            }
            break;
        }
    }
    return out;
}

double inner_radius(const DomainSpec& spec) {
    HermitianForm h0 = metric_matrix(spec, Point(spec.dimension(), cx(0.0)));
    double best = std::numeric_limits<double>::infinity();
    for (const Point& u : extremal_boundary_directions(spec))
        best = std::min(best, std::sqrt(h0.quad(u)));
    return best;
}

namespace {

double disk_rho(cx z, cx w) {
    double t = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return std::atanh(t);
}

} // namespace

double bergman_distance(const DomainSpec& spec, const Point& z, const Point& w) {
    using K = DomainSpec::Kind;
    if (!contains(spec, z).inside || !contains(spec, w).inside)
        throw ValidationError("bergman_distance: both points must be interior");
    switch (spec.kind()) {
        case K::Disk: return disk_rho(z[0], w[0]);
        case K::Ball: return std::sqrt(0.5 * (spec.n() + 1)) * zhu_distance_ball(z, w);
        case K::Polydisk: {
            double s = 0.0;
            for (int k = 0; k < spec.n(); ++k) {
                double r = disk_rho(z[k], w[k]);
                s += r * r;
            }
            return std::sqrt(s);
        }
        case K::Product: {
            double s = 0.0;
            size_t off = 0;
            for (const DomainSpec& f : spec.factors()) {
                size_t d = static_cast<size_t>(f.dimension());
                double r = bergman_distance(f, Point(z.begin() + off, z.begin() + off + d),
                                            Point(w.begin() + off, w.begin() + off + d));
                s += r * r;
                off += d;
            }
            return std::sqrt(s);
        }
        default:
            throw UnsupportedError(
                "bergman_distance is not provided on Cartan matrix or Lie-ball factors");
    }
}

double zhu_distance_ball(const Point& z, const Point& w) {
    if (z.size() != w.size()) throw ValidationError("zhu_distance_ball: dimension mismatch");
    if (norm_sq(z) >= 1.0 || norm_sq(w) >= 1.0)
        throw ValidationError("zhu_distance_ball: points must lie in the open unit ball");
    return std::atanh(std::sqrt(norm_sq(ball_involution(z, w))));
}

Point ball_involution(const Point& a, const Point& w) {
    if (a.size() != w.size()) throw ValidationError("ball_involution: dimension mismatch");
    const double sa2 = norm_sq(a);
    if (sa2 >= 1.0) throw ValidationError("ball_involution: center must be interior");
    const size_t n = a.size();
    Point out(n);
    if (sa2 == 0.0) {
        for (size_t i = 0; i < n; ++i) out[i] = -w[i];
        return out;
    }
    const double s = std::sqrt(1.0 - sa2);
    cx wa = 0.0;  // ⟨w, a⟩
    for (size_t i = 0; i < n; ++i) wa += w[i] * std::conj(a[i]);
    cx den = 1.0 - wa;
    if (std::abs(den) < 1e-14)
        throw SingularityError("ball_involution: denominator vanished");
    cx pc = wa / sa2;
    for (size_t i = 0; i < n; ++i) {
        cx pw = pc * a[i];
        out[i] = (a[i] - pw - s * (w[i] - pw)) / den;
    }
    return out;
}

namespace {

double implied_margin(const DomainSpec& spec, double cap) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk:
        case K::Ball:
        case K::Polydisk: return 1.0 - cap;
        case K::Product: {
            double m = 1.0;
            for (const DomainSpec& f : spec.factors()) m = std::min(m, implied_margin(f, cap));
            return m;
        }
        default: return 1.0 - cap * cap;
    }
}

cx gauss_pair(double u1, double u2) {
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double th = 2.0 * std::numbers::pi * u2;
    return cx(r * std::cos(th), r * std::sin(th));
}

// Direction from n complex gaussians, radius from the last cube coordinate
// with the volume-uniform exponent 1/(2n); consumes 2n+1 coordinates.
Point ball_like_from_cube(int n, const double* u, double radius) {
    CVec g(n);
    double ns = 0.0;
    for (int j = 0; j < n; ++j) {
        g[j] = gauss_pair(u[2 * j], u[2 * j + 1]);
        ns += std::norm(g[j]);
    }
    double nrm = std::sqrt(ns);
    if (nrm < 1e-150) {
        g.assign(n, cx(0.0));
        g[0] = 1.0;
        nrm = 1.0;
    }
    double r = radius * std::pow(u[2 * n], 1.0 / (2.0 * n));
    Point out(n);
    for (int j = 0; j < n; ++j) out[j] = (r / nrm) * g[j];
    return out;
}

double spectral_norm(const CMatrix& Z) {
    CMatrix G = Z.adjoint() * Z;
    return std::sqrt(std::max(0.0, hermitian_eigenvalues(HermitianForm(std::move(G))).back()));
}

} // namespace

int unit_cube_dims(const DomainSpec& spec) {
    using K = DomainSpec::Kind;
    switch (spec.kind()) {
        case K::Disk: return 2;
        case K::Ball:
        case K::CartanIV: return 2 * spec.n() + 1;
        case K::Polydisk: return 2 * spec.n();
        case K::CartanI:
        case K::CartanII:
        case K::CartanIII: return 2 * spec.dimension() + 1;
        case K::Product: {
            int d = 0;
            for (const DomainSpec& f : spec.factors()) d += unit_cube_dims(f);
            return d;
        }
    }
    throw ValidationError("invalid domain spec");
}

Point point_from_unit_cube(const DomainSpec& spec, const std::vector<double>& u,
                           double radius_cap) {
    using K = DomainSpec::Kind;
    if (!(radius_cap > 0.0 && radius_cap < 1.0))
        throw ValidationError("radius cap must lie in (0,1)");
    if (static_cast<int>(u.size()) != unit_cube_dims(spec))
        throw ValidationError("point_from_unit_cube: expected " +
                              std::to_string(unit_cube_dims(spec)) + " cube coordinates, got " +
                              std::to_string(u.size()));
    switch (spec.kind()) {
        case K::Disk: {
            double r = radius_cap * std::sqrt(u[0]);
            double th = 2.0 * std::numbers::pi * u[1];
            return {cx(r * std::cos(th), r * std::sin(th))};
        }
        case K::Ball: return ball_like_from_cube(spec.n(), u.data(), radius_cap);
        case K::CartanIV:
            // √2‖z‖ ≤ cap keeps both Lie-ball inequalities at slack ≥ 1−cap²
            return ball_like_from_cube(spec.n(), u.data(), radius_cap / std::sqrt(2.0));
        case K::Polydisk: {
            Point out(spec.n());
            for (int k = 0; k < spec.n(); ++k) {
                double r = radius_cap * std::sqrt(u[2 * k]);
                double th = 2.0 * std::numbers::pi * u[2 * k + 1];
                out[k] = cx(r * std::cos(th), r * std::sin(th));
            }
            return out;
        }
        case K::CartanI:
        case K::CartanII:
        case K::CartanIII: {
            const int d = spec.dimension();
            Point free(d);
            for (int j = 0; j < d; ++j) free[j] = gauss_pair(u[2 * j], u[2 * j + 1]);
            double sigma = spectral_norm(cartan_embed(spec, free));
            double scale = sigma > 1e-150 ? radius_cap * u[2 * d] / sigma : 0.0;
            for (cx& c : free) c *= scale;
            return free;
        }
        case K::Product: {
            Point out;
            out.reserve(spec.dimension());
            size_t off = 0;
            for (const DomainSpec& f : spec.factors()) {
                size_t cd = static_cast<size_t>(unit_cube_dims(f));
                std::vector<double> sub(u.begin() + off, u.begin() + off + cd);
                Point p = point_from_unit_cube(f, sub, radius_cap);
                out.insert(out.end(), p.begin(), p.end());
                off += cd;
            }
            return out;
        }
    }
    throw ValidationError("invalid domain spec");
}

std::vector<Point> sample_points(const DomainSpec& spec, int count, double radius_cap,
                                 std::uint64_t seed) {
    if (count < 1) throw ValidationError("sample_points: count must be >= 1");
    if (!(radius_cap > 0.0 && radius_cap < 1.0))
        throw ValidationError("sample_points: radius cap must lie in (0,1)");
    const int cd = unit_cube_dims(spec);
    const double floor = implied_margin(spec, radius_cap) - 1e-12;
    SplitMix64 rng(seed);
    std::vector<double> u(cd);
    std::vector<Point> out;
    out.reserve(count);
    long attempts = 0;
    const long attempt_cap = 1000L + 100L * count;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > attempt_cap)
            throw ValidationError("sample_points: rejection iteration cap exceeded");
        for (int j = 0; j < cd; ++j) u[j] = rng.uniform();
        Point p = point_from_unit_cube(spec, u, radius_cap);
        if (contains(spec, p).margin >= floor) out.push_back(p);
    }
    return out;
}

} // namespace blochlab
