#include "blochlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blochlab {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

CMatrix CMatrix::conjugate() const {
    CMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(i, j) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw ValidationError("matrix product: shape mismatch");
    CMatrix r(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const cx aik = (*this)(i, k);
            if (aik == cx(0.0)) continue;
            for (int j = 0; j < rhs.cols_; ++j) r(i, j) += aik * rhs(k, j);
        }
    return r;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ValidationError("matrix sum: shape mismatch");
    CMatrix r(rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + rhs.a_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ValidationError("matrix difference: shape mismatch");
    CMatrix r(rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - rhs.a_[k];
    return r;
}

CVec CMatrix::operator*(const CVec& v) const {
    if (cols_ != static_cast<int>(v.size())) throw ValidationError("matrix-vector product: shape mismatch");
    CVec r(rows_);
    for (int i = 0; i < rows_; ++i) {
        cx acc = 0.0;
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

CMatrix operator*(cx s, CMatrix m) {
    for (auto& e : m.a_) e *= s;
    return m;
}

cx CMatrix::trace() const {
    cx t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& e : a_) s += std::norm(e);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : a_) m = std::max(m, std::abs(e));
    return m;
}

HermitianForm::HermitianForm(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw ValidationError("hermitian form: matrix must be square and nonempty");
    const int n = m_.rows();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const cx d = m_(i, j) - std::conj(m_(j, i));
            if (std::abs(d) > kHermitianTol)
                throw ValidationError("hermitian form: matrix is not Hermitian within 1e-12");
        }
    // Exact symmetrization so downstream algebra sees M = M† to the bit.
    for (int i = 0; i < n; ++i) {
        m_(i, i) = m_(i, i).real();
        for (int j = i + 1; j < n; ++j) {
            const cx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
            m_(i, j) = avg;
            m_(j, i) = std::conj(avg);
        }
    }
}

double HermitianForm::quad(const CVec& u) const {
    if (static_cast<int>(u.size()) != dim()) throw ValidationError("quad: dimension mismatch");
    cx acc = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) acc += std::conj(u[i]) * m_(i, j) * u[j];
    return acc.real();
}

cx HermitianForm::form(const CVec& u, const CVec& v) const {
    if (static_cast<int>(u.size()) != dim() || static_cast<int>(v.size()) != dim())
        throw ValidationError("form: dimension mismatch");
    cx acc = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) acc += std::conj(v[i]) * m_(i, j) * u[j];
    return acc;
}

namespace {

constexpr double kJacobiTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

double off_norm(const CMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

} // namespace

EigenSystem hermitian_eigensystem(const HermitianForm& h) {
    const int n = h.dim();
    CMatrix a = h.matrix();
    CMatrix v = CMatrix::identity(n);
    const double stop = kJacobiTol * std::max(1.0, a.frobenius());

    for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double mod = std::abs(apq);
                if (mod == 0.0) continue;
                // Phase peels the pivot to a real entry, then a classical
                // real rotation annihilates it:  tan 2θ = 2|a_pq|/(a_qq-a_pp).
                const cx phase = apq / mod;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mod);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx sp = s * phase;           // column-side coefficient
                for (int i = 0; i < n; ++i) {      // A ← A U
                    const cx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(sp) * aiq;
                    a(i, q) = sp * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {      // A ← U† A
                    const cx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = std::conj(sp) * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {      // V ← V U
                    const cx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(sp) * viq;
                    v(i, q) = sp * vip + c * viq;
                }
            }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
    }
    return es;
}

std::vector<double> hermitian_eigenvalues(const HermitianForm& h) {
    return hermitian_eigensystem(h).values;
}

PdResult is_positive_definite(const HermitianForm& h) {
    const double lambda_min = hermitian_eigenvalues(h).front();
    return {lambda_min > 0.0, lambda_min};
}

namespace {

// Lower Cholesky factor of a positive definite Hermitian matrix; throws if a
// pivot fails (singular or indefinite input).
CMatrix cholesky(const CMatrix& m) {
    const int n = m.rows();
    CMatrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw ValidationError("cholesky: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            cx s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

CVec forward_solve(const CMatrix& l, CVec b) {
    const int n = l.rows();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
        b[i] /= l(i, i);
    }
    return b;
}

CVec backward_solve_adjoint(const CMatrix& l, CVec y) {
    const int n = l.rows();
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) y[i] -= std::conj(l(k, i)) * y[k];
        y[i] /= l(i, i).real();
    }
    return y;
}

} // namespace

double max_generalized_eigenvalue(const HermitianForm& g, const HermitianForm& h) {
    if (g.dim() != h.dim()) throw ValidationError("pencil: dimension mismatch");
    const int n = h.dim();
    const CMatrix l = cholesky(h.matrix());
    // C = L⁻¹ G L⁻† shares the pencil spectrum; build it column by column.
    CMatrix c(n, n);
    for (int j = 0; j < n; ++j) {
        CVec col(n);
        for (int i = 0; i < n; ++i) col[i] = g.matrix()(i, j);
        col = forward_solve(l, std::move(col));   // columns of L⁻¹ G
        for (int i = 0; i < n; ++i) c(i, j) = col[i];
    }
    // Right-multiplying by L⁻† is a forward solve on rows: C ← (L⁻¹ (L⁻¹ G)†)†.
    CMatrix cadj = c.adjoint();
    for (int j = 0; j < n; ++j) {
        CVec col(n);
        for (int i = 0; i < n; ++i) col[i] = cadj(i, j);
        col = forward_solve(l, std::move(col));
        for (int i = 0; i < n; ++i) cadj(i, j) = col[i];
    }
    CMatrix reduced = cadj.adjoint();
    // Symmetrize away the last-bit asymmetry before validating.
    CMatrix sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sym(i, j) = 0.5 * (reduced(i, j) + std::conj(reduced(j, i)));
    return hermitian_eigenvalues(HermitianForm(std::move(sym))).back();
}

CVec hermitian_solve(const HermitianForm& h, const CVec& b) {
    if (static_cast<int>(b.size()) != h.dim()) throw ValidationError("solve: dimension mismatch");
    const CMatrix l = cholesky(h.matrix());
    return backward_solve_adjoint(l, forward_solve(l, b));
}

CMatrix hermitian_inverse(const HermitianForm& h) {
    const int n = h.dim();
    CMatrix inv(n, n);
    for (int j = 0; j < n; ++j) {
        CVec e(n, 0.0);
        e[j] = 1.0;
        const CVec col = hermitian_solve(h, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double hermitian_quadratic_solve(const HermitianForm& h, const CVec& g) {
    if (static_cast<int>(g.size()) != h.dim()) throw ValidationError("quadratic solve: dimension mismatch");
    CVec gbar(g.size());
    for (size_t i = 0; i < g.size(); ++i) gbar[i] = std::conj(g[i]);
    const CVec x = hermitian_solve(h, gbar);      // x = H⁻¹ḡ, the maximizer
    cx acc = 0.0;
    for (size_t i = 0; i < g.size(); ++i) acc += g[i] * x[i];
    return acc.real();
}

CMatrix complex_hessian(const std::function<double(const CVec&)>& f,
                        const CVec& z, double step) {
    if (z.empty()) throw ValidationError("complex hessian: empty point");
    if (!(step > 0.0)) throw ValidationError("complex hessian: step must be positive");
    const int n = static_cast<int>(z.size());
    const double f0 = f(z);

    // Second difference of F along the complex direction u at scale h.
    auto second_diff = [&](const CVec& u, double h) {
        CVec zp = z, zm = z;
        for (int k = 0; k < n; ++k) {
            zp[k] += h * u[k];
            zm[k] -= h * u[k];
        }
        return (f(zp) - 2.0 * f0 + f(zm)) / (h * h);
    };
    // Quadratic value Q(u) = Σ T_ij u_i ū_j with one Richardson level.
    auto quad = [&](const CVec& u) {
        CVec iu(u.size());
        for (size_t k = 0; k < u.size(); ++k) iu[k] = cx(0.0, 1.0) * u[k];
        const double qh = 0.25 * (second_diff(u, step) + second_diff(iu, step));
        const double qh2 = 0.25 * (second_diff(u, step / 2) + second_diff(iu, step / 2));
        return (4.0 * qh2 - qh) / 3.0;
    };

    CMatrix t(n, n);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) {
        CVec u(n, 0.0);
        u[i] = 1.0;
        diag[i] = quad(u);
        t(i, i) = diag[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            CVec u1(n, 0.0), u2(n, 0.0);
            u1[i] = 1.0; u1[j] = 1.0;                // Q(e_i + e_j)
            u2[i] = 1.0; u2[j] = cx(0.0, 1.0);       // Q(e_i + i e_j)
            const double d = diag[i] + diag[j];
            const cx tij = 0.5 * cx(quad(u1) - d, quad(u2) - d);
            t(i, j) = tij;
            t(j, i) = std::conj(tij);
        }
    return t;
}

} // namespace blochlab
