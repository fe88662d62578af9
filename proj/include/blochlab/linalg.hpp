#pragma once

// Dense complex linear algebra for small Hermitian problems.
//
// Everything here is sized for metric matrices of bounded symmetric domains
// (dimension ≤ a few dozen), so the solvers favour robustness over asymptotic
// cleverness: cyclic Jacobi for Hermitian eigenvalues, Cholesky for positive
// definite solves and for reducing the pencil  G u = λ H u  to an ordinary
// Hermitian eigenproblem  L⁻¹ G L⁻†,  H = L L†.
//
// Convention used throughout: a HermitianForm stores the matrix M of a
// sesquilinear form in the  u†Mu  sense, i.e. quad(u) = u†Mu is the real
// quadratic value and form(u,v) = v†Mu is linear in u, conjugate linear in v.

#include <complex>
#include <functional>
#include <vector>

#include "blochlab/errors.hpp"

namespace blochlab {

using cx = std::complex<double>;
using CVec = std::vector<cx>;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;
    CVec operator*(const CVec& v) const;

    friend CMatrix operator*(cx s, CMatrix m);

    cx trace() const;
    double frobenius() const;
    double max_abs() const;   // largest entry modulus

private:
    int rows_ = 0, cols_ = 0;
    CVec a_;
};

// Hermitian matrix wrapper; construction validates M = M† entrywise within
// 1e-12 absolute and symmetrizes exactly afterwards.
class HermitianForm {
public:
    explicit HermitianForm(CMatrix m);

    int dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }

    double quad(const CVec& u) const;             // u†Mu
    cx form(const CVec& u, const CVec& v) const;  // v†Mu

    static constexpr double kHermitianTol = 1e-12;

private:
    CMatrix m_;
};

struct PdResult {
    bool positive;   // all eigenvalues strictly positive
    double margin;   // smallest eigenvalue
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // unitary, columns matched to values
};

// Cyclic Jacobi on the Hermitian matrix; off-diagonal tolerance 1e-13
// (relative to the initial Frobenius norm), at most 100 sweeps.
EigenSystem hermitian_eigensystem(const HermitianForm& h);
std::vector<double> hermitian_eigenvalues(const HermitianForm& h);

PdResult is_positive_definite(const HermitianForm& h);

// sup_u  u†Gu / u†Hu  over u ≠ 0.  Requires H positive definite (Cholesky
// must succeed); G is expected positive semidefinite but any Hermitian G is
// reduced correctly.
double max_generalized_eigenvalue(const HermitianForm& g, const HermitianForm& h);

// Solve H x = b for positive definite H via Cholesky.
CVec hermitian_solve(const HermitianForm& h, const CVec& b);

CMatrix hermitian_inverse(const HermitianForm& h);

// gᵀ H⁻¹ ḡ  =  sup_u |gᵀu|² / u†Hu,  attained at u = H⁻¹ḡ.  Real and
// nonnegative for positive definite H.
double hermitian_quadratic_solve(const HermitianForm& h, const CVec& g);

// Mixed Wirtinger Hessian  T_ij = ∂²F/∂z_i∂z̄_j  of a real-valued F, by
// central differences with one Richardson extrapolation level.  The quadratic
// value along a direction u is recovered from
//   4 Σ T_ij u_i ū_j = d²/dt² F(z+tu) + d²/dt² F(z+itu)
// and the matrix is filled in by polarization; result is Hermitian exactly.
CMatrix complex_hessian(const std::function<double(const CVec&)>& f,
                        const CVec& z, double step = 1e-4);

} // namespace blochlab
