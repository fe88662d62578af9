#include "doctest.h"

#include <cmath>

#include "blochlab/linalg.hpp"
#include "test_util.hpp"

using namespace blochlab;
using testu::Rng;

namespace {

HermitianForm diag2(double a, double b) {
    CMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return HermitianForm(std::move(m));
}

} // namespace

TEST_CASE("hermitian form validation") {
    CMatrix bad(2, 2);
    bad(0, 1) = cx(0.5, 0.0);
    bad(1, 0) = cx(0.5, 1e-6);          // conj mismatch far above tolerance
    CHECK_THROWS_AS(HermitianForm{bad}, ValidationError);

    CMatrix ok(2, 2);
    ok(0, 0) = 1.0;
    ok(1, 1) = 2.0;
    ok(0, 1) = cx(0.3, 0.4);
    ok(1, 0) = std::conj(ok(0, 1)) + cx(0.0, 5e-13);  // inside tolerance
    CHECK_NOTHROW(HermitianForm{ok});

    CMatrix rect(2, 3);
    CHECK_THROWS_AS(HermitianForm{rect}, ValidationError);
}

TEST_CASE("positive definiteness with smallest-eigenvalue margin") {
    auto id = HermitianForm(CMatrix::identity(2));
    auto r1 = is_positive_definite(id);
    CHECK(r1.positive);
    CHECK(r1.margin == doctest::Approx(1.0).epsilon(1e-12));

    // I - ZZ* for Z = 0.5 I is 0.75 I; margin is the eigenvalue itself.
    CMatrix z = 0.5 * CMatrix::identity(2);
    CMatrix m = CMatrix::identity(2) - z * z.adjoint();
    auto r2 = is_positive_definite(HermitianForm(m));
    CHECK(r2.positive);
    CHECK(r2.margin == doctest::Approx(0.75).epsilon(1e-12));

    auto r3 = is_positive_definite(diag2(1.0, -0.1));
    CHECK_FALSE(r3.positive);
    CHECK(r3.margin == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("jacobi eigensystem: exactness on small cases") {
    // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
    CMatrix m(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(0, 1) = cx(0.0, 1.0);
    m(1, 0) = cx(0.0, -1.0);
    auto ev = hermitian_eigenvalues(HermitianForm(m));
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-13));

    auto evd = hermitian_eigenvalues(diag2(-2.5, 4.0));
    CHECK(evd[0] == doctest::Approx(-2.5));
    CHECK(evd[1] == doctest::Approx(4.0));
}

TEST_CASE("jacobi eigensystem: residual and unitarity on random matrices") {
    Rng rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + trial % 7;
        CMatrix a = testu::random_hermitian(rng, n);
        auto es = hermitian_eigensystem(HermitianForm(a));

        CHECK(std::is_sorted(es.values.begin(), es.values.end()));

        // A V = V Λ column by column.
        for (int k = 0; k < n; ++k) {
            CVec v(n);
            for (int i = 0; i < n; ++i) v[i] = es.vectors(i, k);
            CVec av = a * v;
            double resid = 0.0;
            for (int i = 0; i < n; ++i) resid += std::norm(av[i] - es.values[k] * v[i]);
            CHECK(std::sqrt(resid) < 1e-11 * std::max(1.0, a.frobenius()));
        }
        CMatrix vtv = es.vectors.adjoint() * es.vectors;
        CHECK((vtv - CMatrix::identity(n)).max_abs() < 1e-12);

        // Trace is rotation invariant.
        double tr = 0.0;
        for (double l : es.values) tr += l;
        CHECK(tr == doctest::Approx(a.trace().real()).epsilon(1e-11));
    }
}

TEST_CASE("generalized pencil maximum") {
    CHECK(max_generalized_eigenvalue(diag2(1.0, 4.0), diag2(1.0, 1.0)) ==
          doctest::Approx(4.0).epsilon(1e-13));

    // G = H gives ratio 1 regardless of H.
    Rng rng(77);
    CMatrix h = testu::random_hpd(rng, 4);
    CHECK(max_generalized_eigenvalue(HermitianForm(h), HermitianForm(h)) ==
          doctest::Approx(1.0).epsilon(1e-11));

    // Pencil value dominates every Rayleigh quotient, and power iteration on
    // H⁻¹G (an independent route) reproduces it for PSD G.
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 5;
        HermitianForm g(testu::random_hpd(rng, n, 0.05));
        HermitianForm hpd(testu::random_hpd(rng, n));
        const double top = max_generalized_eigenvalue(g, hpd);
        for (int k = 0; k < 200; ++k) {
            CVec u = testu::random_cvec(rng, n);
            CHECK(g.quad(u) / hpd.quad(u) <= top + 1e-9 * std::max(1.0, std::abs(top)));
        }
        CVec x = testu::random_cvec(rng, n);
        for (int it = 0; it < 400; ++it) {
            x = hermitian_solve(hpd, g.matrix() * x);
            double nrm = 0.0;
            for (const auto& e : x) nrm += std::norm(e);
            nrm = std::sqrt(nrm);
            for (auto& e : x) e /= nrm;
        }
        const double rayleigh = g.quad(x) / hpd.quad(x);
        CHECK(rayleigh == doctest::Approx(top).epsilon(1e-7));
    }

    CHECK_THROWS_AS(max_generalized_eigenvalue(diag2(1.0, 1.0), diag2(1.0, -1.0)),
                    ValidationError);
    CHECK_THROWS_AS(max_generalized_eigenvalue(diag2(1.0, 1.0), diag2(1.0, 0.0)),
                    ValidationError);
}

TEST_CASE("hermitian quadratic solve: frozen values") {
    CHECK(hermitian_quadratic_solve(diag2(2.0, 2.0), {1.0, 1.0}) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hermitian_quadratic_solve(diag2(4.0, 1.0), {2.0, 0.0}) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian quadratic solve is the supremum of |g^T u|^2 / u^†Hu") {
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 5;
        HermitianForm h(testu::random_hpd(rng, n));
        CVec g = testu::random_cvec(rng, n);
        const double val = hermitian_quadratic_solve(h, g);
        CHECK(val >= 0.0);

        // No direction beats it...
        for (int k = 0; k < 100; ++k) {
            CVec u = testu::random_cvec(rng, n);
            cx gu = 0.0;
            for (int i = 0; i < n; ++i) gu += g[i] * u[i];
            CHECK(std::norm(gu) / h.quad(u) <= val * (1.0 + 1e-10) + 1e-14);
        }
        // ...and the maximizer u = H⁻¹ḡ attains it.
        CVec gbar(n);
        for (int i = 0; i < n; ++i) gbar[i] = std::conj(g[i]);
        CVec ustar = hermitian_solve(h, gbar);
        cx gu = 0.0;
        for (int i = 0; i < n; ++i) gu += g[i] * ustar[i];
        const double attained = std::norm(gu) / h.quad(ustar);
        CHECK(attained == doctest::Approx(val).epsilon(1e-10));
    }
}

TEST_CASE("hermitian solve and inverse agree") {
    Rng rng(99);
    HermitianForm h(testu::random_hpd(rng, 5));
    CMatrix inv = hermitian_inverse(h);
    CMatrix prod = h.matrix() * inv;
    CHECK((prod - CMatrix::identity(5)).max_abs() < 1e-11);
}

TEST_CASE("complex hessian: squared norm has identity hessian") {
    auto f = [](const CVec& z) {
        double s = 0.0;
        for (const auto& v : z) s += std::norm(v);
        return s;
    };
    for (int n : {1, 2, 3}) {
        CVec z(n);
        for (int k = 0; k < n; ++k) z[k] = cx(0.1 * (k + 1), -0.05 * k);
        CMatrix t = complex_hessian(f, z);
        CHECK((t - CMatrix::identity(n)).max_abs() < 1e-8);
    }
}

TEST_CASE("complex hessian: quartic modulus") {
    // d²/dz dz̄ of |z|⁴ is 4|z|²; at z = 0.5 this is 1.
    auto f = [](const CVec& z) { return std::norm(z[0]) * std::norm(z[0]); };
    CMatrix t = complex_hessian(f, {cx(0.5, 0.0)});
    CHECK(t(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(t(0, 0).imag()) < 1e-10);
}

TEST_CASE("complex hessian: log potential at the origin") {
    // A(z) = |Σz_j²|² + 1 − 2‖z‖²;  −log A has Hessian 2I at z = 0.
    const int n = 5;
    auto f = [](const CVec& z) {
        cx q = 0.0;
        double s = 0.0;
        for (const auto& v : z) {
            q += v * v;
            s += std::norm(v);
        }
        return -std::log(std::norm(q) + 1.0 - 2.0 * s);
    };
    CMatrix t = complex_hessian(f, CVec(n, 0.0));
    CHECK((t - (cx(2.0) * CMatrix::identity(n))).max_abs() < 1e-7);
}

TEST_CASE("complex hessian is hermitian by construction") {
    Rng rng(31);
    auto f = [](const CVec& z) {
        // A smooth non-holomorphic potential mixing the coordinates.
        double s = 0.0;
        for (size_t i = 0; i < z.size(); ++i)
            for (size_t j = 0; j < z.size(); ++j)
                s += std::norm(z[i] + 0.3 * z[j]) + 0.1 * (z[i] * std::conj(z[j])).real();
        return std::exp(0.05 * s);
    };
    CVec z = testu::random_cvec(rng, 3, 0.4);
    CMatrix t = complex_hessian(f, z);
    CHECK((t - t.adjoint()).max_abs() == 0.0);
    CHECK_NOTHROW(HermitianForm{t});
}
