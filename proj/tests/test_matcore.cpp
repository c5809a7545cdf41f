#include <catch2/catch_amalgamated.hpp>

#include "qid/linalg.hpp"
#include "qid/matrix.hpp"
#include "qid/rng.hpp"
#include "qid/states.hpp"

using namespace qid;
using Catch::Approx;

namespace {

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
    ComplexMatrix a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
    return a.hermitian_part();
}

ComplexMatrix reconstruct(const HermitianEigen& es) {
    const std::size_t n = es.eigenvalues.size();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += es.eigenvalues[k] * es.eigenvectors(i, k) *
                           std::conj(es.eigenvectors(j, k));
    return r;
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("herm_eig on simple matrices", "[matcore]") {
    SECTION("diagonal input sorts ascending with permuted identity eigenvectors") {
        auto es = herm_eig(diag2(3.0, 1.0));
        REQUIRE(es.eigenvalues[0] == Approx(1.0).margin(1e-14));
        REQUIRE(es.eigenvalues[1] == Approx(3.0).margin(1e-14));
        CHECK(std::abs(es.eigenvectors(1, 0)) == Approx(1.0).margin(1e-14));
        CHECK(std::abs(es.eigenvectors(0, 1)) == Approx(1.0).margin(1e-14));
        CHECK(std::abs(es.eigenvectors(0, 0)) == Approx(0.0).margin(1e-14));
    }
    SECTION("identity") {
        auto es = herm_eig(ComplexMatrix::identity(4));
        for (double lam : es.eigenvalues) CHECK(lam == Approx(1.0).margin(1e-14));
    }
    SECTION("pauli-x") {
        ComplexMatrix sx(2, 2);
        sx(0, 1) = 1.0;
        sx(1, 0) = 1.0;
        auto es = herm_eig(sx);
        REQUIRE(es.eigenvalues[0] == Approx(-1.0).margin(1e-12));
        REQUIRE(es.eigenvalues[1] == Approx(1.0).margin(1e-12));
        // eigenvectors are (|0> -+ |1>)/sqrt(2) up to phase
        const double s = 1.0 / std::sqrt(2.0);
        const cplx minus = std::conj(s * es.eigenvectors(0, 0)) - std::conj(s * es.eigenvectors(1, 0));
        const cplx plus = std::conj(s * es.eigenvectors(0, 1)) + std::conj(s * es.eigenvectors(1, 1));
        CHECK(std::abs(minus) == Approx(1.0).margin(1e-12));
        CHECK(std::abs(plus) == Approx(1.0).margin(1e-12));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(herm_eig(ComplexMatrix(2, 3)), NotSquare);
        ComplexMatrix bad(2, 2);
        bad(0, 1) = 1.0; // A(1,0) stays 0 -> defect 1
        try {
            herm_eig(bad);
            FAIL("expected NotHermitian");
        } catch (const NotHermitian& e) {
            CHECK(e.max_asymmetry == Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices", "[matcore]") {
    Rng rng(20240611);
    for (std::size_t d = 2; d <= 8; ++d) {
        for (int rep = 0; rep < 25; ++rep) {
            ComplexMatrix a = random_hermitian(d, rng);
            auto es = herm_eig(a);
            REQUIRE(std::is_sorted(es.eigenvalues.begin(), es.eigenvalues.end()));
            CHECK(max_abs_diff(reconstruct(es), a) < 1e-8);
            CHECK(max_abs_diff(es.eigenvectors.adjoint() * es.eigenvectors,
                               ComplexMatrix::identity(d)) < 1e-10);
        }
    }
}

TEST_CASE("mat_sqrt_psd", "[matcore]") {
    SECTION("diagonal") {
        auto r = mat_sqrt_psd(diag2(4.0, 9.0));
        CHECK(max_abs_diff(r, diag2(2.0, 3.0)) < 1e-12);
    }
    SECTION("identity") {
        CHECK(max_abs_diff(mat_sqrt_psd(ComplexMatrix::identity(5)),
                           ComplexMatrix::identity(5)) < 1e-12);
    }
    SECTION("projector scaling: sqrt(c P) = sqrt(c) P") {
        ComplexMatrix plus(2, 2); // |+><+|
        plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
        CHECK(max_abs_diff(mat_sqrt_psd(plus), plus) < 1e-12);
        CHECK(max_abs_diff(mat_sqrt_psd(plus * 0.5), plus * (1.0 / std::sqrt(2.0))) < 1e-12);
    }
    SECTION("negative eigenvalue rejected, tiny negatives clamped") {
        CHECK_THROWS_AS(mat_sqrt_psd(diag2(1.0, -1.0)), NegativeEigenvalue);
        auto r = mat_sqrt_psd(diag2(1.0, -1e-10));
        CHECK(r(1, 1).real() == Approx(0.0).margin(1e-12));
    }
    SECTION("square of the root recovers random PSD input") {
        Rng rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            const std::size_t d = 2 + rep % 5;
            ComplexMatrix g(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
            ComplexMatrix a = (g * g.adjoint()).hermitian_part();
            ComplexMatrix r = mat_sqrt_psd(a);
            CHECK(r.herm_defect() < 1e-12);
            CHECK(max_abs_diff(r * r, a) < 1e-8);
        }
    }
}

TEST_CASE("trace_norm", "[matcore]") {
    CHECK(trace_norm(diag2(1.0, -1.0)) == Approx(2.0).margin(1e-14));
    CHECK(trace_norm(ComplexMatrix(3, 3)) == Approx(0.0).margin(1e-14));

    SECTION("|0><0| - |+><+| has trace norm sqrt(2)") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 0.5;
        m(0, 1) = -0.5;
        m(1, 0) = -0.5;
        m(1, 1) = -0.5;
        CHECK(trace_norm(m) == Approx(std::sqrt(2.0)).margin(1e-12));
    }
    SECTION("dominates |trace|") {
        Rng rng(77);
        for (int rep = 0; rep < 200; ++rep) {
            ComplexMatrix a = random_hermitian(2 + rep % 4, rng);
            CHECK(trace_norm(a) >= std::abs(a.trace().real()) - 1e-10);
        }
    }
    SECTION("non-Hermitian rejected") {
        ComplexMatrix bad(2, 2);
        bad(0, 1) = 1.0;
        CHECK_THROWS_AS(trace_norm(bad), NotHermitian);
    }
}

TEST_CASE("kron", "[matcore]") {
    CHECK(max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(4)) == 0.0);

    ComplexMatrix d12 = diag2(1.0, 2.0), d34 = diag2(3.0, 4.0);
    ComplexMatrix k = kron(d12, d34);
    const double expect[] = {3.0, 4.0, 6.0, 8.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(k(i, i).real() == Approx(expect[i]));

    SECTION("|0><0| (x) sigma embeds sigma in the top-left block") {
        ComplexMatrix p(2, 2);
        p(0, 0) = 1.0;
        Rng rng(3);
        ComplexMatrix sigma = random_hermitian(2, rng);
        ComplexMatrix e = kron(p, sigma);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(e(i, j) == sigma(i, j));
                CHECK(std::abs(e(i + 2, j + 2)) == 0.0);
            }
    }
}

TEST_CASE("partial_trace", "[matcore]") {
    Rng rng(11);
    SECTION("product states reduce to the factors") {
        for (int rep = 0; rep < 30; ++rep) {
            const std::size_t ds = 2 + rep % 3, da = 2 + (rep / 3) % 3;
            ComplexMatrix rho = random_hermitian(ds, rng);
            rho *= cplx(1.0 / rho.trace().real());
            ComplexMatrix sig = (ComplexMatrix::identity(da) + random_hermitian(da, rng) * 0.1)
                                    .hermitian_part();
            sig *= cplx(1.0 / sig.trace().real());
            ComplexMatrix joint = kron(rho, sig);
            CHECK(max_abs_diff(partial_trace(joint, ds, da, Subsystem::system), rho) < 1e-12);
            CHECK(max_abs_diff(partial_trace(joint, ds, da, Subsystem::ancilla), sig) < 1e-12);
            // trace preserved
            CHECK(partial_trace(joint, ds, da, Subsystem::system).trace().real() ==
                  Approx(joint.trace().real()).margin(1e-12));
        }
    }
    SECTION("Bell state reduces to I/2") {
        ComplexMatrix bell(4, 4);
        const std::size_t idx[] = {0, 3}; // (|00> + |11>)/sqrt(2)
        for (std::size_t a : idx)
            for (std::size_t b : idx) bell(a, b) = 0.5;
        ComplexMatrix red = partial_trace(bell, 2, 2, Subsystem::system);
        CHECK(max_abs_diff(red, ComplexMatrix::identity(2) * 0.5) < 1e-14);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(partial_trace(ComplexMatrix(5, 5), 2, 2, Subsystem::system),
                        DimensionMismatch);
    }
}

TEST_CASE("complete_isometry", "[matcore]") {
    SECTION("single basis column completes to the identity") {
        ComplexMatrix v(2, 1);
        v(0, 0) = 1.0;
        ComplexMatrix u = complete_isometry(v);
        CHECK(max_abs_diff(u, ComplexMatrix::identity(2)) == 0.0);
    }
    SECTION("a full unitary is returned unchanged") {
        Rng rng(8);
        ComplexMatrix w = random_unitary(4, rng);
        CHECK(max_abs_diff(complete_isometry(w), w) == 0.0);
    }
    SECTION("random isometries: exact column copy, unitary completion") {
        Rng rng(9);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 2 + rep % 6;
            const std::size_t m = 1 + rng.uniform_index(n);
            ComplexMatrix full = random_unitary(n, rng);
            ComplexMatrix v(n, m);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j) v(i, j) = full(i, j);
            ComplexMatrix u = complete_isometry(v);
            CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(n)) < 1e-9);
            double col_diff = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    col_diff = std::max(col_diff, std::abs(u(i, j) - v(i, j)));
            CHECK(col_diff == 0.0);
        }
    }
    SECTION("CNOT-style columns") {
        ComplexMatrix v(4, 2);
        v(0, 0) = 1.0; // |0>|0> -> |0>|0>
        v(3, 1) = 1.0; // |1>|0> -> |1>|1>
        ComplexMatrix u = complete_isometry(v);
        CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(4)) < 1e-9);
        for (std::size_t r = 0; r < 4; ++r) {
            CHECK(u(r, 0) == v(r, 0));
            CHECK(u(r, 1) == v(r, 1));
        }
    }
    SECTION("non-orthonormal columns rejected") {
        ComplexMatrix v(2, 2);
        v(0, 0) = 1.0;
        v(0, 1) = 1.0;
        CHECK_THROWS_AS(complete_isometry(v), ColumnsNotOrthonormal);
    }
}
