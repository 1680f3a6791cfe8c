#include "doctest.h"

#include "cpkit/errors.hpp"
#include "cpkit/json_io.hpp"
#include "cpkit/linalg.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

namespace {

CMatrix diag(std::initializer_list<double> d) {
    CMatrix m = CMatrix::Zero(d.size(), d.size());
    int i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

CMatrix random_matrix(Rng& rng, int n) { return rng.ginibre(n, n); }

}  // namespace

TEST_SUITE("linalg") {
    TEST_CASE("kron examples") {
        CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);
        const CMatrix k = kron(ketbra(2, 0, 0), pauli(1));
        CHECK(max_abs(k.block(0, 0, 2, 2) - pauli(1)) == 0.0);
        CHECK(max_abs(k.block(2, 2, 2, 2)) == 0.0);
        CHECK(max_abs(k.block(0, 2, 2, 2)) == 0.0);
        CHECK(max_abs(kron(pauli(3), pauli(3)) - diag({1, -1, -1, 1})) == 0.0);
    }

    TEST_CASE("partial traces") {
        Rng rng(3);
        const CMatrix rs = rng.density_matrix(2), rb = rng.density_matrix(3);
        CHECK(max_abs(partial_trace_B(kron(rs, rb), {2, 3}) - rs) < 1e-12);
        CHECK(max_abs(partial_trace_S(kron(rs, rb), {2, 3}) - rb) < 1e-12);

        const double a2 = 0.3, b2 = 0.7;
        const CMatrix rho1 = a2 * ketbra(4, 0, 0) + b2 * ketbra(4, 3, 3);
        CHECK(max_abs(partial_trace_B(rho1, {2, 2}) - diag({a2, b2})) < 1e-15);

        CVector bell = CVector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        CHECK(max_abs(partial_trace_B(projector(bell), {2, 2}) - identity(2) / 2.0) < 1e-15);
        CHECK(max_abs(partial_trace_S(identity(4) / 4.0, {2, 2}) - identity(2) / 2.0) < 1e-15);

        CHECK_THROWS_AS(partial_trace_B(identity(5), {2, 2}), DimensionError);
    }

    TEST_CASE("swap moves the bath state into the system") {
        const CMatrix rs = diag({0.8, 0.2});
        CVector plus(2);
        plus << 1.0, 1.0;
        const CMatrix rb = projector(plus / std::sqrt(2.0));
        const CMatrix sw = swap_operator(2, 2);
        CHECK(max_abs(partial_trace_B(sw * kron(rs, rb) * sw.adjoint(), {2, 2}) - rb) < 1e-15);
    }

    TEST_CASE("partial trace invariants on random inputs") {
        Rng rng(7);
        for (int trial = 0; trial < 25; ++trial) {
            const BipartiteDims d{rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
            const CMatrix x = random_matrix(rng, d.total());
            CHECK(std::abs(partial_trace_B(x, d).trace() - x.trace()) <= 1e-10);
            const CMatrix a = random_matrix(rng, d.dS), b = random_matrix(rng, d.dB);
            CHECK(max_abs(partial_trace_B(kron(a, b), d) - a * b.trace()) <= 1e-10);
            const CMatrix us = rng.haar_unitary(d.dS), ub = rng.haar_unitary(d.dB);
            const CMatrix u = kron(us, ub);
            CHECK(max_abs(partial_trace_B(u * x * u.adjoint(), d) - us * partial_trace_B(x, d) * us.adjoint()) <= 1e-9);
        }
    }

    TEST_CASE("general partial trace and transpose agree with the bipartite forms") {
        Rng rng(11);
        const CMatrix x = random_matrix(rng, 12);
        CHECK(max_abs(partial_trace(x, {3, 4}, {0}) - partial_trace_B(x, {3, 4})) < 1e-12);
        CHECK(max_abs(partial_trace(x, {3, 4}, {1}) - partial_trace_S(x, {3, 4})) < 1e-12);
        const CMatrix pt = partial_transpose(partial_transpose(x, {3, 4}, 1), {3, 4}, 1);
        CHECK(max_abs(pt - x) < 1e-15);
        const CMatrix a = random_matrix(rng, 3), b = random_matrix(rng, 4);
        CHECK(max_abs(partial_transpose(kron(a, b), {3, 4}, 1) - kron(a, b.transpose())) < 1e-12);
        CHECK(max_abs(swap_factors(kron(a, b), 3, 4) - kron(b, a)) < 1e-12);
    }

    TEST_CASE("Hilbert-Schmidt inner product") {
        CHECK(hs_inner(identity(2), identity(2)) == cplx(2.0, 0.0));
        CHECK(std::abs(hs_inner(pauli(1), pauli(2))) == 0.0);
        Rng rng(5);
        const CMatrix a = random_matrix(rng, 2);
        CMatrix x = random_matrix(rng, 4);
        x -= kron(partial_trace_B(x, {2, 2}), identity(2) / 2.0);
        CHECK(max_abs(partial_trace_B(x, {2, 2})) < 1e-12);
        CHECK(std::abs(hs_inner(kron(a, identity(2)), x)) < 1e-12);
        const CMatrix y = random_matrix(rng, 4);
        CHECK(std::abs(hs_inner(x, y) - std::conj(hs_inner(y, x))) < 1e-12);
        CHECK(hs_inner(y, y).real() > 0.0);
    }

    TEST_CASE("eigh") {
        auto e = eigh(HermitianMatrix(diag({3, 1})));
        CHECK(e.values(0) == doctest::Approx(1.0));
        CHECK(e.values(1) == doctest::Approx(3.0));
        e = eigh(HermitianMatrix(pauli(1)));
        CHECK(e.values(0) == doctest::Approx(-1.0));
        CHECK(e.values(1) == doctest::Approx(1.0));
        CHECK_THROWS_AS(HermitianMatrix(ketbra(2, 0, 1)), DomainError);
    }

    TEST_CASE("eigh on the Choi matrix of the Choi-Effros projection") {
        // P projects onto span{E_ij : (i,j) not in {(0,1),(1,0)}}; Choi(P) = sum E_ij (x) E_ij over that set.
        CMatrix c = CMatrix::Zero(9, 9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!((i == 0 && j == 1) || (i == 1 && j == 0))) c += kron(ketbra(3, i, j), ketbra(3, i, j));
        const auto e = eigh(HermitianMatrix(c));
        CHECK(std::abs(e.values(0) - (1.0 - std::sqrt(2.0))) <= 1e-12);
        CVector expected = CVector::Zero(9);
        expected(0) = -1.0;
        expected(4) = -1.0;
        expected(8) = std::sqrt(2.0);
        expected /= expected.norm();
        CHECK(std::abs(std::abs(expected.dot(e.vectors.col(0))) - 1.0) <= 1e-12);
    }

    TEST_CASE("eigh reconstruction and unitarity") {
        Rng rng(17);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = rng.uniform_int(1, 12);
            const CMatrix h = rng.hermitian(n);
            const auto e = eigh(HermitianMatrix(h));
            const CMatrix rec = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
            CHECK(max_abs(rec - h) <= 1e-9 * std::max(1.0, max_abs(h)));
            CHECK(is_unitary(e.vectors, 1e-9));
            for (int k = 1; k < n; ++k) CHECK(e.values(k - 1) <= e.values(k));
        }
    }

    TEST_CASE("psd_project") {
        Rng rng(19);
        const CMatrix r = rng.density_matrix(3);
        CHECK(max_abs(psd_project(HermitianMatrix(r)).matrix() - r) < 1e-12);
        CHECK(max_abs(psd_project(HermitianMatrix(diag({1, -1}))).matrix() - diag({1, 0})) < 1e-15);
        CHECK(max_abs(psd_project(HermitianMatrix(pauli(1))).matrix() - (identity(2) + pauli(1)) / 2.0) < 1e-12);
        for (int trial = 0; trial < 20; ++trial) {
            const auto once = psd_project(HermitianMatrix(rng.hermitian(4)));
            const auto twice = psd_project(once);
            CHECK(max_abs(once.matrix() - twice.matrix()) <= 1e-10);
            CHECK(min_eigenvalue(once.matrix()) >= -1e-12);
        }
    }

    TEST_CASE("psd_project is the nearest PSD matrix") {
        Rng rng(23);
        const CMatrix h = rng.hermitian(3);
        const CMatrix p = psd_project(HermitianMatrix(h)).matrix();
        const double best = hs_norm(h - p);
        for (int trial = 0; trial < 50; ++trial) {
            const CMatrix q = rng.density_matrix(3) * (3.0 * rng.uniform());
            CHECK(hs_norm(h - q) >= best - 1e-12);
        }
    }

    TEST_CASE("orthonormalize") {
        auto o = orthonormalize({identity(2), 2.0 * identity(2)});
        REQUIRE(o.size() == 1);
        CHECK(max_abs(o[0] - identity(2) / std::sqrt(2.0)) < 1e-15);
        o = orthonormalize({identity(2), pauli(3)});
        REQUIRE(o.size() == 2);
        CHECK(max_abs(o[1] - pauli(3) / std::sqrt(2.0)) < 1e-15);
        CHECK(orthonormalize({}).empty());

        std::vector<CMatrix> carteret{kron(identity(2), identity(2))};
        for (int k = 1; k <= 3; ++k) carteret.push_back(kron(identity(2), identity(2)) + 0.2 * kron(pauli(k), pauli(k)));
        o = orthonormalize(carteret);
        REQUIRE(o.size() == 4);
        for (size_t i = 0; i < o.size(); ++i)
            for (size_t j = 0; j < o.size(); ++j)
                CHECK(std::abs(hs_inner(o[i], o[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

    TEST_CASE("hvec is an isometry on Hermitian matrices") {
        Rng rng(29);
        const CMatrix a = rng.hermitian(3), b = rng.hermitian(3);
        CHECK(std::abs(hvec(a).dot(hvec(b)) - hs_inner(a, b).real()) < 1e-12);
        CHECK(max_abs(hmat(hvec(a), 3) - a) < 1e-14);
        const auto basis = hermitian_basis(3);
        CHECK(basis.size() == 9);
        const auto comp = hermitian_complement(orthonormalize({identity(3)}), 3);
        CHECK(comp.size() == 8);
        for (const auto& c : comp) CHECK(std::abs(c.trace()) < 1e-12);
    }

    TEST_CASE("expm_hermitian and unitaries") {
        const CMatrix u = expm_hermitian(pauli(3), M_PI / 2.0);
        CHECK(is_unitary(u));
        CHECK(std::abs(u(0, 0) - cplx(0.0, -1.0)) < 1e-14);
        Rng rng(31);
        CHECK(is_unitary(rng.haar_unitary(6)));
        CHECK(is_unitary(rng.local_unitary({2, 3})));
        CHECK(!is_unitary(2.0 * identity(2)));
    }

    TEST_CASE("matrix JSON round trip") {
        Rng rng(37);
        const CMatrix m = rng.ginibre(2, 3);
        const CMatrix back = matrix_from_json(matrix_to_json(m));
        CHECK(max_abs(back - m) == 0.0);
        const json j = json::parse(R"({"rows": 1, "cols": 2, "data": [1.5, [0, 2]]})");
        const CMatrix r = matrix_from_json(j);
        CHECK(r(0, 0) == cplx(1.5, 0.0));
        CHECK(r(0, 1) == cplx(0.0, 2.0));
        const json bad = json::parse(R"({"rows": 1, "cols": 2, "data": [1.5]})");
        CHECK_THROWS_AS(matrix_from_json(bad), ParseError);
        const json nan = json::parse(R"({"rows": 1, "cols": 1, "data": ["x"]})");
        CHECK_THROWS_AS(matrix_from_json(nan, "$.m"), ParseError);
    }
}
