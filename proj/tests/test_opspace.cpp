#include "doctest.h"

#include "cpkit/errors.hpp"
#include "cpkit/gallery.hpp"
#include "cpkit/opspace.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

namespace {

// Projection superoperator onto span(onb) as a matrix acting on row-major vectorizations.
CMatrix projection_matrix(const std::vector<CMatrix>& onb, int n) {
    CMatrix p = CMatrix::Zero(n * n, n * n);
    for (const auto& b : onb) {
        const CVector v = Eigen::Map<const CVector>(b.data(), n * n);
        p += v * v.adjoint();
    }
    return p;
}

OperatorSubspace random_state_subspace(Rng& rng, BipartiteDims d, int count) {
    std::vector<CMatrix> gens;
    for (int k = 0; k < count; ++k) gens.push_back(rng.density_matrix(d.total(), rng.uniform_int(1, d.total())));
    return build_subspace(gens, d);
}

}  // namespace

TEST_SUITE("opspace") {
    TEST_CASE("build_subspace examples") {
        const BipartiteDims d{2, 2};
        const CMatrix rho = identity(4) / 4.0;
        const CMatrix sigma = kron(ketbra(2, 0, 0), ketbra(2, 0, 0));
        auto v = build_subspace({rho, sigma}, d);
        CHECK(v.dim() == 2);
        CHECK(v.selfAdjointVerified);
        CHECK(build_subspace({identity(4)}, d).dim() == 1);

        // 15 generators spanning B(H_S) (x) rho_B: the 4 matrix units plus 11 combinations.
        Rng rng(2);
        const CMatrix rb = rng.density_matrix(2);
        std::vector<CMatrix> gens;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens.push_back(kron(ketbra(2, i, j), rb));
        for (int k = 0; k < 11; ++k) {
            CMatrix c = CMatrix::Zero(4, 4);
            for (int m = 0; m < 4; ++m) c += cplx(rng.normal(), rng.normal()) * gens[m];
            gens.push_back(c);
        }
        CHECK(build_subspace(gens, d).dim() == 4);
    }

    TEST_CASE("build_subspace closes under adjoint and rejects bad input") {
        auto v = build_subspace({ketbra(4, 0, 1)}, {2, 2});
        CHECK(v.dim() == 2);
        CHECK(span_residual(v.basis, ketbra(4, 1, 0)) < 1e-12);
        for (const auto& b : v.basis) CHECK(hermiticity_defect(b) < 1e-12);
        CHECK_THROWS_AS(build_subspace({}, {2, 2}), DomainError);
        CHECK_THROWS_AS(build_subspace({identity(3)}, {2, 2}), DimensionError);
        CHECK(build_subspace({identity(4), identity(4)}, {2, 2}).dim() == 1);
    }

    TEST_CASE("kernel decomposition examples") {
        Rng rng(4);
        const CMatrix rb = rng.density_matrix(2);
        auto kraus = make_kraus({2, 2}, rb);
        CHECK(kernel_decomposition(kraus.subspace).v0Basis.empty());

        auto jss = make_jss(0.3, 0.2, 1.0);
        const auto kd = kernel_decomposition(jss.subspace);
        REQUIRE(kd.v0Basis.size() == 10);
        const int pairs[10][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}};
        std::vector<CMatrix> listed;
        for (const auto& p : pairs) listed.push_back(kron(pauli(p[0]), pauli(p[1])));
        const auto listedOnb = orthonormalize(listed);
        REQUIRE(listedOnb.size() == 10);
        for (const auto& w : kd.v0Basis) CHECK(span_residual(listedOnb, w) < 1e-9);

        auto one = build_subspace({identity(4)}, {2, 2});
        const auto k1 = kernel_decomposition(one);
        CHECK(k1.v0Basis.empty());
        REQUIRE(k1.reducedBasis.size() == 1);
        CHECK(span_residual(orthonormalize(k1.reducedBasis), identity(2)) < 1e-12);
    }

    TEST_CASE("kernel decomposition invariants on random subspaces") {
        Rng rng(6);
        for (int trial = 0; trial < 40; ++trial) {
            const BipartiteDims d{rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
            const auto v = random_state_subspace(rng, d, rng.uniform_int(1, 6));
            const auto kd = kernel_decomposition(v);
            CHECK(kd.v0Basis.size() + kd.complementBasis.size() == static_cast<size_t>(v.dim()));
            for (const auto& w : kd.v0Basis) {
                CHECK(hs_norm(partial_trace_B(w, d)) <= 1e-9);
                for (const auto& c : kd.complementBasis) CHECK(std::abs(hs_inner(w, c)) < 1e-9);
            }
            std::vector<CMatrix> both = kd.v0Basis;
            both.insert(both.end(), kd.complementBasis.begin(), kd.complementBasis.end());
            const CMatrix diff = projection_matrix(v.basis, d.total()) - projection_matrix(both, d.total());
            CHECK(diff.operatorNorm() <= 1e-9);
            const int r = static_cast<int>(kd.reducedBasis.size());
            if (r > 0) {
                CMatrix gram(r, r);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) gram(i, j) = hs_inner(kd.reducedBasis[i], kd.reducedBasis[j]);
                CHECK(min_eigenvalue(gram) > 1e-10);
            }
        }
    }

    TEST_CASE("orthogonal projection examples") {
        const auto onb = orthonormalize({identity(3), ketbra(3, 1, 1)});
        const CMatrix expected = (identity(3) - ketbra(3, 1, 1)) / 2.0;
        CHECK(max_abs(orthogonal_projection(onb, ketbra(3, 0, 0)) - expected) < 1e-12);
        CHECK(max_abs(orthogonal_projection(onb, ketbra(3, 2, 2)) - expected) < 1e-12);
        CHECK(max_abs(orthogonal_projection(onb, identity(3)) - identity(3)) < 1e-12);

        std::vector<CMatrix> units;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!((i == 0 && j == 1) || (i == 1 && j == 0))) units.push_back(ketbra(3, i, j));
        CHECK(max_abs(orthogonal_projection(orthonormalize(units), ketbra(3, 0, 1))) < 1e-15);

        Rng rng(8);
        const CMatrix x = rng.ginibre(3, 3);
        const CMatrix px = orthogonal_projection(onb, x);
        CHECK(max_abs(orthogonal_projection(onb, px) - px) < 1e-12);
        const CMatrix y = rng.ginibre(3, 3);
        CHECK(std::abs(hs_inner(y, px) - hs_inner(orthogonal_projection(onb, y), x)) < 1e-12);
        CHECK_THROWS_AS(orthogonal_projection(onb, identity(2)), DimensionError);
    }

    TEST_CASE("state-spanned verification") {
        const CMatrix rho = identity(4) / 4.0;
        const CMatrix sigma = kron(ketbra(2, 0, 0), ketbra(2, 0, 0));
        auto r = check_state_spanned(build_subspace({rho, sigma}, {2, 2}));
        CHECK(r.status == SpanStatus::Verified);
        REQUIRE(r.states.size() == 2);
        for (const auto& s : r.states) {
            CHECK(min_eigenvalue(s) >= -1e-9);
            CHECK(std::abs(s.trace().real() - 1.0) <= 1e-9);
        }

        r = check_state_spanned(build_subspace({kron(pauli(3), pauli(3))}, {2, 2}));
        CHECK(r.status == SpanStatus::Refuted);
        CHECK(r.direction.size() > 0);

        Rng rng(10);
        auto zd = make_zero_discord(identity(2), {rng.density_matrix(2), rng.density_matrix(2)});
        CHECK(check_state_spanned(zd.subspace).status == SpanStatus::Verified);
    }

    TEST_CASE("subspaces generated by states are verified") {
        Rng rng(12);
        for (int trial = 0; trial < 15; ++trial) {
            const BipartiteDims d{2, rng.uniform_int(1, 2)};
            const auto v = random_state_subspace(rng, d, rng.uniform_int(1, 4));
            const auto r = check_state_spanned(v);
            CHECK(r.status == SpanStatus::Verified);
            CHECK(r.states.size() == static_cast<size_t>(v.dim()));
            for (const auto& s : r.states) CHECK(span_residual(v.basis, s) <= 1e-9);
        }
    }
}
