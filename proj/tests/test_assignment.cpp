#include "doctest.h"

#include "cpkit/assignment.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/gallery.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

namespace {

OperatorSubspace random_state_subspace(Rng& rng, BipartiteDims d, int count) {
    std::vector<CMatrix> gens;
    for (int k = 0; k < count; ++k) gens.push_back(rng.density_matrix(d.total(), rng.uniform_int(1, d.total())));
    return build_subspace(gens, d);
}

}  // namespace

TEST_SUITE("assignment") {
    TEST_CASE("product subspace assigns x to x (x) rho_B") {
        Rng rng(1);
        const CMatrix rb = rng.density_matrix(3);
        const auto a = build_assignment(make_kraus({2, 3}, rb).subspace);
        CHECK(a.dim() == 4);
        CHECK(a.v0Basis.empty());
        for (int k = 0; k < 5; ++k) {
            const CMatrix x = rng.hermitian(2);
            CHECK(max_abs(a.evaluate(x) - kron(x, rb)) <= 1e-9);
        }
        CHECK(max_abs(a.evaluate(ketbra(2, 0, 1)) - kron(ketbra(2, 0, 1), rb)) <= 1e-9);
    }

    TEST_CASE("invariants on random subspaces") {
        Rng rng(2);
        for (int trial = 0; trial < 40; ++trial) {
            const BipartiteDims d{rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
            const auto a = build_assignment(random_state_subspace(rng, d, rng.uniform_int(1, 6)));
            CHECK(a.consistency_residual() <= 1e-9);
            CHECK(a.trace_residual() <= 1e-9);
            CHECK(a.dagger_residual() <= 1e-9);
            for (const auto& r : a.representatives)
                for (const auto& w : a.v0Basis) CHECK(std::abs(hs_inner(w, r)) <= 1e-9);
            for (const auto& s : a.knownStates) {
                const CMatrix img = a.evaluate(partial_trace_B(s, d));
                // s and the canonical image differ by an element of V0.
                CHECK(span_residual(a.v0Basis, s - img) <= 1e-8);
            }
        }
    }

    TEST_CASE("evaluate rejects operators outside the domain") {
        const auto c = make_gallery_case("choi_effros_counterexample");
        const auto a = build_assignment(c.subspace);
        CHECK(a.dim() == 7);
        const CMatrix off = ketbra(3, 0, 1) + ketbra(3, 1, 0);
        CHECK(a.domain_residual(off) > 1.0);
        CHECK_THROWS_AS(a.evaluate(off), DomainError);
        CHECK_THROWS_AS(a.evaluate(identity(2)), DimensionError);
        CHECK_NOTHROW(a.evaluate(ketbra(3, 2, 0)));
    }

    TEST_CASE("zero extension vanishes off the domain") {
        const auto c = make_gallery_case("choi_effros_counterexample");
        const auto a = build_assignment(c.subspace);
        const auto z = zero_extend(a);
        CHECK(z.dIn == 3);
        CHECK(z.dOut == 3 * c.subspace.dims.dB);
        CHECK(max_abs(z.apply(ketbra(3, 0, 1))) <= 1e-12);
        CHECK(max_abs(z.apply(ketbra(3, 2, 1)) - a.evaluate(ketbra(3, 2, 1))) <= 1e-9);
        // Projection onto the domain has Choi minimum eigenvalue 1 - sqrt 2 for this family.
        std::vector<CMatrix> proj;
        const auto onb = a.source;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) proj.push_back(orthogonal_projection(onb, ketbra(3, i, j)));
        CHECK(std::abs(min_eigenvalue(choi_of(proj, 3, 3)) - (1.0 - std::sqrt(2.0))) <= 1e-9);
    }

    TEST_CASE("operator-sum representations reproduce the map") {
        Rng rng(3);
        const CMatrix rb = rng.density_matrix(2);
        const auto a = build_assignment(make_kraus({2, 2}, rb).subspace);
        const auto o = assignment_osr(a);
        CHECK(o.osr.kraus_form());
        CHECK(o.osr.min_coefficient() >= -1e-9);
        for (int k = 0; k < 5; ++k) {
            const CMatrix x = rng.hermitian(2);
            CHECK(max_abs(o.osr.apply(x) - a.evaluate(x)) <= 1e-8);
        }

        const auto ce = build_assignment(make_gallery_case("choi_effros_counterexample").subspace);
        const auto o2 = assignment_osr(ce);
        CHECK_FALSE(o2.positiveClassElement);
        CHECK_FALSE(o2.osr.kraus_form());
        CHECK(o2.osr.min_coefficient() < -1e-3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i + j == 1) continue;
                CHECK(max_abs(o2.osr.apply(ketbra(3, i, j)) - ce.evaluate(ketbra(3, i, j))) <= 1e-8);
            }
    }

    TEST_CASE("osr_from_choi inverts choi_of") {
        Rng rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            const int dIn = rng.uniform_int(1, 3), dOut = rng.uniform_int(1, 3);
            std::vector<CMatrix> imgs;
            for (int i = 0; i < dIn; ++i)
                for (int j = 0; j < dIn; ++j) imgs.push_back(rng.ginibre(dOut, dOut));
            // Hermitian-preserving: F(E_ji) = F(E_ij)^dag.
            for (int i = 0; i < dIn; ++i)
                for (int j = 0; j < i; ++j) imgs[j * dIn + i] = imgs[i * dIn + j].adjoint();
            for (int i = 0; i < dIn; ++i) imgs[i * dIn + i] = hermitian_part(imgs[i * dIn + i]);
            const CMatrix c = choi_of(imgs, dOut, dIn);
            const auto o = osr_from_choi(c, dOut, dIn);
            const CMatrix x = rng.ginibre(dIn, dIn);
            CHECK(max_abs(o.apply(x) - apply_from_choi(c, x, dOut, dIn)) <= 1e-9);
        }
        CHECK_THROWS_AS(osr_from_choi(identity(5), 2, 2), DimensionError);
    }

    TEST_CASE("two-state subspace with a kernel") {
        // V = span{rho1 (x) s1, rho2 (x) s2} with rho1 = rho2 has a nontrivial V0.
        Rng rng(5);
        const CMatrix r = rng.density_matrix(2);
        const auto v = build_subspace({kron(r, rng.density_matrix(2)), kron(r, rng.density_matrix(2))}, {2, 2});
        const auto a = build_assignment(v);
        CHECK(a.v0Basis.size() == 1);
        CHECK(a.dim() == 1);
        CHECK(std::abs(a.evaluate(r).trace() - cplx(1.0)) <= 1e-9);
    }
}
