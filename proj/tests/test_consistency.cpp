#include "doctest.h"

#include "cpkit/consistency.hpp"
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

CMatrix cnot() { return kron(ketbra(2, 0, 0), identity(2)) + kron(ketbra(2, 1, 1), pauli(1)); }

void check_witness(const ConsistencyVerdict& r, const OperatorSubspace& v) {
    REQUIRE(r.witness);
    CHECK(r.witness->norm > 1e-6);
    CHECK(hs_norm(partial_trace_B(r.witness->X, v.dims)) <= 1e-9);
    CHECK(span_residual(v.basis, r.witness->X) <= 1e-9);
    const CMatrix& U = r.witness->U;
    CHECK(std::abs(hs_norm(partial_trace_B(U * r.witness->X * U.adjoint(), v.dims)) - r.witness->norm) <= 1e-9);
}

}  // namespace

TEST_SUITE("consistency") {
    TEST_CASE("different bath states under the swap are inconsistent") {
        const auto c = make_gallery_case("diff_bath_states");
        const auto r = check_g_consistency(c.subspace, c.semigroup);
        CHECK_FALSE(r.consistent);
        check_witness(r, c.subspace);
    }

    TEST_CASE("CNOT pair is inconsistent") {
        const auto c = make_gallery_case("stelmachovic_buzek_cnot");
        const auto r = check_g_consistency(c.subspace, c.semigroup);
        CHECK_FALSE(r.consistent);
        check_witness(r, c.subspace);
        CHECK(std::abs(r.witness->norm - 1.0) <= 1e-9);
    }

    TEST_CASE("product subspaces are consistent with every unitary") {
        Rng rng(1);
        const auto c = make_kraus({2, 3}, rng.density_matrix(3));
        const auto r = check_g_consistency(c.subspace, SemigroupSpec::full({2, 3}));
        CHECK(r.consistent);
        CHECK(r.method == "full-group");
        CHECK(check_u_consistency(c.subspace, rng.haar_unitary(6)).consistent);
    }

    TEST_CASE("JSS subspace is consistent with its Hamiltonian") {
        const auto c = make_jss(0.3, 0.2, 1.0);
        const auto r = check_g_consistency(c.subspace, c.semigroup);
        CHECK(r.consistent);
        CHECK(r.method == "commutator-closure");
        CHECK(r.closureDim == 10);
        for (double t : {0.1, 0.7, 2.3}) CHECK(check_u_consistency(c.subspace, expm_hermitian(c.semigroup.hamiltonian, t)).consistent);
    }

    TEST_CASE("full operator space with a CNOT generator is inconsistent") {
        const BipartiteDims d{2, 2};
        const auto v = build_subspace(hermitian_basis(4), d);
        REQUIRE(v.dim() == 16);
        const auto r = check_g_consistency(v, SemigroupSpec::from_generators(d, {cnot()}));
        CHECK_FALSE(r.consistent);
        check_witness(r, v);
        CHECK(r.method == "word-closure");
    }

    TEST_CASE("local unitaries are always consistent") {
        Rng rng(2);
        for (int trial = 0; trial < 20; ++trial) {
            const BipartiteDims d{rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
            const auto v = random_state_subspace(rng, d, rng.uniform_int(1, 6));
            CHECK(check_g_consistency(v, SemigroupSpec::local(d)).consistent);
            CHECK(check_u_consistency(v, rng.local_unitary(d)).consistent);
        }
    }

    TEST_CASE("full-group verdict agrees with Haar sampling") {
        Rng rng(3);
        int mismatches = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const BipartiteDims d{rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
            const auto v = random_state_subspace(rng, d, rng.uniform_int(1, 5));
            const auto verdict = check_g_consistency(v, SemigroupSpec::full(d), 100 + trial);
            bool sampledConsistent = true;
            for (int s = 0; s < 50 && sampledConsistent; ++s)
                sampledConsistent = check_u_consistency(v, rng.haar_unitary(d.total())).consistent;
            if (verdict.consistent != sampledConsistent) ++mismatches;
        }
        CHECK(mismatches <= 1);
    }

    TEST_CASE("Hamiltonian verdict is invariant under rescaling") {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const BipartiteDims d{2, 2};
            const auto v = random_state_subspace(rng, d, rng.uniform_int(1, 5));
            const CMatrix h = trial % 2 ? rng.hermitian(4) : CMatrix(kron(rng.hermitian(2), identity(2)) + kron(identity(2), rng.hermitian(2)));
            const auto a = check_g_consistency(v, SemigroupSpec::from_hamiltonian(d, h));
            const auto b = check_g_consistency(v, SemigroupSpec::from_hamiltonian(d, 2.5 * h));
            CHECK(a.consistent == b.consistent);
            CHECK(a.closureDim <= 16);
            if (trial % 2 == 0) CHECK(a.consistent);
        }
    }

    TEST_CASE("composition compatibility") {
        Rng rng(5);
        const CMatrix rb = rng.density_matrix(2);
        const auto v = make_kraus({2, 2}, rb).subspace;
        const CMatrix local = rng.local_unitary({2, 2});
        const CMatrix rbImage = partial_trace_S(local * kron(identity(2) / 2.0, rb) * local.adjoint(), {2, 2});
        const auto vprime = make_kraus({2, 2}, rbImage).subspace;
        CHECK(composition_compatible(v, local, vprime));
        CHECK_FALSE(composition_compatible(v, cnot(), v));
        CHECK(composition_compatible(v, identity(4), v));
        CHECK_THROWS_AS(composition_compatible(v, identity(3), v), DomainError);
    }

    TEST_CASE("semigroup validation") {
        const BipartiteDims d{2, 2};
        CHECK_THROWS_AS(SemigroupSpec::from_generators(d, {}).validate(), DomainError);
        CHECK_THROWS_AS(SemigroupSpec::from_generators(d, {identity(2)}).validate(), DimensionError);
        CHECK_THROWS_AS(SemigroupSpec::from_generators(d, {2.0 * identity(4)}).validate(), DomainError);
        CHECK_THROWS_AS(SemigroupSpec::from_hamiltonian(d, ketbra(4, 0, 1)).validate(), DomainError);
        const auto v = build_subspace({identity(4)}, d);
        CHECK_THROWS_AS(check_g_consistency(v, SemigroupSpec::full({2, 3})), DimensionError);
    }
}
