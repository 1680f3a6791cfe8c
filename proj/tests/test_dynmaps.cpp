#include "doctest.h"

#include "cpkit/dynmaps.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/gallery.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

TEST_SUITE("dynmaps") {
    TEST_CASE("product subspace gives the reduced unitary channel") {
        Rng rng(1);
        const BipartiteDims d{2, 3};
        const CMatrix rb = rng.density_matrix(3);
        const auto a = build_assignment(make_kraus(d, rb).subspace);
        const CMatrix U = rng.haar_unitary(6);
        const auto psi = build_dynamical_map(a, U);
        for (int k = 0; k < 5; ++k) {
            const CMatrix x = rng.ginibre(2, 2);
            CHECK(max_abs(psi.apply(x) - partial_trace_B(U * kron(x, rb) * U.adjoint(), d)) <= 1e-9);
        }
        CHECK(psi.trace_residual() <= 1e-9);
        CHECK(psi.hermiticity_residual() <= 1e-9);
        CHECK(min_eigenvalue(choi_matrix(psi).matrix()) >= -1e-9);

        std::vector<CMatrix> units;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) units.push_back(psi.apply(ketbra(2, i, j)));
        CHECK(max_abs(choi_matrix(psi).matrix() - choi_of(units, 2, 2)) <= 1e-9);

        const auto o = dynmap_osr(psi);
        CHECK(o.kraus_form());
        const CMatrix x = rng.density_matrix(2);
        CHECK(max_abs(o.apply(x) - psi.apply(x)) <= 1e-8);
    }

    TEST_CASE("inconsistent unitaries are refused") {
        const auto c = make_gallery_case("stelmachovic_buzek_cnot");
        const auto a = build_assignment(c.subspace);
        REQUIRE_FALSE(a.v0Basis.empty());
        REQUIRE(c.semigroup.kind == SemigroupKind::Generators);
        CHECK_THROWS_AS(build_dynamical_map(a, c.semigroup.generators.front()), InconsistencyError);
        CHECK_NOTHROW(build_dynamical_map(a, identity(4)));
    }

    TEST_CASE("maps do not depend on the V0 representative") {
        const auto c = make_jss(0.3, 0.2, 1.0);
        const auto a = build_assignment(c.subspace);
        REQUIRE(a.v0Basis.size() == 10);
        for (double t : {0.3, 1.1, 2.9}) {
            const auto psi = build_dynamical_map(a, expm_hermitian(c.semigroup.hamiltonian, t), {}, 7);
            CHECK(psi.representativeShiftResidual <= 1e-9);
            CHECK(psi.trace_residual() <= 1e-9);
            CHECK(psi.hermiticity_residual() <= 1e-9);
        }
    }

    TEST_CASE("physical domain membership") {
        const auto c = make_consistent_positive_counterexample(2, 2);
        const auto a = build_assignment(c.subspace);
        const auto center = physical_domain_membership(a, ketbra(2, 0, 0));
        CHECK(center.verdict == DomainVerdict::Inside);
        REQUIRE(center.certificate);
        CHECK(min_eigenvalue(*center.certificate) >= -1e-9);
        CHECK(max_abs(partial_trace_B(*center.certificate, {2, 2}) - ketbra(2, 0, 0)) <= 1e-9);
        CHECK(physical_domain_membership(a, ketbra(2, 1, 1)).verdict == DomainVerdict::Outside);
        CHECK(physical_domain_membership(a, identity(2) / 2.0).verdict == DomainVerdict::Inside);
        // Off the span of Tr_B V.
        const CMatrix plus = CMatrix::Constant(2, 2, 0.5);
        const auto off = physical_domain_membership(a, plus);
        CHECK(off.verdict == DomainVerdict::Outside);
        CHECK(off.reason == "not in Tr_B V");

        Rng rng(2);
        const auto k = build_assignment(make_kraus({2, 2}, rng.density_matrix(2)).subspace);
        for (int trial = 0; trial < 5; ++trial)
            CHECK(physical_domain_membership(k, rng.density_matrix(2)).verdict == DomainVerdict::Inside);
    }

    TEST_CASE("segment extent matches the closed form") {
        for (auto [dS, dB] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
            const auto c = make_consistent_positive_counterexample(dS, dB);
            const auto a = build_assignment(c.subspace);
            const auto& p = c.probes.front();
            const double t = physical_domain_extent(a, p.center, p.direction, p.tMax, 1e-10);
            CHECK(std::abs(t - double(dS * dB - dB) / double(dS * dB - 1)) <= 1e-8);
        }
    }

    TEST_CASE("invalid states are rejected") {
        const auto a = build_assignment(make_consistent_positive_counterexample(2, 2).subspace);
        CHECK_THROWS_AS(physical_domain_membership(a, identity(3) / 3.0), DimensionError);
        CHECK_THROWS_AS(physical_domain_membership(a, identity(2)), DomainError);
        CHECK_THROWS_AS(physical_domain_membership(a, ketbra(2, 0, 1)), DomainError);
        CHECK_THROWS_AS(physical_domain_membership(a, CMatrix(1.5 * ketbra(2, 0, 0) - 0.5 * ketbra(2, 1, 1))), DomainError);
        CMatrix nan = identity(2) / 2.0;
        nan(0, 0) = std::nan("");
        CHECK_THROWS_AS(physical_domain_membership(a, nan), DomainError);
        CHECK(to_string(DomainVerdict::Undetermined) == "undetermined");
    }
}
