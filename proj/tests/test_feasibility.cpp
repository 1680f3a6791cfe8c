#include "doctest.h"

#include "cpkit/errors.hpp"
#include "cpkit/feasibility.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

TEST_SUITE("feasibility") {
    TEST_CASE("unit-trace PSD matrix is found") {
        FeasibilityProblem p;
        p.dim = 3;
        p.add(identity(3), 1.0);
        const auto r = solve_feasibility(p);
        REQUIRE(r.status == FeasStatus::Feasible);
        CHECK(min_eigenvalue(r.point) >= -1e-9);
        CHECK(std::abs(r.point.trace().real() - 1.0) <= 1e-8);
    }

    TEST_CASE("contradictory constraints are infeasible") {
        FeasibilityProblem p;
        p.dim = 2;
        p.add(identity(2), 1.0);
        p.add(identity(2), 2.0);
        CHECK(solve_feasibility(p).status == FeasStatus::InfeasibleNumerically);
    }

    TEST_CASE("negative diagonal target is infeasible with a separating direction") {
        FeasibilityProblem p;
        p.dim = 2;
        p.add(ketbra(2, 0, 0), -0.5);
        p.add(identity(2), 1.0);
        const auto r = solve_feasibility(p);
        CHECK(r.status != FeasStatus::Feasible);
        CHECK(r.residual > 1e-3);
    }

    TEST_CASE("partial trace constraint recovers a preimage") {
        Rng rng(3);
        const CMatrix rho = rng.density_matrix(2);
        FeasibilityProblem p;
        p.dim = 4;
        p.add_partial_trace({2, 2}, rho);
        const auto r = solve_feasibility(p);
        REQUIRE(r.status == FeasStatus::Feasible);
        CHECK(max_abs(partial_trace_B(r.point, {2, 2}) - rho) <= 1e-7);
        CHECK(min_eigenvalue(r.point) >= -1e-9);
    }

    TEST_CASE("affine membership on the PSD boundary needs the polish") {
        // X = |0><0| + t sigma_x is PSD only at t = 0.
        FeasibilityProblem p;
        p.dim = 2;
        p.add_affine_membership(ketbra(2, 0, 0), {pauli(1) / std::sqrt(2.0)});
        const auto r = solve_feasibility(p);
        REQUIRE(r.status == FeasStatus::Feasible);
        CHECK(max_abs(r.point - ketbra(2, 0, 0)) <= 1e-7);
    }

    TEST_CASE("complex functionals") {
        FeasibilityProblem p;
        p.dim = 2;
        p.add(identity(2), 1.0);
        p.add_complex(ketbra(2, 0, 1), cplx(0.2, -0.1));
        const auto r = solve_feasibility(p);
        REQUIRE(r.status == FeasStatus::Feasible);
        CHECK(std::abs(hs_inner(ketbra(2, 0, 1), r.point) - cplx(0.2, -0.1)) <= 1e-7);
    }

    TEST_CASE("feasible points satisfy the stated tolerance") {
        Rng rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = rng.uniform_int(2, 4);
            const CMatrix x = rng.density_matrix(n);
            FeasibilityProblem p;
            p.dim = n;
            for (int k = 0; k < n; ++k) {
                const CMatrix f = rng.hermitian(n);
                p.add(f, hs_inner(f, x).real());
            }
            const auto r = solve_feasibility(p);
            REQUIRE(r.status == FeasStatus::Feasible);
            CHECK(r.residual <= 1e-8);
            CHECK(min_eigenvalue(r.point) >= -1e-9);
        }
    }

    TEST_CASE("input validation") {
        FeasibilityProblem p;
        CHECK_THROWS_AS(solve_feasibility(p), DimensionError);
        p.dim = 2;
        p.functionals.push_back(identity(2));
        CHECK_THROWS_AS(solve_feasibility(p), DimensionError);
        CHECK(to_string(FeasStatus::Feasible) == "feasible");
    }
}
