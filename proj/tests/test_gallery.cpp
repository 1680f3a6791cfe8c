#include "doctest.h"

#include "cpkit/analysis.hpp"
#include "cpkit/assignment.hpp"
#include "cpkit/cpclass.hpp"
#include "cpkit/entropy.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/gallery.hpp"
#include "cpkit/random.hpp"

#include <cmath>

using namespace cpkit;

namespace {

void check_expectations(const std::string& name, int samples) {
    CAPTURE(name);
    AnalysisRequest req;
    req.source = "gallery:" + name;
    req.samples = samples;
    const auto rep = run_analyze(req);
    CHECK(rep.ok());
    CHECK(validate_report(rep.body).empty());
    for (const auto& e : rep.body["expectations"]) {
        CAPTURE(e.dump());
        CHECK(e["status"] == "match");
    }
}

}  // namespace

TEST_SUITE("gallery") {
    TEST_CASE("every registered case builds") {
        const auto names = gallery_names();
        CHECK(names.size() == 14);
        for (const auto& n : names) {
            CAPTURE(n);
            const auto c = make_gallery_case(n);
            CHECK(c.name == n);
            CHECK(c.subspace.dim() > 0);
            CHECK_FALSE(c.expected.empty());
            for (const auto& e : c.expected) CHECK((e.origin == "analytic" || e.origin == "construction" || e.origin == "numeric"));
        }
        CHECK_THROWS_AS(make_gallery_case("nope"), DomainError);
        CHECK_THROWS_AS(make_gallery_case("kraus", {{"bogus", 1.0}}), DomainError);
        CHECK_THROWS_AS(make_gallery_case("alicki", {{"variant", 7}}), DomainError);
        CHECK_THROWS_AS(make_gallery_case("buscemi", {{"family", 9}}), DomainError);
    }

    TEST_CASE("expectations hold for every case") {
        for (const auto& n : gallery_names()) {
            if (n == "choi_effros_counterexample") continue;
            check_expectations(n, 0);
        }
        check_expectations("choi_effros_counterexample", 3);
    }

    TEST_CASE("expectations hold away from the default parameters") {
        const std::vector<std::pair<std::string, ParamMap>> variants = {
            {"jss", {{"alpha", 0.0}, {"beta", 0.0}}},
            {"carteret", {{"a", -0.5}, {"theta", M_PI / 6}}},
            {"carteret", {{"a", 0.0}, {"theta", M_PI / 4}}},
            {"pechukas", {{"p", 0.0}}},
            {"alicki", {{"variant", 2}}},
            {"consistent_positive_counterexample", {{"dS", 3}, {"dB", 2}}},
            {"stelmachovic_buzek_cnot", {{"alpha", 1.0}, {"beta", 0.0}}},
            {"buscemi", {{"family", 1}, {"seed", 4}}},
            {"shabani_lidar", {{"discordant", 0}}},
        };
        for (const auto& [name, params] : variants) {
            CAPTURE(name);
            AnalysisRequest req;
            req.source = "gallery:" + name;
            req.params = params;
            req.samples = 5;
            const auto rep = run_analyze(req);
            CHECK(rep.ok());
            for (const auto& e : rep.body["expectations"]) {
                CAPTURE(e.dump());
                CHECK(e["status"] == "match");
            }
        }
    }

    TEST_CASE("entropy examples") {
        CHECK(std::abs(von_neumann_entropy(identity(2) / 2.0) - std::log(2.0)) <= 1e-12);
        CHECK(std::abs(von_neumann_entropy(ketbra(3, 1, 1))) <= 1e-12);
        CHECK(std::abs(von_neumann_entropy(identity(4) / 4.0) - std::log(4.0)) <= 1e-12);
        CHECK_THROWS_AS(von_neumann_entropy(identity(2)), DomainError);

        Rng rng(1);
        const CMatrix prod = kron(kron(rng.density_matrix(2), rng.density_matrix(2)), rng.density_matrix(2));
        CHECK(std::abs(conditional_mutual_information(prod, {2, 2, 2}).conditionalMutualInformation) <= 1e-10);

        // R and B maximally entangled, S in a pure state: I(R:B|S) = 2 ln 2.
        CVector bell = CVector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        const CMatrix rb = projector(bell);
        CMatrix rsb = CMatrix::Zero(8, 8);
        for (int r1 = 0; r1 < 2; ++r1)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int r2 = 0; r2 < 2; ++r2)
                    for (int b2 = 0; b2 < 2; ++b2) rsb(r1 * 4 + b1, r2 * 4 + b2) = rb(r1 * 2 + b1, r2 * 2 + b2);
        CHECK(std::abs(conditional_mutual_information(rsb, {2, 2, 2}).conditionalMutualInformation - 2.0 * std::log(2.0)) <= 1e-10);
        CHECK_THROWS_AS(make_buscemi(rsb, {2, 2, 2}), DomainError);

        for (int family = 0; family < 5; ++family) {
            std::array<int, 3> dims{};
            const CMatrix rho = buscemi_markov_state(family, 3, dims);
            CAPTURE(family);
            CHECK(conditional_mutual_information(rho, dims).conditionalMutualInformation <= 1e-8);
        }
    }

    TEST_CASE("classical-quantum tests") {
        Rng rng(2);
        const CMatrix cq = 0.4 * kron(ketbra(2, 0, 0), rng.density_matrix(2)) + 0.6 * kron(ketbra(2, 1, 1), rng.density_matrix(2));
        CHECK(cq_state_test(cq, identity(2), {2, 2}));
        CHECK_FALSE(discordant_over_grid(cq, {2, 2}));
        const CMatrix h = (pauli(1) + pauli(3)) / std::sqrt(2.0);
        CHECK(cq_state_test(cq, h, {2, 2}) == false);

        CVector bell = CVector::Zero(4);
        bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
        CHECK(discordant_over_grid(projector(bell), {2, 2}));
        CHECK_THROWS_AS(cq_state_test(cq, identity(3), {2, 2}), DimensionError);

        const auto b = make_gallery_case("brodutch");
        CHECK(b.observed["discordant"] == true);
    }

    TEST_CASE("Shabani-Lidar form") {
        const auto sl = make_gallery_case("shabani_lidar");
        CHECK(sl_form_check(sl.subspace, identity(2)) == SLForm::SLForm);
        const auto cpc = make_consistent_positive_counterexample(2, 2);
        CHECK(sl_form_check(cpc.subspace, identity(2)) == SLForm::NotSLForm);
        CHECK(sl_form_check(make_gallery_case("zero_discord").subspace, identity(2)) == SLForm::SLForm);
    }

    TEST_CASE("product subspaces are recognized") {
        Rng rng(3);
        const auto k = make_kraus({2, 3}, rng.density_matrix(3));
        CHECK(is_kraus_form(k.subspace));
        CHECK(domain_is_full(k.subspace));
        CHECK_FALSE(is_kraus_form(make_jss(0.3, 0.2, 1.0).subspace));
        CHECK_FALSE(domain_is_full(make_consistent_positive_counterexample(2, 2).subspace));
    }

    TEST_CASE("positive linear assignments on all of B(H_S) are products") {
        Rng rng(4);
        for (int trial = 0; trial < 8; ++trial) {
            CAPTURE(trial);
            const bool product = trial % 2 == 0;
            CMatrix rho = product ? CMatrix(kron(rng.density_matrix(2), rng.density_matrix(2)))
                                  : CMatrix(0.5 * rng.density_matrix(4, 1) + 0.5 * identity(4) / 4.0);
            if (!product && max_abs(kron(partial_trace_B(rho, {2, 2}), partial_trace_S(rho, {2, 2})) - rho) <= 1e-6) continue;
            const auto c = make_pechukas(rho, {2, 2});
            CHECK(is_kraus_form(c.subspace) == product);
            ClassifyOptions opt;
            opt.positivityHints = c.positivityHints;
            const auto p = classify_positive(build_assignment(c.subspace).as_subspace_map(), opt);
            if (product) CHECK(p.verdict != Tri::No);
            else CHECK(p.verdict == Tri::No);
        }
    }

    TEST_CASE("constructor validation") {
        CHECK_THROWS_AS(make_kraus({2, 2}, identity(2)), DomainError);
        CHECK_THROWS_AS(make_carteret(0.5, 0.1), DomainError);
        CHECK_NOTHROW(make_carteret(0.5, 0.1, true));
        CHECK_THROWS_AS(make_carteret(-1.0, 0.1), DomainError);
        CHECK_THROWS_AS(make_consistent_positive_counterexample(1, 2), DomainError);
        CHECK_THROWS_AS(make_pechukas(ketbra(4, 0, 0), {2, 2}), DomainError);
    }
}
