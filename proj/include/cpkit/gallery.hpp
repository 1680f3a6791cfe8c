#pragma once

#include "cpkit/consistency.hpp"
#include "cpkit/entropy.hpp"
#include "cpkit/json_io.hpp"
#include "cpkit/linalg.hpp"
#include "cpkit/opspace.hpp"

#include <array>
#include <map>
#include <utility>
#include <string>
#include <vector>

namespace cpkit {

using ParamMap = std::map<std::string, double>;

// origin: "analytic" (closed form), "construction" (holds by how the case is built),
// or "numeric" (value from an independent numerical oracle).
struct Expectation {
    std::string key;
    json value;
    std::string origin;
    double tol = 0.0;
};

// Probe of the physical domain: largest t in [0, tMax] with center + t * direction inside.
struct DomainProbe {
    std::string label;
    CMatrix center;
    CMatrix direction;
    double tMax = 1.0;
};

struct GalleryCase {
    std::string name;
    std::string description;
    json parameters = json::object();
    OperatorSubspace subspace;
    SemigroupSpec semigroup;
    std::vector<CMatrix> unitaries;  // fixed unitaries for the dynamical maps; empty means sample from the semigroup
    std::vector<std::string> unitaryLabels;
    std::vector<CMatrix> positivityHints;  // system operators tried first as positivity witnesses
    std::vector<DomainProbe> probes;
    std::vector<std::pair<std::string, CMatrix>> membershipQueries;  // labelled system states
    int samples = 20;                                                 // sampled unitaries for "for all U" checks
    std::vector<Expectation> expected;
    json extra = json::object();     // case-specific derived data (entropies, discord tests)
    json observed = json::object();  // values measured while building the case, keyed like `expected`

    void expect(const std::string& key, json value, const std::string& origin, double tol = 0.0) {
        expected.push_back({key, std::move(value), origin, tol});
    }
};

GalleryCase make_kraus(BipartiteDims dims, const CMatrix& rhoB);
GalleryCase make_pechukas(const CMatrix& rhoSBeq, BipartiteDims dims);
GalleryCase make_alicki(const std::vector<CMatrix>& krausOps, const CMatrix& rhoSBeq, BipartiteDims dims);
GalleryCase make_diff_bath_states(const CMatrix& rhoS, const CMatrix& rhoB1, const CMatrix& rhoB2);
GalleryCase make_stelmachovic_buzek_cnot(cplx alpha, cplx beta);
GalleryCase make_stelmachovic_buzek_swap(const CMatrix& rhoT);
// Both cases at once: the CNOT inconsistency pair and the swap construction.
std::pair<GalleryCase, GalleryCase> make_stelmachovic_buzek(cplx alpha, cplx beta, const CMatrix& rhoT);
GalleryCase make_jss(double alpha, double beta, double omega);
// a in (-1, 1/3); extendedRange admits a in [1/3, 1), where V holds no states but the maps are still defined.
GalleryCase make_carteret(double a, double theta, bool extendedRange = false);
GalleryCase make_zero_discord(const CMatrix& basis, const std::vector<CMatrix>& sigmas);
// phis[i * dS + j] is the bath operator attached to |i><j|.
GalleryCase make_shabani_lidar(const CMatrix& basis, const std::vector<CMatrix>& phis, int dB);
// sigmas = {sigma_plus, sigma_0, ..., sigma_n}; weight scales the |+><+| (x) sigma_plus term.
GalleryCase make_brodutch(const CMatrix& basis, const std::vector<CMatrix>& sigmas, double weight = 1.0);
GalleryCase make_buscemi(const CMatrix& rhoRSB, std::array<int, 3> dims);
GalleryCase make_choi_effros_counterexample(const CMatrix& rhoB);
GalleryCase make_consistent_positive_counterexample(int dS, int dB);

// Carteret unitary U(theta) and the displayed Choi matrix, in input (x) output order.
CMatrix carteret_unitary(double theta);
CMatrix carteret_choi_display(double a, double theta);

// Markov-chain tripartite test states R-S-B with I(R:B|S) = 0; families 0..4.
CMatrix buscemi_markov_state(int family, std::uint64_t seed, std::array<int, 3>& dims);

// True iff rhoSB = sum_i (|i><i| (x) 1) rhoSB (|i><i| (x) 1) within tol, |i> the columns of basis.
bool cq_state_test(const CMatrix& rhoSB, const CMatrix& basis, BipartiteDims dims, double tol = 1e-8);
// Tests the computational basis and `randomBases` seeded Haar bases; true when no basis passes.
bool discordant_over_grid(const CMatrix& rhoSB, BipartiteDims dims, int randomBases = 200, std::uint64_t seed = 7);

enum class SLForm { SLForm, NotSLForm };
// Whether V is spanned by |i><j| (x) phi_ij in the given basis: every block
// projection (|i><i| (x) 1) V (|j><j| (x) 1) must be at most one-dimensional and
// V must be the sum of those block projections.
SLForm sl_form_check(const OperatorSubspace& v, const CMatrix& basis);

// V = B(H_S) (x) rho_B for a single bath state.
bool is_kraus_form(const OperatorSubspace& v, double tol = 1e-9);
// Tr_B V = B(H_S) and every tested pure state lies in the physical domain.
bool domain_is_full(const OperatorSubspace& v, std::uint64_t seed = 3, int randomStates = 20);

std::vector<std::string> gallery_names();
// Builds a named case from numeric parameters; unknown names or parameters throw DomainError.
GalleryCase make_gallery_case(const std::string& name, const ParamMap& params = {});

}  // namespace cpkit
