#include "cpkit/gallery.hpp"

#include "cpkit/assignment.hpp"
#include "cpkit/dynmaps.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/random.hpp"

#include <cmath>
#include <set>

namespace cpkit {

namespace {

const cplx I(0.0, 1.0);

void require_state(const CMatrix& rho, const std::string& what, double tol = 1e-9) {
    if (rho.rows() != rho.cols()) throw DimensionError(what + ": expected a square matrix");
    if (hermiticity_defect(rho) > 1e-10) throw DomainError(what + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) throw DomainError(what + ": trace is not 1");
    if (min_eigenvalue(rho) < -tol) throw DomainError(what + ": not positive semidefinite");
}

json j_matrix(const CMatrix& m) { return matrix_to_json(m); }

CMatrix pure(const CVector& v) { return projector(v / v.norm()); }

CVector plus_state() {
    CVector v(2);
    v << 1.0, 1.0;
    return v / std::sqrt(2.0);
}

std::vector<CMatrix> qubit_pure_hints() {
    CVector pi(2);
    pi << 1.0, I;
    CVector m(2);
    m << 1.0, -1.0;
    return {ketbra(2, 0, 0), ketbra(2, 1, 1), pure(plus_state()), pure(m), pure(pi)};
}

// Bloch-sphere probes around 1/2 along +x, +y, +z.
void add_bloch_probes(GalleryCase& c, double radius, const std::string& origin, double tol) {
    const char* labels[3] = {"x", "y", "z"};
    for (int k = 1; k <= 3; ++k) {
        c.probes.push_back({labels[k - 1], identity(2) / 2.0, pauli(k) / 2.0, 1.0});
        c.expect(std::string("domain.extent.") + labels[k - 1], radius, origin, tol);
    }
}

}  // namespace

GalleryCase make_kraus(BipartiteDims dims, const CMatrix& rhoB) {
    require_state(rhoB, "make_kraus: rhoB");
    if (rhoB.rows() != dims.dB) throw DimensionError("make_kraus: rhoB must be dB x dB");
    GalleryCase c;
    c.name = "kraus";
    c.description = "uncorrelated initial states B(H_S) (x) rho_B";
    c.parameters = {{"dS", dims.dS}, {"dB", dims.dB}, {"rhoB", j_matrix(rhoB)}};
    std::vector<CMatrix> gens;
    for (int i = 0; i < dims.dS; ++i)
        for (int j = 0; j < dims.dS; ++j) gens.push_back(kron(ketbra(dims.dS, i, j), rhoB));
    c.subspace = build_subspace(gens, dims);
    c.semigroup = SemigroupSpec::full(dims);
    c.expect("consistency", true, "construction");
    c.expect("dims.V", dims.dS * dims.dS, "construction");
    c.expect("dims.V0", 0, "construction");
    c.expect("dims.TrBV", dims.dS * dims.dS, "construction");
    for (const char* f : {"positive", "cp", "cpte", "cpze"}) c.expect(std::string("assignment.") + f, "yes", "analytic");
    for (const char* f : {"cp", "cpte", "cpze"}) c.expect(std::string("dynmap.") + f + ".all", "yes", "analytic");
    c.expect("osr.assignment.kraus", true, "analytic");
    c.expect("osr.dynmap.kraus", true, "analytic");
    c.expect("domain.full", true, "analytic");
    return c;
}

GalleryCase make_pechukas(const CMatrix& rhoSBeq, BipartiteDims dims) {
    require_state(rhoSBeq, "make_pechukas: rhoSBeq");
    if (rhoSBeq.rows() != dims.total()) throw DimensionError("make_pechukas: state has wrong size");
    const CMatrix rhoS = partial_trace_B(rhoSBeq, dims);
    if (min_eigenvalue(rhoS) <= 1e-9) throw DomainError("make_pechukas: reduced equilibrium state is singular");
    const CMatrix inv = kron(rhoS.inverse(), identity(dims.dB));
    GalleryCase c;
    c.name = "pechukas";
    c.description = "linear assignment [X rho_S^-1 rho_SB + rho_SB rho_S^-1 X]/2 on all of B(H_S)";
    c.parameters = {{"dS", dims.dS}, {"dB", dims.dB}, {"rhoSBeq", j_matrix(rhoSBeq)}};
    std::vector<CMatrix> gens;
    for (int i = 0; i < dims.dS; ++i)
        for (int j = 0; j < dims.dS; ++j) {
            const CMatrix x = kron(ketbra(dims.dS, i, j), identity(dims.dB));
            gens.push_back(0.5 * (x * inv * rhoSBeq + rhoSBeq * inv * x));
        }
    c.subspace = build_subspace(gens, dims);
    c.semigroup = SemigroupSpec::full(dims);
    if (dims.dS == 2) c.positivityHints = qubit_pure_hints();
    else
        for (int i = 0; i < dims.dS; ++i) c.positivityHints.push_back(ketbra(dims.dS, i, i));
    const CMatrix product = kron(rhoS, partial_trace_S(rhoSBeq, dims));
    const bool isProduct = max_abs(product - rhoSBeq) <= 1e-9;
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "numeric");
    c.expect("assignment.positive", isProduct ? "yes" : "no", "analytic");
    return c;
}

namespace {

// Fixed points of T(X) = sum V X V^dag, as a Hermitian orthonormal family.
std::vector<CMatrix> fixed_points(const std::vector<CMatrix>& ops, int d) {
    const auto basis = hermitian_basis(d);
    RMatrix m(d * d, d * d);
    for (int k = 0; k < d * d; ++k) {
        CMatrix t = CMatrix::Zero(d, d);
        for (const auto& v : ops) t += v * basis[k] * v.adjoint();
        m.col(k) = hvec(hermitian_part(t) - basis[k]);
    }
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV);
    const RVector s = svd.singularValues();
    std::vector<CMatrix> out;
    for (int k = 0; k < d * d; ++k)
        if (s(k) <= 1e-10 * std::max(1.0, s(0))) out.push_back(hmat(svd.matrixV().col(k), d));
    return out;
}

}  // namespace

GalleryCase make_alicki(const std::vector<CMatrix>& krausOps, const CMatrix& rhoSBeq, BipartiteDims dims) {
    require_state(rhoSBeq, "make_alicki: rhoSBeq");
    if (krausOps.empty()) throw DomainError("make_alicki: no operators");
    for (const auto& v : krausOps)
        if (v.rows() != dims.dS || v.cols() != dims.dS) throw DimensionError("make_alicki: operator has wrong size");
    std::vector<CMatrix> betas;
    std::vector<CMatrix> ops;
    for (const auto& v : krausOps) {
        const CMatrix w = kron(v.adjoint() * v, identity(dims.dB)) * rhoSBeq;
        const double den = w.trace().real();
        if (den <= 1e-12) throw DomainError("make_alicki: vanishing normalization Tr[(V^dag V (x) 1) rho]");
        betas.push_back(hermitian_part(partial_trace_S(w, dims)) / den);
        ops.push_back(v);
    }
    const auto fix = fixed_points(ops, dims.dS);
    if (fix.empty()) throw DomainError("make_alicki: T has no fixed points");
    for (const auto& f : fix) {
        CMatrix t = CMatrix::Zero(dims.dS, dims.dS);
        for (const auto& v : ops) t += v * f * v.adjoint();
        if (std::abs(t.trace() - f.trace()) > 1e-9) throw DomainError("make_alicki: T is not trace preserving on its fixed points");
    }
    std::vector<CMatrix> gens;
    for (const auto& f : fix) {
        CMatrix a = CMatrix::Zero(dims.total(), dims.total());
        for (size_t n = 0; n < ops.size(); ++n) a += kron(ops[n] * f * ops[n].adjoint(), betas[n]);
        gens.push_back(a);
    }
    GalleryCase c;
    c.name = "alicki";
    c.description = "CP assignment built from an operator-sum representation of T, domain = fixed points of T";
    c.parameters = {{"dS", dims.dS}, {"dB", dims.dB}, {"operators", static_cast<int>(ops.size())}};
    c.subspace = build_subspace(gens, dims);
    c.semigroup = SemigroupSpec::full(dims);
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "construction");
    c.expect("assignment.cp", "yes", "analytic");
    c.expect("dynmap.cp.all", "yes", "analytic");
    return c;
}

GalleryCase make_diff_bath_states(const CMatrix& rhoS, const CMatrix& rhoB1, const CMatrix& rhoB2) {
    require_state(rhoS, "make_diff_bath_states: rhoS");
    require_state(rhoB1, "make_diff_bath_states: rhoB1");
    require_state(rhoB2, "make_diff_bath_states: rhoB2");
    const BipartiteDims dims{static_cast<int>(rhoS.rows()), static_cast<int>(rhoB1.rows())};
    if (dims.dS != dims.dB || rhoB2.rows() != dims.dB) throw DimensionError("make_diff_bath_states: system and bath must match");
    GalleryCase c;
    c.name = "diff_bath_states";
    c.description = "rho_S (x) rho_B1 and rho_S (x) rho_B2 under the swap";
    c.parameters = {{"rhoS", j_matrix(rhoS)}, {"rhoB1", j_matrix(rhoB1)}, {"rhoB2", j_matrix(rhoB2)}};
    c.subspace = build_subspace({kron(rhoS, rhoB1), kron(rhoS, rhoB2)}, dims);
    const CMatrix swap = swap_operator(dims.dS, dims.dB);
    c.semigroup = SemigroupSpec::from_generators(dims, {swap});
    c.unitaries = {swap};
    c.unitaryLabels = {"swap"};
    const bool differ = max_abs(rhoB1 - rhoB2) > 1e-12;
    c.expect("consistency", !differ, "analytic");
    c.expect("dims.V0", differ ? 1 : 0, "construction");
    return c;
}

GalleryCase make_stelmachovic_buzek_cnot(cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw DomainError("make_stelmachovic_buzek_cnot: |alpha|^2 + |beta|^2 must be 1");
    const BipartiteDims dims{2, 2};
    CVector psi = CVector::Zero(4);
    psi(0) = alpha;
    psi(3) = beta;
    const CMatrix rho1 = std::norm(alpha) * ketbra(4, 0, 0) + std::norm(beta) * ketbra(4, 3, 3);
    const CMatrix rho2 = projector(psi);
    const CMatrix U = -I * (kron(ketbra(2, 1, 1), pauli(1)) + kron(ketbra(2, 0, 0), identity(2)));
    GalleryCase c;
    c.name = "stelmachovic_buzek_cnot";
    c.description = "classical mixture and superposition with equal reductions under CNOT";
    c.parameters = {{"alpha", {alpha.real(), alpha.imag()}}, {"beta", {beta.real(), beta.imag()}}};
    c.subspace = build_subspace({rho1, rho2}, dims);
    c.semigroup = SemigroupSpec::from_generators(dims, {U});
    c.unitaries = {U};
    c.unitaryLabels = {"cnot"};
    const bool trivial = std::abs(alpha) < 1e-12 || std::abs(beta) < 1e-12;
    c.expect("consistency", trivial, "analytic");
    c.expect("dims.V0", trivial ? 0 : 1, "construction");
    c.extra["reducedAfter1"] = j_matrix(partial_trace_B(U * rho1 * U.adjoint(), dims));
    c.extra["reducedAfter2"] = j_matrix(partial_trace_B(U * rho2 * U.adjoint(), dims));
    return c;
}

std::pair<GalleryCase, GalleryCase> make_stelmachovic_buzek(cplx alpha, cplx beta, const CMatrix& rhoT) {
    return {make_stelmachovic_buzek_cnot(alpha, beta), make_stelmachovic_buzek_swap(rhoT)};
}

GalleryCase make_stelmachovic_buzek_swap(const CMatrix& rhoT) {
    require_state(rhoT, "make_stelmachovic_buzek_swap: rho_S(T)");
    const int d = static_cast<int>(rhoT.rows());
    GalleryCase c = make_kraus({d, d}, rhoT);
    c.name = "stelmachovic_buzek_swap";
    c.description = "Kraus subspace with rho_B = rho_S(T) evolved by the swap";
    c.parameters = {{"rhoT", j_matrix(rhoT)}};
    const CMatrix swap = swap_operator(d, d);
    c.semigroup = SemigroupSpec::from_generators({d, d}, {swap});
    c.unitaries = {swap};
    c.unitaryLabels = {"swap"};
    c.expect("dynmap.constant", j_matrix(rhoT), "analytic", 1e-9);
    return c;
}

GalleryCase make_jss(double alpha, double beta, double omega) {
    if (!(alpha > -1.0 && alpha < 1.0 && beta > -1.0 && beta < 1.0)) throw DomainError("make_jss: alpha and beta must lie in (-1, 1)");
    const BipartiteDims dims{2, 2};
    const CMatrix a = alpha * identity(4) + kron(pauli(2), pauli(1));
    const CMatrix b = beta * identity(4) - kron(pauli(1), pauli(1));
    const auto excluded = orthonormalize({a, b});
    GalleryCase c;
    c.name = "jss";
    c.description = "orthogonal complement of span{alpha 1 + Y(x)X, beta 1 - X(x)X} under H = (omega/2) Z(x)X";
    c.parameters = {{"alpha", alpha}, {"beta", beta}, {"omega", omega}};
    c.subspace = build_subspace(hermitian_complement(excluded, 4), dims);
    c.semigroup = SemigroupSpec::from_hamiltonian(dims, 0.5 * omega * kron(pauli(3), pauli(1)));
    c.positivityHints = {ketbra(2, 0, 0)};
    const bool zero = alpha == 0.0 && beta == 0.0;
    c.expect("consistency", true, "analytic");
    c.expect("dims.V", 14, "analytic");
    c.expect("dims.V0", 10, "analytic");
    c.expect("dims.TrBV", 4, "analytic");
    c.expect("assignment.positive", zero ? "yes" : "no", "analytic");
    if (zero) c.expect("assignment.cp", "yes", "analytic");
    return c;
}

CMatrix carteret_unitary(double theta) {
    CMatrix u = identity(4);
    u(1, 1) = std::cos(theta);
    u(1, 2) = std::sin(theta);
    u(2, 1) = -std::sin(theta);
    u(2, 2) = std::cos(theta);
    return u;
}

CMatrix carteret_choi_display(double a, double theta) {
    const CMatrix zz = kron(pauli(3), pauli(3));
    const CMatrix iz = kron(pauli(0), pauli(3));
    const CMatrix xx = kron(pauli(1), pauli(1));
    const CMatrix yy = kron(pauli(2), pauli(2));
    const double c = std::cos(theta);
    return 0.5 * (identity(4) + c * c * zz + a * std::sin(2.0 * theta) * iz + c * (xx - yy));
}

GalleryCase make_carteret(double a, double theta, bool extendedRange) {
    const bool physical = a > -1.0 && a < 1.0 / 3.0;
    if (!physical && !(extendedRange && a > -1.0 && a < 1.0))
        throw DomainError(extendedRange ? "make_carteret: a must lie in (-1, 1)" : "make_carteret: a must lie in (-1, 1/3)");
    const BipartiteDims dims{2, 2};
    CMatrix corr = identity(4);
    for (int k = 1; k <= 3; ++k) corr += a * kron(pauli(k), pauli(k));
    std::vector<CMatrix> gens;
    for (int k = 1; k <= 3; ++k) gens.push_back(kron(pauli(k), identity(2)));
    gens.push_back(corr);
    GalleryCase c;
    c.name = "carteret";
    c.description = "span{sigma_i (x) 1, 1 + a sum sigma_i (x) sigma_i} with a partial-swap unitary U(theta)";
    c.parameters = {{"a", a}, {"theta", theta}};
    c.subspace = build_subspace(gens, dims);
    c.semigroup = SemigroupSpec::full(dims);
    c.unitaries = {carteret_unitary(theta)};
    c.unitaryLabels = {"U(theta)"};
    c.positivityHints = qubit_pure_hints();
    const CMatrix display = carteret_choi_display(a, theta);
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "construction");
    c.expect("dynmap.choi.inputOutput", j_matrix(display), "analytic", 1e-9);
    c.expect("dynmap.cp.all", min_eigenvalue(display) >= -1e-9 ? "yes" : "no", "analytic");
    c.expect("assignment.positive", a == 0.0 ? "yes" : "no", "analytic");
    if (physical) {
        const double radius = a >= 0.0 ? std::sqrt((1.0 + a) * (1.0 - 3.0 * a)) : 1.0 + a;
        add_bloch_probes(c, radius, "analytic", 0.02);
    } else {
        c.extra["note"] = "a >= 1/3: V holds no states; the maps are evaluated algebraically";
    }
    return c;
}

GalleryCase make_zero_discord(const CMatrix& basis, const std::vector<CMatrix>& sigmas) {
    const int dS = static_cast<int>(basis.rows());
    if (!is_unitary(basis)) throw DomainError("make_zero_discord: basis is not orthonormal");
    if (static_cast<int>(sigmas.size()) != dS) throw DimensionError("make_zero_discord: need one bath state per basis vector");
    const int dB = static_cast<int>(sigmas.front().rows());
    std::vector<CMatrix> gens;
    for (int i = 0; i < dS; ++i) {
        require_state(sigmas[i], "make_zero_discord: sigma");
        gens.push_back(kron(projector(basis.col(i)), sigmas[i]));
    }
    GalleryCase c;
    c.name = "zero_discord";
    c.description = "span{|i><i| (x) sigma_i}";
    c.parameters = {{"dS", dS}, {"dB", dB}};
    c.subspace = build_subspace(gens, {dS, dB});
    c.semigroup = SemigroupSpec::full({dS, dB});
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "construction");
    for (const char* f : {"positive", "cp", "cpze"}) c.expect(std::string("assignment.") + f, "yes", "analytic");
    c.expect("dynmap.cp.all", "yes", "analytic");
    c.expect("dynmap.cpze.all", "yes", "analytic");
    c.expect("osr.assignment.kraus", true, "analytic");
    return c;
}

GalleryCase make_shabani_lidar(const CMatrix& basis, const std::vector<CMatrix>& phis, int dB) {
    const int dS = static_cast<int>(basis.rows());
    if (!is_unitary(basis)) throw DomainError("make_shabani_lidar: basis is not orthonormal");
    if (static_cast<int>(phis.size()) != dS * dS) throw DimensionError("make_shabani_lidar: need dS^2 bath operators");
    std::vector<CMatrix> gens;
    for (int i = 0; i < dS; ++i)
        for (int j = 0; j < dS; ++j) {
            const CMatrix& phi = phis[i * dS + j];
            if (phi.rows() != dB || phi.cols() != dB) throw DimensionError("make_shabani_lidar: bath operator has wrong size");
            if (phi.norm() == 0.0) continue;
            gens.push_back(kron(basis.col(i) * basis.col(j).adjoint(), phi));
        }
    GalleryCase c;
    c.name = "shabani_lidar";
    c.description = "span{|i><j| (x) phi_ij}";
    c.parameters = {{"dS", dS}, {"dB", dB}};
    c.subspace = build_subspace(gens, {dS, dB});
    if (!c.subspace.selfAdjointVerified) throw DomainError("make_shabani_lidar: span is not self-adjoint");
    const auto spanned = check_state_spanned(c.subspace);
    if (spanned.status != SpanStatus::Verified) throw DomainError("make_shabani_lidar: span is not spanned by states");
    c.subspace.stateSpannedStatus = SpanStatus::Verified;
    bool anyDiscord = false;
    for (const auto& s : spanned.states)
        if (discordant_over_grid(s, {dS, dB}, 50)) anyDiscord = true;
    // A subspace holding a discordant state: the sum of the spanning states is generic.
    CMatrix mix = CMatrix::Zero(dS * dB, dS * dB);
    for (const auto& s : spanned.states) mix += s;
    mix /= static_cast<double>(spanned.states.size());
    if (discordant_over_grid(mix, {dS, dB}, 50)) anyDiscord = true;
    c.semigroup = SemigroupSpec::full({dS, dB});
    c.extra["discordantStateFound"] = anyDiscord;
    c.samples = anyDiscord ? 100 : 20;
    c.expect("consistency", true, "numeric");
    if (anyDiscord) c.expect("dynmap.cp.someNo", true, "analytic");
    else c.expect("dynmap.cp.all", "yes", "analytic");
    return c;
}

GalleryCase make_brodutch(const CMatrix& basis, const std::vector<CMatrix>& sigmas, double weight) {
    const int dS = static_cast<int>(basis.rows());
    if (dS < 2 || !is_unitary(basis)) throw DomainError("make_brodutch: need an orthonormal basis with dS >= 2");
    if (static_cast<int>(sigmas.size()) != dS + 1) throw DimensionError("make_brodutch: need sigma_plus, sigma_0..sigma_{dS-1}");
    for (const auto& s : sigmas) require_state(s, "make_brodutch: sigma");
    if (weight < 0.0) throw DomainError("make_brodutch: weight must be nonnegative");
    const int dB = static_cast<int>(sigmas.front().rows());
    const CVector plus = (basis.col(0) + basis.col(1)) / std::sqrt(2.0);
    const CMatrix rho01 = kron(projector(basis.col(0)), sigmas[1]) + kron(projector(basis.col(1)), sigmas[2]) +
                          weight * kron(projector(plus), sigmas[0]);
    std::vector<CMatrix> gens{rho01};
    for (int i = 2; i < dS; ++i) gens.push_back(kron(projector(basis.col(i)), sigmas[i + 1]));
    GalleryCase c;
    c.name = "brodutch";
    c.description = "span{rho_01} u {|i><i| (x) sigma_i, i >= 2} with rho_01 discordant";
    c.parameters = {{"dS", dS}, {"dB", dB}, {"weight", weight}};
    c.subspace = build_subspace(gens, {dS, dB});
    c.semigroup = SemigroupSpec::full({dS, dB});
    const CMatrix state = rho01 / rho01.trace().real();
    c.extra["rho01"] = j_matrix(state);
    c.observed["discordant"] = discordant_over_grid(state, {dS, dB});
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "construction");
    c.expect("dynmap.cpze.all", "yes", "analytic");
    c.expect("discordant", weight > 0.0, "analytic");
    return c;
}

GalleryCase make_buscemi(const CMatrix& rhoRSB, std::array<int, 3> dims) {
    const auto report = conditional_mutual_information(rhoRSB, dims);
    if (report.conditionalMutualInformation > 1e-8)
        throw DomainError("make_buscemi: I(R:B|S) = " + std::to_string(report.conditionalMutualInformation) + " exceeds 1e-8");
    const int dR = dims[0];
    const BipartiteDims sb{dims[1], dims[2]};
    const int n = sb.total();
    // Tr_R[(E_kl (x) 1) rho] = <l|_R rho |k>_R.
    std::vector<CMatrix> gens;
    for (int k = 0; k < dR; ++k)
        for (int l = 0; l < dR; ++l) gens.push_back(rhoRSB.block(l * n, k * n, n, n));
    GalleryCase c;
    c.name = "buscemi";
    c.description = "span of Tr_R[(L (x) 1) rho_RSB] for a Markov-chain state rho_RSB";
    c.parameters = {{"dR", dR}, {"dS", sb.dS}, {"dB", sb.dB}};
    c.subspace = build_subspace(gens, sb);
    c.semigroup = SemigroupSpec::full(sb);
    c.extra["entropies"] = {{"S_R", report.sR},   {"S_S", report.sS},   {"S_B", report.sB},
                            {"S_RS", report.sRS}, {"S_SB", report.sSB}, {"S_RSB", report.sRSB},
                            {"I(R:B|S)", report.conditionalMutualInformation}};
    c.observed["cmi"] = report.conditionalMutualInformation;
    c.expect("cmi", 0.0, "construction", 1e-8);
    c.expect("dynmap.cp.all", "yes", "analytic");
    return c;
}

GalleryCase make_choi_effros_counterexample(const CMatrix& rhoB) {
    require_state(rhoB, "make_choi_effros_counterexample: rhoB");
    const BipartiteDims dims{3, static_cast<int>(rhoB.rows())};
    std::vector<CMatrix> gens;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!((i == 0 && j == 1) || (i == 1 && j == 0))) gens.push_back(kron(ketbra(3, i, j), rhoB));
    GalleryCase c;
    c.name = "choi_effros_counterexample";
    c.description = "span{|i><j| (x) rho : (i,j) not in {(0,1),(1,0)}}: CP but not CPZE";
    c.parameters = {{"rhoB", j_matrix(rhoB)}};
    c.subspace = build_subspace(gens, dims);
    c.semigroup = SemigroupSpec::full(dims);
    c.expect("consistency", true, "construction");
    c.expect("dims.TrBV", 7, "construction");
    c.expect("assignment.projectionChoiMin", 1.0 - std::sqrt(2.0), "analytic", 1e-9);
    c.expect("assignment.cp", "yes", "analytic");
    c.expect("assignment.cpze", "no", "analytic");
    return c;
}

GalleryCase make_consistent_positive_counterexample(int dS, int dB) {
    if (dS < 2 || dB < 1) throw DomainError("make_consistent_positive_counterexample: need dS >= 2, dB >= 1");
    const BipartiteDims dims{dS, dB};
    const int n = dims.total();
    const CMatrix rho = identity(n) / static_cast<double>(n);
    const CMatrix psi = ketbra(dS, 0, 0);
    const CMatrix sigma = kron(psi, ketbra(dB, 0, 0));
    GalleryCase c;
    c.name = "consistent_positive_counterexample";
    c.description = "span{1/(dS dB), |psi><psi| (x) |phi><phi|}: non-positive assignment, CPZE dynamical maps";
    c.parameters = {{"dS", dS}, {"dB", dB}};
    c.subspace = build_subspace({rho, sigma}, dims);
    c.semigroup = SemigroupSpec::full(dims);
    // Reduction of a rho + b sigma with a = 1, b = -0.3.
    const CMatrix hint = partial_trace_B(rho - 0.3 * sigma, dims);
    c.positivityHints = {hint};
    const CMatrix thin = (identity(dS) - psi) / static_cast<double>(dS - 1);
    c.probes.push_back({"segment", psi, thin - psi, 1.0});
    const double tEnd = static_cast<double>(dS * dB - dB) / static_cast<double>(dS * dB - 1);
    c.expect("consistency", true, "construction");
    c.expect("dims.V0", 0, "construction");
    c.expect("assignment.positive", "no", "analytic");
    if (0.3 >= 1.0 / n && 0.3 <= 1.0 / dS)
        c.expect("assignment.positiveWitnessEigenvalue", 1.0 / n - 0.3, "numeric", 1e-9);
    c.expect("dynmap.cpze.all", "yes", "analytic");
    c.expect("domain.extent.segment", tEnd, "analytic", 1e-8);
    c.extra["physicalEndpoint"] = j_matrix((static_cast<double>(dB) * identity(dS) - psi) / static_cast<double>(dS * dB - 1));
    c.extra["thinEndpoint"] = j_matrix(thin);
    c.membershipQueries.push_back({"thinEnd", thin});
    c.membershipQueries.push_back({"center", psi});
    c.expect("domain.membership.thinEnd", "outside", "analytic");
    c.expect("domain.membership.center", "inside", "construction");
    return c;
}

CMatrix buscemi_markov_state(int family, std::uint64_t seed, std::array<int, 3>& dims) {
    Rng rng(seed);
    auto entangled = [&](int n) { return CMatrix(0.9 * projector(rng.pure_state(n)) + 0.1 * identity(n) / static_cast<double>(n)); };
    switch (family) {
        case 0:
        case 1: {
            const int dS = family == 0 ? 2 : 3;
            dims = {2, dS, 2};
            CMatrix rho = CMatrix::Zero(4 * dS, 4 * dS);
            double total = 0.0;
            std::vector<double> p;
            for (int k = 0; k < dS; ++k) {
                p.push_back(0.2 + rng.uniform());
                total += p.back();
            }
            for (int k = 0; k < dS; ++k)
                rho += (p[k] / total) * kron(rng.density_matrix(2), kron(ketbra(dS, k, k), rng.density_matrix(2)));
            return rho;
        }
        case 2: {
            // S = (S_L of dim 2) (+) 1.
            dims = {2, 3, 2};
            CMatrix J = CMatrix::Zero(3, 2);
            J(0, 0) = J(1, 1) = 1.0;
            const CMatrix emb = kron(identity(2), J);
            const double p = 0.3 + 0.4 * rng.uniform();
            const CMatrix block1 = kron(emb * entangled(4) * emb.adjoint(), rng.density_matrix(2));
            const CMatrix block2 = kron(rng.density_matrix(2), kron(ketbra(3, 2, 2), rng.density_matrix(2)));
            return p * block1 + (1.0 - p) * block2;
        }
        case 3:
            // S = S_L (x) S_R with R-S_L and S_R-B entangled.
            dims = {2, 4, 2};
            return kron(entangled(4), entangled(4));
        case 4: {
            // S = (S_R of dim 2) (+) 1 with S_R-B entangled.
            dims = {2, 3, 2};
            CMatrix J = CMatrix::Zero(3, 2);
            J(0, 0) = J(1, 1) = 1.0;
            const CMatrix emb = kron(J, identity(2));
            const double p = 0.3 + 0.4 * rng.uniform();
            const CMatrix block1 = kron(rng.density_matrix(2), emb * entangled(4) * emb.adjoint());
            const CMatrix block2 = kron(rng.density_matrix(2), kron(ketbra(3, 2, 2), rng.density_matrix(2)));
            return p * block1 + (1.0 - p) * block2;
        }
        default: throw DomainError("buscemi_markov_state: family must be 0..4");
    }
}

bool cq_state_test(const CMatrix& rhoSB, const CMatrix& basis, BipartiteDims dims, double tol) {
    if (rhoSB.rows() != dims.total() || basis.rows() != dims.dS) throw DimensionError("cq_state_test: size mismatch");
    CMatrix dephased = CMatrix::Zero(dims.total(), dims.total());
    for (int i = 0; i < dims.dS; ++i) {
        const CMatrix p = kron(projector(basis.col(i)), identity(dims.dB));
        dephased += p * rhoSB * p;
    }
    return max_abs(dephased - rhoSB) <= tol;
}

bool discordant_over_grid(const CMatrix& rhoSB, BipartiteDims dims, int randomBases, std::uint64_t seed) {
    if (cq_state_test(rhoSB, identity(dims.dS), dims)) return false;
    Rng rng(seed);
    for (int k = 0; k < randomBases; ++k)
        if (cq_state_test(rhoSB, rng.haar_unitary(dims.dS), dims)) return false;
    return true;
}

SLForm sl_form_check(const OperatorSubspace& v, const CMatrix& basis) {
    const BipartiteDims dims = v.dims;
    const int dS = dims.dS, dB = dims.dB;
    const CMatrix rot = kron(basis, identity(dB));
    std::vector<CMatrix> rotated;
    for (const auto& b : v.basis) rotated.push_back(rot.adjoint() * b * rot);
    for (int i = 0; i < dS; ++i)
        for (int j = 0; j < dS; ++j) {
            std::vector<CMatrix> blocks;
            for (const auto& x : rotated) blocks.push_back(x.block(i * dB, j * dB, dB, dB));
            if (orthonormalize(blocks, 1e-9).size() > 1) return SLForm::NotSLForm;
            // V must be the sum of its block projections.
            const CMatrix pi = kron(projector(basis.col(i)), identity(dB));
            const CMatrix pj = kron(projector(basis.col(j)), identity(dB));
            for (const auto& x : v.basis) {
                const CMatrix part = pi * x * pj;
                if (span_residual(v.basis, part) > 1e-9 * std::max(1.0, hs_norm(part))) return SLForm::NotSLForm;
            }
        }
    return SLForm::SLForm;
}

bool is_kraus_form(const OperatorSubspace& v, double tol) {
    const BipartiteDims dims = v.dims;
    if (v.dim() != dims.dS * dims.dS) return false;
    const CMatrix p = orthogonal_projection(v.basis, identity(dims.total()));
    const CMatrix y = partial_trace_S(p, dims);
    const double t = y.trace().real();
    if (std::abs(t) <= tol) return false;
    const CMatrix rhoB = hermitian_part(y / t);
    if (min_eigenvalue(rhoB) < -tol) return false;
    for (int i = 0; i < dims.dS; ++i)
        for (int j = 0; j < dims.dS; ++j)
            if (span_residual(v.basis, kron(ketbra(dims.dS, i, j), rhoB)) > tol) return false;
    return true;
}

bool domain_is_full(const OperatorSubspace& v, std::uint64_t seed, int randomStates) {
    const AssignmentMap a = build_assignment(v);
    const int dS = v.dims.dS;
    if (a.dim() != dS * dS) return false;
    std::vector<CMatrix> states;
    for (int i = 0; i < dS; ++i) {
        states.push_back(ketbra(dS, i, i));
        for (int j = i + 1; j < dS; ++j) {
            CVector s = ket(dS, i) + ket(dS, j);
            states.push_back(pure(s));
            s = ket(dS, i) + I * ket(dS, j);
            states.push_back(pure(s));
        }
    }
    Rng rng(seed);
    for (int k = 0; k < randomStates; ++k) states.push_back(projector(rng.pure_state(dS)));
    for (const auto& s : states)
        if (physical_domain_membership(a, s, {}, 5000).verdict != DomainVerdict::Inside) return false;
    return true;
}

std::vector<std::string> gallery_names() {
    return {"kraus",
            "pechukas",
            "alicki",
            "diff_bath_states",
            "stelmachovic_buzek_cnot",
            "stelmachovic_buzek_swap",
            "jss",
            "carteret",
            "zero_discord",
            "shabani_lidar",
            "brodutch",
            "buscemi",
            "choi_effros_counterexample",
            "consistent_positive_counterexample"};
}

namespace {

class Params {
public:
    Params(std::string name, const ParamMap& given, ParamMap defaults)
        : name_(std::move(name)), values_(std::move(defaults)) {
        for (const auto& [k, v] : given) {
            if (!values_.count(k)) {
                std::string allowed;
                for (const auto& [d, _] : values_) allowed += (allowed.empty() ? "" : ", ") + d;
                throw DomainError("gallery case " + name_ + ": unknown parameter \"" + k + "\" (allowed: " +
                                  (allowed.empty() ? "none" : allowed) + ")");
            }
            values_[k] = v;
        }
    }
    double get(const std::string& k) const { return values_.at(k); }
    int integer(const std::string& k) const {
        const double v = get(k);
        if (v != std::floor(v)) throw DomainError("gallery case " + name_ + ": parameter " + k + " must be an integer");
        return static_cast<int>(v);
    }
    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : values_) j[k] = v;
        return j;
    }

private:
    std::string name_;
    ParamMap values_;
};

CMatrix werner_like(double p) {
    CVector phi = CVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    return p * projector(phi) + (1.0 - p) * identity(4) / 4.0;
}

CMatrix bloch_state(double x, double y, double z) {
    if (x * x + y * y + z * z > 1.0 + 1e-12) throw DomainError("Bloch vector longer than 1");
    return 0.5 * (identity(2) + x * pauli(1) + y * pauli(2) + z * pauli(3));
}

}  // namespace

GalleryCase make_gallery_case(const std::string& name, const ParamMap& params) {
    GalleryCase c;
    Params p(name, {}, {});
    if (name == "kraus") {
        p = Params(name, params, {{"dS", 2}, {"dB", 2}, {"p", 1.0}});
        const int dB = p.integer("dB");
        const double w = p.get("p");
        c = make_kraus({p.integer("dS"), dB}, w * ketbra(dB, 0, 0) + (1.0 - w) * identity(dB) / static_cast<double>(dB));
    } else if (name == "pechukas") {
        p = Params(name, params, {{"p", 0.6}});
        c = make_pechukas(werner_like(p.get("p")), {2, 2});
    } else if (name == "alicki") {
        p = Params(name, params, {{"variant", 1}, {"p", 0.5}});
        std::vector<CMatrix> ops;
        switch (p.integer("variant")) {
            case 0: ops = {identity(2)}; break;
            case 1: ops = {ketbra(2, 0, 0), ketbra(2, 1, 1)}; break;
            case 2: ops = {identity(2) / std::sqrt(2.0), pauli(3) / std::sqrt(2.0)}; break;
            default: throw DomainError("gallery case alicki: variant must be 0, 1 or 2");
        }
        c = make_alicki(ops, werner_like(p.get("p")), {2, 2});
    } else if (name == "diff_bath_states") {
        p = Params(name, params, {{"q", 0.7}});
        const double q = p.get("q");
        c = make_diff_bath_states(q * ketbra(2, 0, 0) + (1.0 - q) * ketbra(2, 1, 1), ketbra(2, 0, 0), pure(plus_state()));
    } else if (name == "stelmachovic_buzek_cnot") {
        p = Params(name, params, {{"alpha", 1.0 / std::sqrt(2.0)}, {"beta", 1.0 / std::sqrt(2.0)}, {"phase", 0.0}});
        c = make_stelmachovic_buzek_cnot(p.get("alpha"), p.get("beta") * std::exp(I * p.get("phase")));
    } else if (name == "stelmachovic_buzek_swap") {
        p = Params(name, params, {{"x", 0.0}, {"y", 0.0}, {"z", 0.0}});
        c = make_stelmachovic_buzek_swap(bloch_state(p.get("x"), p.get("y"), p.get("z")));
    } else if (name == "jss") {
        p = Params(name, params, {{"alpha", 0.3}, {"beta", 0.2}, {"omega", 1.0}});
        c = make_jss(p.get("alpha"), p.get("beta"), p.get("omega"));
    } else if (name == "carteret") {
        p = Params(name, params, {{"a", 0.2}, {"theta", M_PI / 4.0}});
        c = make_carteret(p.get("a"), p.get("theta"), true);
    } else if (name == "zero_discord") {
        p = Params(name, params, {{"dS", 2}, {"dB", 2}, {"seed", 11}});
        Rng rng(static_cast<std::uint64_t>(p.integer("seed")));
        std::vector<CMatrix> sigmas;
        for (int i = 0; i < p.integer("dS"); ++i) sigmas.push_back(rng.density_matrix(p.integer("dB")));
        c = make_zero_discord(identity(p.integer("dS")), sigmas);
    } else if (name == "shabani_lidar") {
        p = Params(name, params, {{"discordant", 1}, {"p", 0.8}, {"seed", 11}});
        std::vector<CMatrix> phis(4, CMatrix::Zero(2, 2));
        if (p.integer("discordant") != 0) {
            CVector psi = (kron(ket(2, 0), ket(2, 0)) + kron(ket(2, 1), plus_state())) / std::sqrt(2.0);
            const double w = p.get("p");
            const CMatrix rho = w * projector(psi) + (1.0 - w) * identity(4) / 4.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) phis[i * 2 + j] = rho.block(i * 2, j * 2, 2, 2);
        } else {
            Rng rng(static_cast<std::uint64_t>(p.integer("seed")));
            phis[0] = rng.density_matrix(2);
            phis[3] = rng.density_matrix(2);
        }
        c = make_shabani_lidar(identity(2), phis, 2);
    } else if (name == "brodutch") {
        p = Params(name, params, {{"dS", 3}, {"dB", 2}, {"weight", 1.0}, {"seed", 5}});
        Rng rng(static_cast<std::uint64_t>(p.integer("seed")));
        std::vector<CMatrix> sigmas;
        for (int i = 0; i <= p.integer("dS"); ++i) sigmas.push_back(rng.density_matrix(p.integer("dB")));
        c = make_brodutch(identity(p.integer("dS")), sigmas, p.get("weight"));
    } else if (name == "buscemi") {
        p = Params(name, params, {{"family", 0}, {"seed", 1}});
        std::array<int, 3> dims{};
        const CMatrix rho = buscemi_markov_state(p.integer("family"), static_cast<std::uint64_t>(p.integer("seed")), dims);
        c = make_buscemi(rho, dims);
    } else if (name == "choi_effros_counterexample") {
        p = Params(name, params, {{"p", 0.7}});
        const double w = p.get("p");
        c = make_choi_effros_counterexample(w * ketbra(2, 0, 0) + (1.0 - w) * ketbra(2, 1, 1));
    } else if (name == "consistent_positive_counterexample") {
        p = Params(name, params, {{"dS", 2}, {"dB", 2}});
        c = make_consistent_positive_counterexample(p.integer("dS"), p.integer("dB"));
    } else {
        throw DomainError("unknown gallery case \"" + name + "\"");
    }
    c.name = name;
    c.parameters = p.to_json();
    return c;
}

}  // namespace cpkit
