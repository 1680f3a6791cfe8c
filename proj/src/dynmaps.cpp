#include "cpkit/dynmaps.hpp"

#include "cpkit/consistency.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/feasibility.hpp"
#include "cpkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace cpkit {

CMatrix DynamicalMap::apply(const CMatrix& x) const {
    if (x.rows() != dims.dS || x.cols() != dims.dS) throw DimensionError("DynamicalMap::apply: input must be dS x dS");
    if (span_residual(domainBasis, x) > 1e-8 * std::max(1.0, hs_norm(x)))
        throw DomainError("DynamicalMap::apply: input lies outside Tr_B V");
    CMatrix out = CMatrix::Zero(dims.dS, dims.dS);
    for (int m = 0; m < dim(); ++m) out += hs_inner(domainBasis[m], x) * images[m];
    return out;
}

SubspaceMap DynamicalMap::as_subspace_map() const {
    SubspaceMap f;
    f.dIn = f.dOut = dims.dS;
    f.domainBasis = domainBasis;
    f.images = images;
    f.domainStates = domainStates;
    return f;
}

double DynamicalMap::trace_residual() const {
    double r = 0.0;
    for (int m = 0; m < dim(); ++m) r = std::max(r, std::abs(images[m].trace() - domainBasis[m].trace()));
    return r;
}

double DynamicalMap::hermiticity_residual() const {
    double r = 0.0;
    for (const auto& im : images) r = std::max(r, hermiticity_defect(im));
    return r;
}

DynamicalMap build_dynamical_map(const AssignmentMap& a, const CMatrix& U, const Tolerances& tol, std::uint64_t seed) {
    const auto cv = check_u_consistency(a.v0Basis, a.dims, U, tol);
    if (!cv.consistent)
        throw InconsistencyError("build_dynamical_map: V is not U-consistent (||Tr_B(U X U^dag)|| = " +
                                 std::to_string(cv.witness ? cv.witness->norm : 0.0) + ")");
    DynamicalMap psi;
    psi.dims = a.dims;
    psi.domainBasis = a.source;
    psi.unitary = U;
    const CMatrix Ud = U.adjoint();
    for (const auto& rep : a.representatives) psi.images.push_back(partial_trace_B(U * rep * Ud, a.dims));
    for (const auto& s : a.knownStates) psi.domainStates.push_back(partial_trace_B(s, a.dims));

    if (!a.v0Basis.empty()) {
        Rng rng(seed);
        for (int m = 0; m < a.dim(); ++m) {
            CMatrix shift = CMatrix::Zero(a.dims.total(), a.dims.total());
            for (const auto& w : a.v0Basis) shift += rng.normal() * w;
            const CMatrix shifted = partial_trace_B(U * (a.representatives[m] + shift) * Ud, a.dims);
            psi.representativeShiftResidual = std::max(psi.representativeShiftResidual, hs_norm(shifted - psi.images[m]));
        }
    }
    psi.choiOfZeroExtension = HermitianMatrix::from_symmetrized(psi.as_subspace_map().zero_extension_choi());
    return psi;
}

HermitianMatrix choi_matrix(const DynamicalMap& psi) { return psi.choiOfZeroExtension; }

OSRData dynmap_osr(const DynamicalMap& psi) {
    return osr_from_choi(psi.choiOfZeroExtension.matrix(), psi.dims.dS, psi.dims.dS);
}

std::string to_string(DomainVerdict v) {
    switch (v) {
        case DomainVerdict::Inside: return "inside";
        case DomainVerdict::Outside: return "outside";
        case DomainVerdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace {

void validate_state(const CMatrix& rho, int dS, const Tolerances& tol) {
    if (rho.rows() != dS || rho.cols() != dS) throw DimensionError("physical_domain_membership: state must be dS x dS");
    if (!rho.allFinite()) throw DomainError("physical_domain_membership: state has non-finite entries");
    if (hermiticity_defect(rho) > tol.hermiticity) throw DomainError("physical_domain_membership: state is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) throw DomainError("physical_domain_membership: state does not have unit trace");
    if (min_eigenvalue(rho) < -tol.psd) throw DomainError("physical_domain_membership: state is not positive semidefinite");
}

}  // namespace

PhysicalDomainQuery physical_domain_membership(const AssignmentMap& a, const CMatrix& rhoS, const Tolerances& tol,
                                               int iterationCap) {
    validate_state(rhoS, a.dims.dS, tol);
    PhysicalDomainQuery q;
    q.state = rhoS;
    q.residual = a.domain_residual(rhoS);
    if (q.residual > 1e-8) {
        q.verdict = DomainVerdict::Outside;
        q.reason = "not in Tr_B V";
        return q;
    }
    const CMatrix rep = a.evaluate(rhoS);
    if (min_eigenvalue(rep) >= -tol.psd) {
        q.verdict = DomainVerdict::Inside;
        q.certificate = hermitian_part(rep);
        q.residual = 0.0;
        q.reason = "canonical preimage is a state";
        return q;
    }
    if (a.v0Basis.empty()) {
        q.verdict = DomainVerdict::Outside;
        q.residual = -min_eigenvalue(rep);
        q.reason = "unique preimage is not positive";
        return q;
    }
    FeasibilityProblem p;
    p.dim = a.dims.total();
    p.iterationCap = iterationCap;
    p.add_affine_membership(rep, a.v0Basis);
    const auto r = solve_feasibility(p);
    q.residual = r.residual;
    if (r.status == FeasStatus::Feasible) {
        // Snap onto the affine slice rep + V0; this keeps the reduction exact.
        const CMatrix c = hermitian_part(rep + orthogonal_projection(a.v0Basis, r.point - rep));
        if (min_eigenvalue(c) >= -tol.psd) {
            q.verdict = DomainVerdict::Inside;
            q.certificate = c;
            q.reason = "positive preimage found";
            return q;
        }
        q.reason = "feasible point lost positivity on the slice";
        return q;
    }
    if (r.status == FeasStatus::InfeasibleNumerically) {
        q.verdict = DomainVerdict::Outside;
        q.dualWitness = r.dualWitness;
        q.reason = "no positive preimage (persistent residual)";
        return q;
    }
    q.reason = "feasibility search hit the iteration cap";
    return q;
}

PhysicalDomainQuery physical_domain_membership(const OperatorSubspace& v, const CMatrix& rhoS, const Tolerances& tol,
                                               int iterationCap) {
    return physical_domain_membership(build_assignment(v, tol), rhoS, tol, iterationCap);
}

double physical_domain_extent(const AssignmentMap& a, const CMatrix& inside, const CMatrix& direction, double tMax,
                              double precision, const Tolerances& tol, int iterationCap) {
    auto in = [&](double t) {
        const CMatrix s = inside + t * direction;
        if (min_eigenvalue(s) < -tol.psd) return false;
        return physical_domain_membership(a, s, tol, iterationCap).verdict == DomainVerdict::Inside;
    };
    if (!in(0.0)) return -1.0;
    if (in(tMax)) return tMax;
    double lo = 0.0, hi = tMax;
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (in(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

}  // namespace cpkit
