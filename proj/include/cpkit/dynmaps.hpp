#pragma once

#include "cpkit/assignment.hpp"
#include "cpkit/cpclass.hpp"
#include "cpkit/linalg.hpp"
#include "cpkit/opspace.hpp"
#include "cpkit/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cpkit {

// Psi_U = Tr_B o Ad_U o A_V on Tr_B V.
struct DynamicalMap {
    BipartiteDims dims;
    std::vector<CMatrix> domainBasis;
    std::vector<CMatrix> images;
    HermitianMatrix choiOfZeroExtension;
    CMatrix unitary;
    double representativeShiftResidual = 0;  // image change under a random V0 shift
    std::vector<CMatrix> domainStates;

    int dim() const { return static_cast<int>(domainBasis.size()); }
    CMatrix apply(const CMatrix& x) const;
    SubspaceMap as_subspace_map() const;
    double trace_residual() const;
    double hermiticity_residual() const;
};

// Throws InconsistencyError when V0 is not mapped into ker Tr_B by U.
DynamicalMap build_dynamical_map(const AssignmentMap& a, const CMatrix& U, const Tolerances& tol = {},
                                 std::uint64_t seed = 1);

HermitianMatrix choi_matrix(const DynamicalMap& psi);
OSRData dynmap_osr(const DynamicalMap& psi);

enum class DomainVerdict { Inside, Outside, Undetermined };
std::string to_string(DomainVerdict v);

struct PhysicalDomainQuery {
    CMatrix state;
    DomainVerdict verdict = DomainVerdict::Undetermined;
    std::optional<CMatrix> certificate;  // state in V with this reduction (Inside)
    double residual = 0;                 // distance to Tr_B V, or feasibility residual
    CMatrix dualWitness;                 // separating direction (Outside by feasibility)
    std::string reason;
};

// Throws DomainError when rhoS is not a density matrix.
PhysicalDomainQuery physical_domain_membership(const OperatorSubspace& v, const CMatrix& rhoS, const Tolerances& tol = {},
                                               int iterationCap = 20000);
PhysicalDomainQuery physical_domain_membership(const AssignmentMap& a, const CMatrix& rhoS, const Tolerances& tol = {},
                                               int iterationCap = 20000);

// Largest t in [0, tMax] with inside + t * direction in the physical domain, by bisection.
// Undetermined queries count as outside.
double physical_domain_extent(const AssignmentMap& a, const CMatrix& inside, const CMatrix& direction, double tMax,
                              double precision = 1e-10, const Tolerances& tol = {}, int iterationCap = 20000);

}  // namespace cpkit
