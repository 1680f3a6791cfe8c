#pragma once

#include "cpkit/cpclass.hpp"
#include "cpkit/linalg.hpp"
#include "cpkit/opspace.hpp"
#include "cpkit/tolerances.hpp"

#include <vector>

namespace cpkit {

// A_V : Tr_B V -> V / V0. representatives[m] is the element of the class
// A_V(source[m]) orthogonal to V0.
struct AssignmentMap {
    BipartiteDims dims;
    std::vector<CMatrix> source;           // orthonormal Hermitian basis of Tr_B V
    std::vector<CMatrix> representatives;  // Tr_B representatives[m] = source[m]
    std::vector<CMatrix> v0Basis;
    std::vector<CMatrix> complementBasis;  // orthonormal basis of V0^perp in V
    RMatrix matrixForm;                    // source coordinates -> complementBasis coordinates
    std::vector<CMatrix> knownStates;      // density matrices in V

    int dim() const { return static_cast<int>(source.size()); }
    double domain_residual(const CMatrix& x) const;
    // Canonical representative of A_V(x); x must lie in Tr_B V.
    CMatrix evaluate(const CMatrix& x) const;
    SubspaceMap as_subspace_map() const;

    double consistency_residual() const;  // max ||Tr_B rep_m - source_m||
    double trace_residual() const;
    double dagger_residual() const;
};

AssignmentMap build_assignment(const OperatorSubspace& v, const Tolerances& tol = {});

// F(X) = sum_k a_k K_k X K_k^dag.
struct OSRData {
    std::vector<double> coefficients;
    std::vector<CMatrix> operators;

    CMatrix apply(const CMatrix& x) const;
    bool kraus_form(double tol = 1e-9) const;
    double min_coefficient() const;
};

// Spectral decomposition of a Choi matrix C = sum_ij F(E_ij) (x) E_ij on C^dOut (x) C^dIn.
OSRData osr_from_choi(const CMatrix& choi, int dOut, int dIn, double dropTol = 1e-12);

// OSR of the zero-extended assignment map. A positive element of the Choi class is
// used when one is found, else the canonical representative.
struct AssignmentOSR {
    OSRData osr;
    CMatrix choi;
    bool positiveClassElement = false;
};
AssignmentOSR assignment_osr(const AssignmentMap& a, int iterationCap = 5000);

// Linear map on all of B(C^dIn) stored by its Choi matrix.
struct LinearMap {
    int dIn = 0;
    int dOut = 0;
    CMatrix choi;
    CMatrix apply(const CMatrix& x) const { return apply_from_choi(choi, x, dOut, dIn); }
};

LinearMap zero_extend(const AssignmentMap& a);

}  // namespace cpkit
