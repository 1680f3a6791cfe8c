#pragma once

#include "cpkit/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cpkit {

enum class SpanStatus { Verified, Refuted, Undetermined };
std::string to_string(SpanStatus s);

// Self-adjoint subspace V of B(H_S (x) H_B). The basis is orthonormal under
// hs_inner and consists of Hermitian matrices, so its complex span is V.
struct OperatorSubspace {
    BipartiteDims dims;
    std::vector<CMatrix> basis;
    std::vector<CMatrix> generators;  // as given; positive ones double as state certificates
    bool selfAdjointVerified = false;
    SpanStatus stateSpannedStatus = SpanStatus::Undetermined;

    int dim() const { return static_cast<int>(basis.size()); }
    int ambient() const { return dims.total(); }
};

struct KernelDecomposition {
    std::vector<CMatrix> v0Basis;          // orthonormal basis of V0 = ker(Tr_B|V)
    std::vector<CMatrix> complementBasis;  // orthonormal basis of V minus V0
    std::vector<CMatrix> reducedBasis;     // Tr_B of complementBasis, a basis of Tr_B V
    std::vector<double> singularValues;    // ||reducedBasis_k||
};

OperatorSubspace build_subspace(const std::vector<CMatrix>& generators, BipartiteDims dims, double rankTol = 1e-10);
KernelDecomposition kernel_decomposition(const OperatorSubspace& v, double kernelTol = 1e-9);

CMatrix orthogonal_projection(const std::vector<CMatrix>& onb, const CMatrix& x);
// Frobenius distance from x to span(onb).
double span_residual(const std::vector<CMatrix>& onb, const CMatrix& x);

struct SpanBudget {
    int halvings = 6;
    double delta0 = 0.1;
    int iterationCap = 5000;
};

struct StateSpanResult {
    SpanStatus status = SpanStatus::Undetermined;
    std::vector<CMatrix> states;  // linearly independent density matrices in V
    CMatrix direction;            // W in V orthogonal to every state found (Refuted only)
};

StateSpanResult check_state_spanned(const OperatorSubspace& v, const SpanBudget& budget = {});

}  // namespace cpkit
