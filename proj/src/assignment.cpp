#include "cpkit/assignment.hpp"

#include "cpkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cpkit {

double AssignmentMap::domain_residual(const CMatrix& x) const { return span_residual(source, x); }

CMatrix AssignmentMap::evaluate(const CMatrix& x) const {
    if (x.rows() != dims.dS || x.cols() != dims.dS) throw DimensionError("AssignmentMap::evaluate: input must be dS x dS");
    if (domain_residual(x) > 1e-8 * std::max(1.0, hs_norm(x)))
        throw DomainError("AssignmentMap::evaluate: input lies outside Tr_B V");
    CMatrix out = CMatrix::Zero(dims.total(), dims.total());
    for (int m = 0; m < dim(); ++m) out += hs_inner(source[m], x) * representatives[m];
    return out;
}

SubspaceMap AssignmentMap::as_subspace_map() const {
    SubspaceMap f;
    f.dIn = dims.dS;
    f.dOut = dims.total();
    f.domainBasis = source;
    f.images = representatives;
    f.quotientBasis = v0Basis;
    for (const auto& s : knownStates) f.domainStates.push_back(partial_trace_B(s, dims));
    return f;
}

double AssignmentMap::consistency_residual() const {
    double r = 0.0;
    for (int m = 0; m < dim(); ++m) r = std::max(r, hs_norm(partial_trace_B(representatives[m], dims) - source[m]));
    return r;
}

double AssignmentMap::trace_residual() const {
    double r = 0.0;
    for (int m = 0; m < dim(); ++m) r = std::max(r, std::abs(representatives[m].trace() - source[m].trace()));
    return r;
}

double AssignmentMap::dagger_residual() const {
    // Sources are Hermitian, so rep(X^dag) = rep(X)^dag reduces to Hermitian representatives modulo V0.
    double r = 0.0;
    for (const auto& rep : representatives) {
        const CMatrix d = rep - rep.adjoint();
        r = std::max(r, hs_norm(d - orthogonal_projection(v0Basis, d)));
    }
    return r;
}

AssignmentMap build_assignment(const OperatorSubspace& v, const Tolerances& tol) {
    const auto kd = kernel_decomposition(v, tol.kernel);
    if (kd.reducedBasis.empty()) throw DomainError("build_assignment: Tr_B V is trivial");
    AssignmentMap a;
    a.dims = v.dims;
    a.v0Basis = kd.v0Basis;
    a.complementBasis = kd.complementBasis;
    const int r = static_cast<int>(kd.reducedBasis.size());
    a.matrixForm = RMatrix::Zero(r, r);
    for (int j = 0; j < r; ++j) {
        const double s = kd.singularValues[j];
        a.source.push_back(kd.reducedBasis[j] / s);
        a.representatives.push_back(kd.complementBasis[j] / s);
        a.matrixForm(j, j) = 1.0 / s;
    }
    for (const auto& g : v.generators) {
        if (hermiticity_defect(g) > tol.hermiticity) continue;
        const double t = g.trace().real();
        if (t <= 1e-12 || min_eigenvalue(g) < -tol.psd * std::max(1.0, t)) continue;
        a.knownStates.push_back(hermitian_part(g) / t);
    }
    return a;
}

CMatrix OSRData::apply(const CMatrix& x) const {
    if (operators.empty()) return CMatrix::Zero(0, 0);
    CMatrix out = CMatrix::Zero(operators.front().rows(), operators.front().rows());
    for (size_t k = 0; k < operators.size(); ++k) out += coefficients[k] * operators[k] * x * operators[k].adjoint();
    return out;
}

bool OSRData::kraus_form(double tol) const { return min_coefficient() >= -tol; }

double OSRData::min_coefficient() const {
    double m = 0.0;
    for (double c : coefficients) m = std::min(m, c);
    return m;
}

OSRData osr_from_choi(const CMatrix& choi, int dOut, int dIn, double dropTol) {
    if (choi.rows() != dOut * dIn || choi.cols() != dOut * dIn) throw DimensionError("osr_from_choi: Choi matrix has wrong size");
    const auto e = eigh(HermitianMatrix::from_symmetrized(choi));
    const double scale = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
    OSRData osr;
    for (int k = 0; k < e.values.size(); ++k) {
        if (std::abs(e.values(k)) <= dropTol * scale) continue;
        CMatrix op(dOut, dIn);
        for (int row = 0; row < dOut; ++row)
            for (int i = 0; i < dIn; ++i) op(row, i) = e.vectors(row * dIn + i, k);
        osr.coefficients.push_back(e.values(k));
        osr.operators.push_back(op);
    }
    return osr;
}

AssignmentOSR assignment_osr(const AssignmentMap& a, int iterationCap) {
    const SubspaceMap f = a.as_subspace_map();
    AssignmentOSR out;
    out.choi = f.zero_extension_choi();
    out.positiveClassElement = min_eigenvalue(out.choi) >= -1e-9;
    if (!out.positiveClassElement && !a.v0Basis.empty()) {
        // Shifting the image of each source element by V0 keeps the class of the zero extension.
        std::vector<CMatrix> quotient;
        for (const auto& w : a.v0Basis)
            for (const auto& b : a.source) quotient.push_back(kron(w, b.conjugate()));
        CMatrix point;
        if (class_has_psd(out.choi, quotient, iterationCap, 1e-9, &point) == FeasStatus::Feasible) {
            // Snap back onto the class so reconstruction is exact modulo V0.
            const auto qonb = orthonormalize(quotient);
            const CMatrix snapped = hermitian_part(out.choi + orthogonal_projection(qonb, point - out.choi));
            if (min_eigenvalue(snapped) >= -1e-9) {
                out.choi = snapped;
                out.positiveClassElement = true;
            }
        }
    }
    out.osr = osr_from_choi(out.choi, a.dims.total(), a.dims.dS);
    return out;
}

LinearMap zero_extend(const AssignmentMap& a) {
    return LinearMap{a.dims.dS, a.dims.total(), a.as_subspace_map().zero_extension_choi()};
}

}  // namespace cpkit
