#include "cpkit/entropy.hpp"

#include "cpkit/errors.hpp"

#include <cmath>

namespace cpkit {

double von_neumann_entropy(const CMatrix& rho, double tol) {
    if (rho.rows() != rho.cols()) throw DimensionError("von_neumann_entropy: matrix is not square");
    if (hermiticity_defect(rho) > 1e-10) throw DomainError("von_neumann_entropy: matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) throw DomainError("von_neumann_entropy: trace is not 1");
    const auto e = eigh(HermitianMatrix::from_symmetrized(rho));
    if (e.values(0) < -tol) throw DomainError("von_neumann_entropy: matrix is not positive semidefinite");
    double s = 0.0;
    for (int k = 0; k < e.values.size(); ++k) {
        const double l = e.values(k);
        if (l > 0.0) s -= l * std::log(l);
    }
    return s;
}

EntropyReport conditional_mutual_information(const CMatrix& rhoRSB, std::array<int, 3> dims) {
    const std::vector<int> d{dims[0], dims[1], dims[2]};
    if (rhoRSB.rows() != dims[0] * dims[1] * dims[2]) throw DimensionError("conditional_mutual_information: size mismatch");
    EntropyReport r;
    r.sRSB = von_neumann_entropy(rhoRSB);
    r.sR = von_neumann_entropy(partial_trace(rhoRSB, d, {0}));
    r.sS = von_neumann_entropy(partial_trace(rhoRSB, d, {1}));
    r.sB = von_neumann_entropy(partial_trace(rhoRSB, d, {2}));
    r.sRS = von_neumann_entropy(partial_trace(rhoRSB, d, {0, 1}));
    r.sSB = von_neumann_entropy(partial_trace(rhoRSB, d, {1, 2}));
    r.conditionalMutualInformation = r.sRS + r.sSB - r.sS - r.sRSB;
    return r;
}

}  // namespace cpkit
