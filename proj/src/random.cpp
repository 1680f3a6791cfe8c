#include "cpkit/random.hpp"

#include <cmath>

namespace cpkit {

int Rng::uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(engine_);
}

CMatrix Rng::ginibre(int rows, int cols) {
    CMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double re = normal();
            const double im = normal();
            g(i, j) = cplx(re, im) / std::sqrt(2.0);
        }
    return g;
}

CMatrix Rng::haar_unitary(int n) {
    const Eigen::MatrixXcd g = ginibre(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        const cplx d = r(k, k);
        const double a = std::abs(d);
        if (a > 0.0) q.col(k) *= d / a;
    }
    return q;
}

CMatrix Rng::local_unitary(BipartiteDims dims) { return kron(haar_unitary(dims.dS), haar_unitary(dims.dB)); }

CVector Rng::pure_state(int n) {
    CVector v = ginibre(n, 1).col(0);
    return v / v.norm();
}

CMatrix Rng::density_matrix(int n, int rank) {
    const int r = rank <= 0 ? n : rank;
    const CMatrix g = ginibre(n, r);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitian_part(rho);
}

CMatrix Rng::hermitian(int n) {
    const CMatrix g = ginibre(n, n);
    return hermitian_part(g);
}

}  // namespace cpkit
