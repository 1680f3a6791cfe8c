#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cpkit {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

struct BipartiteDims {
    int dS = 1;
    int dB = 1;
    int total() const { return dS * dB; }
};

// Square matrix that passed a hermiticity check. The stored matrix is exactly
// Hermitian (symmetrized after the check).
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& m, double tol = 1e-10);
    static HermitianMatrix from_symmetrized(const CMatrix& m);

    const CMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

private:
    CMatrix m_;
};

CMatrix identity(int n);
CMatrix zeros(int rows, int cols);
CMatrix dagger(const CMatrix& a);
CMatrix ketbra(int d, int i, int j);
CVector ket(int d, int i);
CMatrix projector(const CVector& v);
// 0 = identity, 1 = X, 2 = Y, 3 = Z.
CMatrix pauli(int k);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace_B(const CMatrix& x, BipartiteDims dims);
CMatrix partial_trace_S(const CMatrix& x, BipartiteDims dims);
// Traces out every factor not listed in keep (indices into dims, ascending).
CMatrix partial_trace(const CMatrix& x, const std::vector<int>& dims, const std::vector<int>& keep);
// Transposes the given tensor factor.
CMatrix partial_transpose(const CMatrix& x, const std::vector<int>& dims, int sys);
// Operator with its two tensor factors exchanged: SWAP x SWAP^dag for x on C^d1 (x) C^d2.
CMatrix swap_factors(const CMatrix& x, int d1, int d2);
CMatrix swap_operator(int d1, int d2);

cplx hs_inner(const CMatrix& a, const CMatrix& b);
double hs_norm(const CMatrix& a);
double max_abs(const CMatrix& a);
double hermiticity_defect(const CMatrix& a);
bool is_unitary(const CMatrix& u, double tol = 1e-9);

struct EigenDecomposition {
    RVector values;   // ascending
    CMatrix vectors;  // orthonormal columns
};

EigenDecomposition eigh(const HermitianMatrix& m);
double min_eigenvalue(const CMatrix& m);  // of the Hermitian part
bool is_psd(const CMatrix& m, double tol = 1e-9);
HermitianMatrix psd_project(const HermitianMatrix& m);
CMatrix sqrt_psd(const CMatrix& m);
CMatrix expm_hermitian(const CMatrix& h, double t);  // exp(-i h t)

// Modified Gram-Schmidt under hs_inner. Vectors whose residual norm is at most
// tol times the largest input norm are dropped.
std::vector<CMatrix> orthonormalize(const std::vector<CMatrix>& vectors, double tol = 1e-10);

// Real coordinates of Hermitian matrices in the orthonormal basis
// {E_ii} u {(E_ij+E_ji)/sqrt2, i(E_ij-E_ji)/sqrt2 : i<j}; hvec is an isometry
// from (Herm(n), hs_inner) onto R^{n^2}.
RVector hvec(const CMatrix& m);
CMatrix hmat(const RVector& v, int n);
std::vector<CMatrix> hermitian_basis(int n);

// Hermitian orthonormal basis of the orthogonal complement of span(onb) in Herm(n).
std::vector<CMatrix> hermitian_complement(const std::vector<CMatrix>& onb, int n, double tol = 1e-10);

CMatrix hermitian_part(const CMatrix& m);

}  // namespace cpkit
