#include "cpkit/linalg.hpp"

#include "cpkit/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cpkit {

namespace {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
}

void require_finite(const CMatrix& m) {
    if (!m.allFinite()) throw DomainError("matrix has non-finite entries");
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m, double tol) {
    require_square(m, "HermitianMatrix");
    require_finite(m);
    const double defect = hermiticity_defect(m);
    if (defect > tol)
        throw DomainError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::from_symmetrized(const CMatrix& m) {
    require_square(m, "HermitianMatrix");
    HermitianMatrix h;
    h.m_ = hermitian_part(m);
    return h;
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

CMatrix zeros(int rows, int cols) { return CMatrix::Zero(rows, cols); }

CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

CMatrix ketbra(int d, int i, int j) {
    CMatrix m = CMatrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

CVector ket(int d, int i) {
    CVector v = CVector::Zero(d);
    v(i) = 1.0;
    return v;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

CMatrix pauli(int k) {
    CMatrix p(2, 2);
    const cplx i(0.0, 1.0);
    switch (k) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, -i, i, 0; break;
        case 3: p << 1, 0, 0, -1; break;
        default: throw DomainError("pauli index must be 0..3");
    }
    return p;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMatrix partial_trace_B(const CMatrix& x, BipartiteDims dims) {
    const int n = dims.total();
    if (x.rows() != n || x.cols() != n)
        throw DimensionError("partial_trace_B: matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", dims require " + std::to_string(n));
    CMatrix out = CMatrix::Zero(dims.dS, dims.dS);
    for (int i = 0; i < dims.dS; ++i)
        for (int j = 0; j < dims.dS; ++j) {
            cplx s = 0.0;
            for (int a = 0; a < dims.dB; ++a) s += x(i * dims.dB + a, j * dims.dB + a);
            out(i, j) = s;
        }
    return out;
}

CMatrix partial_trace_S(const CMatrix& x, BipartiteDims dims) {
    const int n = dims.total();
    if (x.rows() != n || x.cols() != n)
        throw DimensionError("partial_trace_S: matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", dims require " + std::to_string(n));
    CMatrix out = CMatrix::Zero(dims.dB, dims.dB);
    for (int a = 0; a < dims.dB; ++a)
        for (int b = 0; b < dims.dB; ++b) {
            cplx s = 0.0;
            for (int i = 0; i < dims.dS; ++i) s += x(i * dims.dB + a, i * dims.dB + b);
            out(a, b) = s;
        }
    return out;
}

CMatrix partial_trace(const CMatrix& x, const std::vector<int>& dims, const std::vector<int>& keep) {
    const int n = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    if (x.rows() != n || x.cols() != n) throw DimensionError("partial_trace: matrix size does not match dims");
    const int nsys = static_cast<int>(dims.size());
    std::vector<bool> kept(nsys, false);
    for (int k : keep) {
        if (k < 0 || k >= nsys) throw DimensionError("partial_trace: subsystem index out of range");
        kept[k] = true;
    }
    int dk = 1, dt = 1;
    for (int s = 0; s < nsys; ++s) (kept[s] ? dk : dt) *= dims[s];

    // full index for (kept multi-index, traced multi-index)
    std::vector<int> full(static_cast<size_t>(dk) * dt);
    for (int idx = 0; idx < n; ++idx) {
        int rem = idx, ik = 0, it = 0, sk = 1, st = 1;
        for (int s = nsys - 1; s >= 0; --s) {
            const int digit = rem % dims[s];
            rem /= dims[s];
            if (kept[s]) {
                ik += digit * sk;
                sk *= dims[s];
            } else {
                it += digit * st;
                st *= dims[s];
            }
        }
        full[static_cast<size_t>(ik) * dt + it] = idx;
    }
    CMatrix out = CMatrix::Zero(dk, dk);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < dk; ++c) {
            cplx s = 0.0;
            for (int t = 0; t < dt; ++t) s += x(full[static_cast<size_t>(r) * dt + t], full[static_cast<size_t>(c) * dt + t]);
            out(r, c) = s;
        }
    return out;
}

CMatrix partial_transpose(const CMatrix& x, const std::vector<int>& dims, int sys) {
    const int n = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    if (x.rows() != n || x.cols() != n) throw DimensionError("partial_transpose: matrix size does not match dims");
    if (sys < 0 || sys >= static_cast<int>(dims.size())) throw DimensionError("partial_transpose: bad subsystem");
    int stride = 1;
    for (int s = static_cast<int>(dims.size()) - 1; s > sys; --s) stride *= dims[s];
    const int d = dims[sys];
    CMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int di = (i / stride) % d, dj = (j / stride) % d;
            const int i2 = i + (dj - di) * stride, j2 = j + (di - dj) * stride;
            out(i2, j2) = x(i, j);
        }
    return out;
}

CMatrix swap_operator(int d1, int d2) {
    const int n = d1 * d2;
    CMatrix s = CMatrix::Zero(n, n);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j) s(j * d1 + i, i * d2 + j) = 1.0;
    return s;
}

CMatrix swap_factors(const CMatrix& x, int d1, int d2) {
    if (x.rows() != d1 * d2 || x.cols() != d1 * d2) throw DimensionError("swap_factors: size mismatch");
    const CMatrix s = swap_operator(d1, d2);
    return s * x * s.adjoint();
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
    return (a.conjugate().cwiseProduct(b)).sum();
}

double hs_norm(const CMatrix& a) { return a.norm(); }

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& a) {
    require_square(a, "hermiticity_defect");
    return max_abs(a - a.adjoint());
}

bool is_unitary(const CMatrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - identity(static_cast<int>(u.rows()))) <= tol;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

EigenDecomposition eigh(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(m.matrix()));
    if (solver.info() != Eigen::Success) throw DomainError("eigh: eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const CMatrix& m) {
    require_square(m, "min_eigenvalue");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(hermitian_part(m)), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

bool is_psd(const CMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

HermitianMatrix psd_project(const HermitianMatrix& m) {
    const auto e = eigh(m);
    const RVector clipped = e.values.cwiseMax(0.0);
    return HermitianMatrix::from_symmetrized(e.vectors * clipped.asDiagonal() * e.vectors.adjoint());
}

CMatrix sqrt_psd(const CMatrix& m) {
    const auto e = eigh(HermitianMatrix::from_symmetrized(m));
    const RVector r = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * r.asDiagonal() * e.vectors.adjoint();
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
    const auto e = eigh(HermitianMatrix::from_symmetrized(h));
    CVector phases(e.values.size());
    for (Eigen::Index k = 0; k < e.values.size(); ++k) phases(k) = std::exp(cplx(0.0, -t * e.values(k)));
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

std::vector<CMatrix> orthonormalize(const std::vector<CMatrix>& vectors, double tol) {
    std::vector<CMatrix> out;
    if (vectors.empty()) return out;
    double scale = 0.0;
    for (const auto& v : vectors) {
        if (v.rows() != vectors.front().rows() || v.cols() != vectors.front().cols())
            throw DimensionError("orthonormalize: vectors have different shapes");
        scale = std::max(scale, hs_norm(v));
    }
    if (scale == 0.0) return out;
    for (const auto& v : vectors) {
        CMatrix r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : out) r -= hs_inner(q, r) * q;
        const double nr = hs_norm(r);
        if (nr > tol * scale) out.push_back(r / nr);
    }
    return out;
}

RVector hvec(const CMatrix& m) {
    const int n = static_cast<int>(m.rows());
    RVector v(n * n);
    int k = 0;
    for (int i = 0; i < n; ++i) v(k++) = m(i, i).real();
    const double s2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // average the two triangles so slightly non-Hermitian input maps to its Hermitian part
            const cplx z = 0.5 * (m(i, j) + std::conj(m(j, i)));
            v(k++) = s2 * z.real();
            v(k++) = s2 * z.imag();
        }
    return v;
}

CMatrix hmat(const RVector& v, int n) {
    if (v.size() != n * n) throw DimensionError("hmat: coordinate vector has wrong length");
    CMatrix m = CMatrix::Zero(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i) m(i, i) = v(k++);
    const double s2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const cplx z(v(k), v(k + 1));
            k += 2;
            m(i, j) = z / s2;
            m(j, i) = std::conj(z) / s2;
        }
    return m;
}

std::vector<CMatrix> hermitian_basis(int n) {
    std::vector<CMatrix> out;
    out.reserve(static_cast<size_t>(n) * n);
    for (int k = 0; k < n * n; ++k) out.push_back(hmat(RVector::Unit(n * n, k), n));
    return out;
}

std::vector<CMatrix> hermitian_complement(const std::vector<CMatrix>& onb, int n, double tol) {
    const int N = n * n;
    if (onb.empty()) return hermitian_basis(n);
    RMatrix b(onb.size(), N);
    for (size_t k = 0; k < onb.size(); ++k) b.row(static_cast<Eigen::Index>(k)) = hvec(onb[k]).transpose();
    Eigen::JacobiSVD<RMatrix> svd(b, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * std::max(1.0, s(0))) ++rank;
    std::vector<CMatrix> out;
    for (int k = rank; k < N; ++k) out.push_back(hmat(svd.matrixV().col(k), n));
    return out;
}

}  // namespace cpkit
