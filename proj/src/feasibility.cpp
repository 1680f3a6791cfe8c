#include "cpkit/feasibility.hpp"

#include "cpkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cpkit {

std::string to_string(FeasStatus s) {
    switch (s) {
        case FeasStatus::Feasible: return "feasible";
        case FeasStatus::InfeasibleNumerically: return "infeasible";
        case FeasStatus::Undetermined: return "undetermined";
    }
    return "undetermined";
}

void FeasibilityProblem::add(const CMatrix& f, double b) {
    if (f.rows() != dim || f.cols() != dim) throw DimensionError("feasibility: functional has wrong size");
    functionals.push_back(hermitian_part(f));
    targets.push_back(b);
}

void FeasibilityProblem::add_complex(const CMatrix& g, cplx z) {
    const CMatrix h1 = 0.5 * (g + g.adjoint());
    const CMatrix h2 = (g - g.adjoint()) / cplx(0.0, 2.0);
    add(h1, z.real());
    add(h2, -z.imag());
}

void FeasibilityProblem::add_membership(const std::vector<CMatrix>& onb) {
    for (const auto& k : hermitian_complement(onb, dim)) add(k, 0.0);
}

void FeasibilityProblem::add_affine_membership(const CMatrix& x0, const std::vector<CMatrix>& onb) {
    for (const auto& k : hermitian_complement(onb, dim)) add(k, hs_inner(k, x0).real());
}

void FeasibilityProblem::add_partial_trace(BipartiteDims dims, const CMatrix& rho) {
    if (dims.total() != dim) throw DimensionError("feasibility: partial trace dims do not match");
    const CMatrix idB = identity(dims.dB);
    for (const auto& k : hermitian_basis(dims.dS)) add(kron(k, idB), hs_inner(k, rho).real());
}

namespace {

struct AffineSet {
    int N = 0;
    bool useRowSpace = true;
    RMatrix basis;  // orthonormal columns: row space of A, or its null space
    RVector xp;     // least-norm point
    RVector project(const RVector& z) const {
        if (useRowSpace) return z - basis * (basis.transpose() * z) + xp;
        return xp + basis * (basis.transpose() * z);
    }
};

RVector psd_project_vec(const RVector& v, int n) {
    return hvec(psd_project(HermitianMatrix::from_symmetrized(hmat(v, n))).matrix());
}

// Factorized least squares X = L L^dag, minimizing sum_k (Re<F_k, X> - b_k)^2 by
// Levenberg-Marquardt. Used to finish problems whose feasible set touches the PSD
// boundary, where alternating projections stall.
bool lm_polish(const std::vector<CMatrix>& F, const RVector& b, const CMatrix& start, double tol, CMatrix& out) {
    const int n = static_cast<int>(start.rows());
    const int m = static_cast<int>(F.size());
    const auto e = eigh(HermitianMatrix::from_symmetrized(start));
    const double lmax = std::max(e.values.maxCoeff(), 1e-12);
    int r1 = 0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k)
        if (e.values(k) > 1e-6 * lmax) ++r1;
    r1 = std::max(r1, 1);
    std::vector<int> ranks{r1, std::min(n, r1 + 1), n};
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

    auto residual = [&](const CMatrix& L, RVector& R) {
        const CMatrix X = L * L.adjoint();
        R.resize(m);
        for (int k = 0; k < m; ++k) R(k) = hs_inner(F[k], X).real() - b(k);
        return R.norm();
    };

    for (int r : ranks) {
        CMatrix L(n, r);
        for (int j = 0; j < r; ++j) {
            const Eigen::Index col = n - 1 - j;  // largest eigenvalues last
            const double lam = std::max(e.values(col), 1e-8 * lmax);
            L.col(j) = std::sqrt(lam) * e.vectors.col(col);
        }
        const int P = 2 * n * r;
        RVector R;
        double rn = residual(L, R);
        double mu = 1e-6;
        for (int it = 0; it < 300 && rn > 0.1 * tol; ++it) {
            RMatrix J(m, P);
            for (int k = 0; k < m; ++k) {
                const CMatrix G = F[k] * L;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < r; ++j) {
                        J(k, i * r + j) = 2.0 * G(i, j).real();
                        J(k, n * r + i * r + j) = 2.0 * G(i, j).imag();
                    }
            }
            bool accepted = false;
            while (!accepted && mu < 1e12) {
                RVector delta;
                if (P <= m) {
                    RMatrix H = J.transpose() * J;
                    H.diagonal().array() += mu;
                    delta = -H.ldlt().solve(J.transpose() * R);
                } else {
                    RMatrix H = J * J.transpose();
                    H.diagonal().array() += mu;
                    delta = -J.transpose() * H.ldlt().solve(R);
                }
                CMatrix Lt = L;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < r; ++j) Lt(i, j) += cplx(delta(i * r + j), delta(n * r + i * r + j));
                RVector Rt;
                const double rt = residual(Lt, Rt);
                if (rt < rn) {
                    L = Lt;
                    R = Rt;
                    rn = rt;
                    mu = std::max(mu / 3.0, 1e-15);
                    accepted = true;
                } else {
                    mu *= 4.0;
                }
            }
            if (!accepted) break;
        }
        if (rn <= tol) {
            out = L * L.adjoint();
            return true;
        }
    }
    return false;
}

}  // namespace

FeasibilityResult solve_feasibility(const FeasibilityProblem& p) {
    if (p.dim <= 0) throw DimensionError("feasibility: dimension must be positive");
    if (p.functionals.size() != p.targets.size()) throw DimensionError("feasibility: functionals and targets differ in length");
    const int n = p.dim;
    const int N = n * n;
    const double tol = p.tolerance;

    // Normalized rows; zero rows are either vacuous or contradictory.
    std::vector<CMatrix> F;
    std::vector<double> bl;
    bool contradictory = false;
    for (size_t k = 0; k < p.functionals.size(); ++k) {
        const double nrm = hs_norm(p.functionals[k]);
        if (nrm < 1e-14) {
            if (std::abs(p.targets[k]) > tol) contradictory = true;
            continue;
        }
        F.push_back(p.functionals[k] / nrm);
        bl.push_back(p.targets[k] / nrm);
    }
    const int m = static_cast<int>(F.size());
    RVector b(m);
    RMatrix A(m, N);
    for (int k = 0; k < m; ++k) {
        A.row(k) = hvec(F[k]).transpose();
        b(k) = bl[k];
    }

    FeasibilityResult res;
    res.dualWitness = CMatrix::Zero(n, n);
    auto affine_residual = [&](const RVector& x) { return m == 0 ? 0.0 : (A * x - b).norm(); };

    AffineSet aff;
    aff.N = N;
    if (m == 0) {
        aff.useRowSpace = true;
        aff.basis = RMatrix::Zero(N, 0);
        aff.xp = RVector::Zero(N);
    } else {
        Eigen::ColPivHouseholderQR<RMatrix> qr(A.transpose());
        qr.setThreshold(1e-10);
        const int r = static_cast<int>(qr.rank());
        const RMatrix Q = qr.householderQ();
        const RMatrix Qr = Q.leftCols(r);
        const RMatrix AQ = A * Qr;
        const RVector y = AQ.colPivHouseholderQr().solve(b);
        aff.xp = Qr * y;
        if (r <= N - r) {
            aff.useRowSpace = true;
            aff.basis = Qr;
        } else {
            aff.useRowSpace = false;
            aff.basis = Q.rightCols(N - r);
        }
        if (affine_residual(aff.xp) > tol * std::max(1.0, b.norm())) contradictory = true;
    }
    if (contradictory) {
        res.status = FeasStatus::InfeasibleNumerically;
        res.point = hmat(aff.xp, n);
        res.residual = affine_residual(aff.xp);
        return res;
    }

    RVector x = aff.xp;
    RVector pc = RVector::Zero(N);
    RVector y = x;
    std::deque<double> history;
    bool plateau = false;
    int k = 0;
    double dist = std::numeric_limits<double>::infinity();
    double lastPolishDist = std::numeric_limits<double>::infinity();
    auto try_polish = [&](const RVector& at) {
        CMatrix X;
        if (!p.polish || m == 0) return false;
        if (!lm_polish(F, b, hmat(at, n), tol, X)) return false;
        const RVector v = hvec(X);
        const double r = affine_residual(v);
        if (r > tol) return false;
        res.status = FeasStatus::Feasible;
        res.point = X;
        res.residual = r;
        res.polished = true;
        return true;
    };

    for (k = 1; k <= p.iterationCap; ++k) {
        y = psd_project_vec(x + pc, n);
        pc = x + pc - y;
        x = aff.project(y);
        dist = (y - x).norm();
        if (dist <= tol) {
            const double r = affine_residual(y);
            if (r <= tol) {
                res.status = FeasStatus::Feasible;
                res.point = hmat(y, n);
                res.residual = r;
                res.iterations = k;
                return res;
            }
        }
        history.push_back(dist);
        if (static_cast<int>(history.size()) > p.plateauWindow) {
            const double old = history.front();
            history.pop_front();
            if (dist > 10.0 * tol && old - dist <= 1e-3 * dist) {
                plateau = true;
                break;
            }
        }
        // Retry the polish only after real progress since the last failed attempt.
        if (k % 1000 == 0 && dist < std::min(1e-3, 0.1 * lastPolishDist)) {
            if (try_polish(y)) {
                res.iterations = k;
                return res;
            }
            lastPolishDist = dist;
        }
    }
    res.iterations = std::min(k, p.iterationCap);
    if (try_polish(y)) return res;

    res.point = hmat(y, n);
    res.residual = affine_residual(y);
    const RVector gap = y - x;
    const double gn = gap.norm();
    if (gn > 0) res.dualWitness = hmat(gap / gn, n);
    res.status = plateau ? FeasStatus::InfeasibleNumerically : FeasStatus::Undetermined;
    return res;
}

}  // namespace cpkit
