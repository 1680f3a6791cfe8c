#include "cpkit/opspace.hpp"

#include "cpkit/errors.hpp"
#include "cpkit/feasibility.hpp"

#include <cmath>

namespace cpkit {

std::string to_string(SpanStatus s) {
    switch (s) {
        case SpanStatus::Verified: return "verified";
        case SpanStatus::Refuted: return "refuted";
        case SpanStatus::Undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace {

// Real modified Gram-Schmidt (two passes) with a relative drop tolerance.
std::vector<RVector> real_orthonormalize(const std::vector<RVector>& vs, double tol) {
    std::vector<RVector> out;
    double scale = 0.0;
    for (const auto& v : vs) scale = std::max(scale, v.norm());
    if (scale == 0.0) return out;
    for (const auto& v : vs) {
        RVector r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : out) r -= q.dot(r) * q;
        const double nr = r.norm();
        if (nr > tol * scale) out.push_back(r / nr);
    }
    return out;
}

double real_span_residual(const std::vector<RVector>& onb, const RVector& x) {
    RVector r = x;
    for (const auto& q : onb) r -= q.dot(r) * q;
    return r.norm();
}

}  // namespace

OperatorSubspace build_subspace(const std::vector<CMatrix>& generators, BipartiteDims dims, double rankTol) {
    if (generators.empty()) throw DomainError("build_subspace: empty generator list");
    if (dims.dS < 1 || dims.dB < 1) throw DimensionError("build_subspace: dimensions must be positive");
    const int n = dims.total();
    std::vector<RVector> coords;
    for (const auto& g : generators) {
        if (g.rows() != n || g.cols() != n)
            throw DimensionError("build_subspace: generator is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                                 ", expected " + std::to_string(n));
        if (!g.allFinite()) throw DomainError("build_subspace: generator has non-finite entries");
        // Hermitian and anti-Hermitian parts span g and g^dag together.
        coords.push_back(hvec(0.5 * (g + g.adjoint())));
        coords.push_back(hvec((g - g.adjoint()) / cplx(0.0, 2.0)));
    }
    OperatorSubspace v;
    v.dims = dims;
    v.generators = generators;
    for (const auto& q : real_orthonormalize(coords, rankTol)) v.basis.push_back(hmat(q, n));

    bool closed = true;
    for (const auto& m : v.basis)
        if (span_residual(v.basis, m.adjoint()) > 1e-9) closed = false;
    v.selfAdjointVerified = closed;
    return v;
}

KernelDecomposition kernel_decomposition(const OperatorSubspace& v, double kernelTol) {
    KernelDecomposition kd;
    const int r = v.dim();
    if (r == 0) return kd;
    const int dS = v.dims.dS;
    RMatrix T(dS * dS, r);
    for (int j = 0; j < r; ++j) T.col(j) = hvec(partial_trace_B(v.basis[j], v.dims));
    Eigen::JacobiSVD<RMatrix> svd(T, Eigen::ComputeFullV);
    const RVector s = svd.singularValues();
    const RMatrix V = svd.matrixV();
    for (int j = 0; j < r; ++j) {
        CMatrix x = CMatrix::Zero(v.ambient(), v.ambient());
        for (int i = 0; i < r; ++i) x += V(i, j) * v.basis[i];
        const double sj = j < s.size() ? s(j) : 0.0;
        if (sj > kernelTol) {
            kd.complementBasis.push_back(x);
            kd.reducedBasis.push_back(partial_trace_B(x, v.dims));
            kd.singularValues.push_back(sj);
        } else {
            kd.v0Basis.push_back(x);
        }
    }
    return kd;
}

CMatrix orthogonal_projection(const std::vector<CMatrix>& onb, const CMatrix& x) {
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const auto& b : onb) {
        if (b.rows() != x.rows() || b.cols() != x.cols()) throw DimensionError("orthogonal_projection: shape mismatch");
        out += hs_inner(b, x) * b;
    }
    return out;
}

double span_residual(const std::vector<CMatrix>& onb, const CMatrix& x) { return hs_norm(x - orthogonal_projection(onb, x)); }

StateSpanResult check_state_spanned(const OperatorSubspace& v, const SpanBudget& budget) {
    StateSpanResult out;
    const int n = v.ambient();
    const int dim = v.dim();
    std::vector<RVector> found;  // orthonormal coordinates of span(states)

    auto try_add = [&](const CMatrix& candidate) {
        const CMatrix h = hermitian_part(candidate);
        const double tr = h.trace().real();
        if (tr <= 1e-12) return false;
        const CMatrix rho = h / tr;
        if (min_eigenvalue(rho) < -1e-9) return false;
        if (span_residual(v.basis, rho) > 1e-9) return false;
        const RVector c = hvec(rho);
        if (real_span_residual(found, c) <= 1e-7 * c.norm()) return false;
        RVector r = c;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : found) r -= q.dot(r) * q;
        found.push_back(r / r.norm());
        out.states.push_back(rho);
        return true;
    };

    for (const auto& g : v.generators)
        if (hermiticity_defect(g) <= 1e-10) try_add(g);

    auto solve_state = [&](const CMatrix* w, double target) {
        FeasibilityProblem p;
        p.dim = n;
        p.iterationCap = budget.iterationCap;
        p.add_membership(v.basis);
        p.add(identity(n), 1.0);
        if (w) p.add(*w, target);
        return solve_feasibility(p);
    };

    if (out.states.empty() && dim > 0) {
        const auto r = solve_state(nullptr, 0.0);
        if (r.status == FeasStatus::Feasible) try_add(r.point);
        if (out.states.empty()) {
            out.status = r.status == FeasStatus::InfeasibleNumerically ? SpanStatus::Refuted : SpanStatus::Undetermined;
            out.direction = v.basis.front();
            return out;
        }
    }

    while (static_cast<int>(out.states.size()) < dim) {
        // Direction in V orthogonal to everything found so far.
        CMatrix w;
        double best = -1.0;
        for (const auto& b : v.basis) {
            RVector c = hvec(b);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : found) c -= q.dot(c) * q;
            if (c.norm() > best) {
                best = c.norm();
                w = hmat(c / c.norm(), n);
            }
        }
        bool added = false;
        CMatrix mean = CMatrix::Zero(n, n);
        for (const auto& s : out.states) mean += s;
        mean /= static_cast<double>(out.states.size());
        const double trw = w.trace().real();
        for (double eps : {0.5, 0.1, 1e-2, 1e-3, 1e-4}) {
            const CMatrix y = mean + eps * (w - trw * mean);
            if (min_eigenvalue(y) >= -1e-12 && try_add(y)) {
                added = true;
                break;
            }
        }
        bool allInfeasible = true;
        double delta = budget.delta0;
        for (int h = 0; !added && h <= budget.halvings; ++h, delta *= 0.5) {
            for (double sign : {1.0, -1.0}) {
                const auto r = solve_state(&w, sign * delta);
                if (r.status == FeasStatus::Feasible && try_add(r.point)) {
                    added = true;
                    break;
                }
                if (r.status != FeasStatus::InfeasibleNumerically) allInfeasible = false;
            }
        }
        if (!added) {
            out.status = allInfeasible ? SpanStatus::Refuted : SpanStatus::Undetermined;
            out.direction = w;
            return out;
        }
    }
    out.status = SpanStatus::Verified;
    return out;
}

}  // namespace cpkit
