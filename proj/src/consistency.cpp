#include "cpkit/consistency.hpp"

#include "cpkit/errors.hpp"
#include "cpkit/random.hpp"

#include <cmath>
#include <deque>

namespace cpkit {

std::string to_string(SemigroupKind k) {
    switch (k) {
        case SemigroupKind::Full: return "full";
        case SemigroupKind::Local: return "local";
        case SemigroupKind::Generators: return "generators";
        case SemigroupKind::Hamiltonian: return "hamiltonian";
    }
    return "full";
}

void SemigroupSpec::validate(double unitaryTol) const {
    const int n = dims.total();
    if (kind == SemigroupKind::Generators) {
        if (generators.empty()) throw DomainError("semigroup: generator list is empty");
        for (const auto& g : generators) {
            if (g.rows() != n || g.cols() != n) throw DimensionError("semigroup: generator has wrong size");
            if (!is_unitary(g, unitaryTol)) throw DomainError("semigroup: generator is not unitary");
        }
    }
    if (kind == SemigroupKind::Hamiltonian) {
        if (hamiltonian.rows() != n || hamiltonian.cols() != n) throw DimensionError("semigroup: hamiltonian has wrong size");
        if (hermiticity_defect(hamiltonian) > 1e-10) throw DomainError("semigroup: hamiltonian is not Hermitian");
    }
}

namespace {

CMatrix conjugate_by(const CMatrix& U, const CMatrix& X) { return U * X * U.adjoint(); }

void append_if_new(std::vector<RVector>& onb, const RVector& c, double tol, bool& added) {
    RVector r = c;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : onb) r -= q.dot(r) * q;
    added = r.norm() > tol * std::max(1.0, c.norm());
    if (added) onb.push_back(r / r.norm());
}

}  // namespace

ConsistencyVerdict check_u_consistency(const std::vector<CMatrix>& v0Basis, BipartiteDims dims, const CMatrix& U,
                                       const Tolerances& tol) {
    const int n = dims.total();
    if (U.rows() != n || U.cols() != n) throw DimensionError("check_u_consistency: unitary has wrong size");
    if (!is_unitary(U, 1e-9)) throw DomainError("check_u_consistency: U is not unitary");
    ConsistencyVerdict out;
    out.method = "kernel-image";
    out.closureDim = static_cast<int>(v0Basis.size());
    if (v0Basis.empty()) return out;

    RMatrix images(dims.dS * dims.dS, static_cast<Eigen::Index>(v0Basis.size()));
    double worst = 0.0;
    for (size_t k = 0; k < v0Basis.size(); ++k) {
        const CMatrix m = partial_trace_B(conjugate_by(U, v0Basis[k]), dims);
        images.col(static_cast<Eigen::Index>(k)) = hvec(m);
        worst = std::max(worst, hs_norm(m));
    }
    if (worst <= tol.consistency) return out;

    // Largest violation over unit-norm Hermitian X in V0.
    Eigen::JacobiSVD<RMatrix> svd(images, Eigen::ComputeFullV);
    const RVector c = svd.matrixV().col(0);
    CMatrix x = CMatrix::Zero(n, n);
    for (size_t k = 0; k < v0Basis.size(); ++k) x += c(static_cast<Eigen::Index>(k)) * v0Basis[k];
    out.consistent = false;
    out.witness = ConsistencyWitness{x, "U", U, hs_norm(partial_trace_B(conjugate_by(U, x), dims))};
    return out;
}

ConsistencyVerdict check_u_consistency(const OperatorSubspace& v, const CMatrix& U, const Tolerances& tol) {
    return check_u_consistency(kernel_decomposition(v, tol.kernel).v0Basis, v.dims, U, tol);
}

ConsistencyVerdict check_g_consistency(const OperatorSubspace& v, const SemigroupSpec& g, std::uint64_t seed, int samples,
                                       const Tolerances& tol) {
    if (g.dims.dS != v.dims.dS || g.dims.dB != v.dims.dB) throw DimensionError("check_g_consistency: dims disagree");
    g.validate();
    const auto kd = kernel_decomposition(v, tol.kernel);
    const auto& v0 = kd.v0Basis;
    const BipartiteDims dims = v.dims;
    const int n = dims.total();
    ConsistencyVerdict out;
    out.closureDim = static_cast<int>(v0.size());

    switch (g.kind) {
        case SemigroupKind::Local:
            // Local unitaries map ker Tr_B into itself.
            out.method = "local-group";
            return out;

        case SemigroupKind::Full: {
            out.method = "full-group";
            // With dS = 1, Tr_B is the trace, which every unitary preserves.
            if (v0.empty() || dims.dS == 1) return out;
            out.consistent = false;
            Rng rng(seed);
            for (int s = 0; s < samples; ++s) {
                const CMatrix U = rng.haar_unitary(n);
                auto r = check_u_consistency(v0, dims, U, tol);
                if (r.witness && (!out.witness || r.witness->norm > out.witness->norm)) {
                    out.witness = r.witness;
                    out.witness->word = "haar[" + std::to_string(s) + "]";
                }
                if (out.witness && out.witness->norm > tol.witness) break;
            }
            return out;
        }

        case SemigroupKind::Generators: {
            out.method = "word-closure";
            struct Item {
                CMatrix X, origin, U;
                std::string word;
            };
            std::vector<RVector> onb;
            std::deque<Item> queue;
            for (const auto& x : v0) {
                bool added = false;
                append_if_new(onb, hvec(x), 1e-9, added);
                queue.push_back({x, x, identity(n), ""});
            }
            while (!queue.empty()) {
                const Item item = queue.front();
                queue.pop_front();
                for (size_t k = 0; k < g.generators.size(); ++k) {
                    const CMatrix& gen = g.generators[k];
                    const CMatrix y = conjugate_by(gen, item.X);
                    const CMatrix uw = gen * item.U;
                    const std::string word = "g" + std::to_string(k) + (item.word.empty() ? "" : "*" + item.word);
                    const double escape = hs_norm(partial_trace_B(y, dims));
                    if (escape > tol.consistency * std::max(1.0, hs_norm(y))) {
                        out.consistent = false;
                        const double wn = hs_norm(partial_trace_B(conjugate_by(uw, item.origin), dims));
                        out.witness = ConsistencyWitness{item.origin, word, uw, wn};
                        out.closureDim = static_cast<int>(onb.size());
                        return out;
                    }
                    bool added = false;
                    append_if_new(onb, hvec(y), 1e-9, added);
                    if (added) queue.push_back({y, item.origin, uw, word});
                }
            }
            out.closureDim = static_cast<int>(onb.size());
            return out;
        }

        case SemigroupKind::Hamiltonian: {
            out.method = "commutator-closure";
            const CMatrix& H = g.hamiltonian;
            std::vector<RVector> onb;
            std::deque<CMatrix> frontier;
            for (const auto& x : v0) {
                bool added = false;
                append_if_new(onb, hvec(x), 1e-9, added);
                frontier.push_back(x);
            }
            bool escaped = false;
            while (!frontier.empty() && !escaped) {
                const CMatrix x = frontier.front();
                frontier.pop_front();
                const CMatrix y = cplx(0.0, 1.0) * (H * x - x * H);
                if (hs_norm(partial_trace_B(y, dims)) > tol.consistency * std::max(1.0, hs_norm(y))) {
                    escaped = true;
                    break;
                }
                bool added = false;
                append_if_new(onb, hvec(y), 1e-9, added);
                if (added) frontier.push_back(y);
            }
            out.closureDim = static_cast<int>(onb.size());
            if (!escaped) return out;

            out.consistent = false;
            // Witness: an evolution time at which some V0 element leaves ker Tr_B.
            const double hn = std::max(H.operatorNorm(), 1e-12);
            const double dt = M_PI / (20.0 * hn);
            for (int j = 1; j <= 400; ++j) {
                const double t = j * dt;
                const CMatrix U = expm_hermitian(H, t);
                auto r = check_u_consistency(v0, dims, U, tol);
                if (r.witness && (!out.witness || r.witness->norm > out.witness->norm)) {
                    out.witness = r.witness;
                    out.witness->word = "exp(-iHt), t=" + std::to_string(t);
                }
                if (out.witness && out.witness->norm > tol.witness) break;
            }
            return out;
        }
    }
    return out;
}

bool composition_compatible(const OperatorSubspace& v, const CMatrix& U, const OperatorSubspace& vprime, double tol) {
    if (v.ambient() != vprime.ambient()) throw DimensionError("composition_compatible: ambient dimensions differ");
    if (U.rows() != v.ambient() || !is_unitary(U, 1e-9)) throw DomainError("composition_compatible: U is not a unitary of the right size");
    for (const auto& b : v.basis)
        if (span_residual(vprime.basis, conjugate_by(U, b)) > tol) return false;
    return true;
}

}  // namespace cpkit
