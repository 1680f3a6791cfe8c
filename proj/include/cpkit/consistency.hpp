#pragma once

#include "cpkit/linalg.hpp"
#include "cpkit/opspace.hpp"
#include "cpkit/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cpkit {

enum class SemigroupKind { Full, Local, Generators, Hamiltonian };
std::string to_string(SemigroupKind k);

struct SemigroupSpec {
    SemigroupKind kind = SemigroupKind::Full;
    BipartiteDims dims;
    std::vector<CMatrix> generators;  // Generators only
    CMatrix hamiltonian;              // Hamiltonian only; the semigroup is exp(-itH), t >= 0

    static SemigroupSpec full(BipartiteDims d) { return {SemigroupKind::Full, d, {}, {}}; }
    static SemigroupSpec local(BipartiteDims d) { return {SemigroupKind::Local, d, {}, {}}; }
    static SemigroupSpec from_generators(BipartiteDims d, std::vector<CMatrix> g) {
        return {SemigroupKind::Generators, d, std::move(g), {}};
    }
    static SemigroupSpec from_hamiltonian(BipartiteDims d, CMatrix h) { return {SemigroupKind::Hamiltonian, d, {}, std::move(h)}; }

    void validate(double unitaryTol = 1e-9) const;
};

struct ConsistencyWitness {
    CMatrix X;         // element of V0
    std::string word;  // generator word, sample label or evolution time
    CMatrix U;
    double norm = 0;   // ||Tr_B(U X U^dag)||
};

struct ConsistencyVerdict {
    bool consistent = true;
    std::optional<ConsistencyWitness> witness;
    int closureDim = 0;
    std::string method;
};

ConsistencyVerdict check_u_consistency(const std::vector<CMatrix>& v0Basis, BipartiteDims dims, const CMatrix& U,
                                       const Tolerances& tol = {});
ConsistencyVerdict check_u_consistency(const OperatorSubspace& v, const CMatrix& U, const Tolerances& tol = {});

// samples: number of seeded Haar unitaries tried for a Full-group witness.
ConsistencyVerdict check_g_consistency(const OperatorSubspace& v, const SemigroupSpec& g, std::uint64_t seed = 1,
                                       int samples = 50, const Tolerances& tol = {});

bool composition_compatible(const OperatorSubspace& v, const CMatrix& U, const OperatorSubspace& vprime, double tol = 1e-9);

}  // namespace cpkit
