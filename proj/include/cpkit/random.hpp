#pragma once

#include "cpkit/linalg.hpp"

#include <cstdint>
#include <random>

namespace cpkit {

// Seeded source for every random search in the library. Same seed, same stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    int uniform_int(int lo, int hi);  // inclusive
    std::uint64_t next_seed() { return engine_(); }

    CMatrix ginibre(int rows, int cols);
    // Haar-distributed unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
    CMatrix haar_unitary(int n);
    CMatrix local_unitary(BipartiteDims dims);
    CVector pure_state(int n);
    // Random density matrix of the given rank (rank <= 0 means full rank).
    CMatrix density_matrix(int n, int rank = 0);
    CMatrix hermitian(int n);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace cpkit
