#pragma once

#include "cpkit/linalg.hpp"

#include <array>

namespace cpkit {

// S(rho) = -Tr rho log rho in nats. Throws DomainError for non-states.
double von_neumann_entropy(const CMatrix& rho, double tol = 1e-9);

struct EntropyReport {
    double sR = 0, sS = 0, sB = 0, sRS = 0, sSB = 0, sRSB = 0;
    double conditionalMutualInformation = 0;  // I(R:B|S) = S(RS) + S(SB) - S(S) - S(RSB)
};

EntropyReport conditional_mutual_information(const CMatrix& rhoRSB, std::array<int, 3> dims);

}  // namespace cpkit
