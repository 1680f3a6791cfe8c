#pragma once

#include "cpkit/linalg.hpp"

#include <string>
#include <vector>

namespace cpkit {

// Find Hermitian X >= 0 (dim x dim) with Re<F_k, X> = b_k for every k.
struct FeasibilityProblem {
    int dim = 0;
    std::vector<CMatrix> functionals;  // Hermitian
    std::vector<double> targets;
    int iterationCap = 20000;
    double tolerance = 1e-8;
    int plateauWindow = 500;
    bool polish = true;

    void add(const CMatrix& f, double b);
    // <G, X> = z for a general G: two real rows.
    void add_complex(const CMatrix& g, cplx z);
    // X in span(onb) for a Hermitian orthonormal family.
    void add_membership(const std::vector<CMatrix>& onb);
    // X - x0 in span(onb); x0 need not lie in the span.
    void add_affine_membership(const CMatrix& x0, const std::vector<CMatrix>& onb);
    // Tr_B X = rho.
    void add_partial_trace(BipartiteDims dims, const CMatrix& rho);
};

enum class FeasStatus { Feasible, InfeasibleNumerically, Undetermined };
std::string to_string(FeasStatus s);

struct FeasibilityResult {
    FeasStatus status = FeasStatus::Undetermined;
    CMatrix point;        // PSD iterate (the certificate when Feasible)
    double residual = 0;  // affine residual of point, rows normalized
    CMatrix dualWitness;  // normalized gap between the PSD and affine iterates
    int iterations = 0;
    bool polished = false;
};

FeasibilityResult solve_feasibility(const FeasibilityProblem& p);

}  // namespace cpkit
