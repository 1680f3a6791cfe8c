#pragma once

#include "cpkit/feasibility.hpp"
#include "cpkit/linalg.hpp"
#include "cpkit/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cpkit {

enum class Tri { Yes, No, Undetermined };
std::string to_string(Tri t);

// A linear map F : R -> B(C^dOut) / W given on an orthonormal Hermitian basis of
// R in B(C^dIn). W (quotientBasis) is empty for maps into B(C^dOut) and is V0 for
// assignment maps, whose images are class representatives.
struct SubspaceMap {
    int dIn = 0;
    int dOut = 0;
    std::vector<CMatrix> domainBasis;
    std::vector<CMatrix> images;
    std::vector<CMatrix> quotientBasis;
    std::vector<CMatrix> domainStates;  // known positive elements of R, used to seed witness searches

    int dim() const { return static_cast<int>(domainBasis.size()); }
    bool full_domain() const { return dim() == dIn * dIn; }
    bool has_quotient() const { return !quotientBasis.empty(); }
    double domain_residual(const CMatrix& x) const;
    CMatrix apply(const CMatrix& x) const;  // requires x in R
    // Sum_m F(B_m) (x) conj(B_m): the Choi matrix of F composed with the projection onto R.
    CMatrix zero_extension_choi() const;
    // (F (x) id)(Y) for Y on C^dIn (x) C^dW; Y is first projected onto R (x) B(C^dW).
    CMatrix apply_tensor(const CMatrix& y, int dW) const;
    double trace_preservation_residual() const;
    double hermiticity_residual() const;
};

// Choi convention C = sum_ij F(E_ij) (x) E_ij; inverse F(X) = Tr_2[C (1 (x) X^T)].
CMatrix choi_of(const std::vector<CMatrix>& imagesOfMatrixUnits, int dOut, int dIn);
CMatrix apply_from_choi(const CMatrix& c, const CMatrix& x, int dOut, int dIn);

struct MapWitness {
    std::string kind;  // "choi-eigenvector", "positive-input", "tensored-input"
    CMatrix input;     // PSD Y in R (x) B(C^dimW), or the eigenvector as a column
    CMatrix output;    // image (class representative)
    double eigenvalue = 0;
    int dimW = 1;
};

struct FieldResult {
    Tri verdict = Tri::Undetermined;
    std::optional<MapWitness> witness;
    std::optional<CMatrix> certificate;  // feasible PSD Choi matrix
    int witnessDimTested = 0;
    std::string note;
};

struct CPVerdict {
    Tri positive = Tri::Undetermined;
    Tri cp = Tri::Undetermined;
    Tri cpte = Tri::Undetermined;
    Tri cpze = Tri::Undetermined;
    std::optional<MapWitness> positiveWitness, cpWitness, cpzeWitness;
    std::optional<CMatrix> cpCertificate, cpteCertificate, cpzeCertificate;
    int witnessDimTested = 0;
    std::uint64_t seed = 0;
    double choiMinEigenvalue = 0;
    std::vector<std::string> notes;

    // CPTE => CP, CPZE => CP, CP => positive.
    bool lattice_consistent() const;
};

struct ClassifyOptions {
    std::uint64_t seed = 1;
    Tolerances tol;
    int iterationCap = 20000;
    int randomTrials = 48;  // boundary samples per witness dimension
    std::vector<CMatrix> positivityHints;
};

struct CpzeResult {
    Tri verdict = Tri::Undetermined;
    double minEigenvalue = 0;
    CVector eigenvector;
    std::optional<CMatrix> certificate;
};

CpzeResult classify_cpze(const HermitianMatrix& choi, double psdTol = 1e-9);
FieldResult classify_cpze(const SubspaceMap& f, const ClassifyOptions& opt = {});
FieldResult classify_positive(const SubspaceMap& f, const ClassifyOptions& opt = {});
FieldResult classify_cp(const SubspaceMap& f, const ClassifyOptions& opt = {});
FieldResult classify_cpte(const SubspaceMap& f, const ClassifyOptions& opt = {});
CPVerdict classify(const SubspaceMap& f, const ClassifyOptions& opt = {});

// Applies the implication lattice; contradictory fields become Undetermined with a note.
void enforce_lattice(CPVerdict& v);

// Whether rep + span(quotient) contains a PSD element. Exact without a quotient.
FeasStatus class_has_psd(const CMatrix& rep, const std::vector<CMatrix>& quotient, int iterationCap, double psdTol,
                         CMatrix* point = nullptr);

// Extension problem: PSD Choi C on C^dOut (x) C^dIn reproducing F on R modulo W.
// zeroOutside adds F = 0 on the orthocomplement of R; tracePreserving adds Tr_1 C = 1.
FeasibilityProblem extension_problem(const SubspaceMap& f, bool zeroOutside, bool tracePreserving, int iterationCap);

}  // namespace cpkit
