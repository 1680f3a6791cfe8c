#include "cpkit/cpclass.hpp"

#include "cpkit/errors.hpp"
#include "cpkit/opspace.hpp"
#include "cpkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace cpkit {

std::string to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Undetermined: return "undetermined";
    }
    return "undetermined";
}

double SubspaceMap::domain_residual(const CMatrix& x) const { return span_residual(domainBasis, x); }

CMatrix SubspaceMap::apply(const CMatrix& x) const {
    if (x.rows() != dIn || x.cols() != dIn) throw DimensionError("SubspaceMap::apply: input has wrong size");
    if (domain_residual(x) > 1e-8 * std::max(1.0, hs_norm(x)))
        throw DomainError("SubspaceMap::apply: input lies outside the domain subspace");
    CMatrix out = CMatrix::Zero(dOut, dOut);
    for (int m = 0; m < dim(); ++m) out += hs_inner(domainBasis[m], x) * images[m];
    return out;
}

CMatrix SubspaceMap::zero_extension_choi() const {
    CMatrix c = CMatrix::Zero(dOut * dIn, dOut * dIn);
    for (int m = 0; m < dim(); ++m) c += kron(images[m], domainBasis[m].conjugate());
    return c;
}

namespace {

// Y_m with Y = sum_m B_m (x) Y_m + (part orthogonal to R (x) B(C^dW)).
std::vector<CMatrix> tensor_coefficients(const std::vector<CMatrix>& basis, const CMatrix& y, int dIn, int dW) {
    std::vector<CMatrix> out;
    for (const auto& b : basis) {
        CMatrix ym = CMatrix::Zero(dW, dW);
        for (int i = 0; i < dIn; ++i)
            for (int j = 0; j < dIn; ++j) {
                const cplx c = std::conj(b(i, j));
                if (c == cplx(0.0)) continue;
                ym += c * y.block(i * dW, j * dW, dW, dW);
            }
        out.push_back(ym);
    }
    return out;
}

CMatrix project_tensor(const std::vector<CMatrix>& basis, const CMatrix& y, int dIn, int dW) {
    const auto coeffs = tensor_coefficients(basis, y, dIn, dW);
    CMatrix out = CMatrix::Zero(dIn * dW, dIn * dW);
    for (size_t m = 0; m < basis.size(); ++m) out += kron(basis[m], coeffs[m]);
    return out;
}

}  // namespace

CMatrix SubspaceMap::apply_tensor(const CMatrix& y, int dW) const {
    if (y.rows() != dIn * dW || y.cols() != dIn * dW) throw DimensionError("SubspaceMap::apply_tensor: input has wrong size");
    const auto coeffs = tensor_coefficients(domainBasis, y, dIn, dW);
    CMatrix out = CMatrix::Zero(dOut * dW, dOut * dW);
    for (int m = 0; m < dim(); ++m) out += kron(images[m], coeffs[m]);
    return out;
}

double SubspaceMap::trace_preservation_residual() const {
    double r = 0.0;
    for (int m = 0; m < dim(); ++m) r = std::max(r, std::abs(images[m].trace() - domainBasis[m].trace()));
    return r;
}

double SubspaceMap::hermiticity_residual() const {
    double r = 0.0;
    for (const auto& im : images) r = std::max(r, hermiticity_defect(im));
    return r;
}

CMatrix choi_of(const std::vector<CMatrix>& imagesOfMatrixUnits, int dOut, int dIn) {
    if (static_cast<int>(imagesOfMatrixUnits.size()) != dIn * dIn) throw DimensionError("choi_of: need dIn^2 images");
    CMatrix c = CMatrix::Zero(dOut * dIn, dOut * dIn);
    for (int i = 0; i < dIn; ++i)
        for (int j = 0; j < dIn; ++j) c += kron(imagesOfMatrixUnits[i * dIn + j], ketbra(dIn, i, j));
    return c;
}

CMatrix apply_from_choi(const CMatrix& c, const CMatrix& x, int dOut, int dIn) {
    if (c.rows() != dOut * dIn || x.rows() != dIn) throw DimensionError("apply_from_choi: size mismatch");
    CMatrix out = CMatrix::Zero(dOut, dOut);
    for (int a = 0; a < dOut; ++a)
        for (int b = 0; b < dOut; ++b) {
            cplx s = 0.0;
            for (int i = 0; i < dIn; ++i)
                for (int j = 0; j < dIn; ++j) s += c(a * dIn + i, b * dIn + j) * x(i, j);
            out(a, b) = s;
        }
    return out;
}

bool CPVerdict::lattice_consistent() const {
    if (cpte == Tri::Yes && cp != Tri::Yes) return false;
    if (cpze == Tri::Yes && cp != Tri::Yes) return false;
    if (cp == Tri::Yes && positive != Tri::Yes) return false;
    return true;
}

void enforce_lattice(CPVerdict& v) {
    auto conflict = [&](const std::string& what) {
        v.notes.push_back("conflicting evidence (" + what + "); affected fields set to undetermined");
    };
    if ((v.cpze == Tri::Yes || v.cpte == Tri::Yes) && v.cp == Tri::No) {
        conflict("extension certificate against a complete-positivity witness");
        if (v.cpze == Tri::Yes) v.cpze = Tri::Undetermined;
        if (v.cpte == Tri::Yes) v.cpte = Tri::Undetermined;
        v.cp = Tri::Undetermined;
    }
    if (v.cpze == Tri::Yes || v.cpte == Tri::Yes) v.cp = Tri::Yes;
    if (v.cp == Tri::Yes && v.positive == Tri::No) {
        conflict("complete-positivity certificate against a positivity witness");
        v.cp = v.positive = Tri::Undetermined;
        if (v.cpze == Tri::Yes) v.cpze = Tri::Undetermined;
        if (v.cpte == Tri::Yes) v.cpte = Tri::Undetermined;
    }
    if (v.cp == Tri::Yes) v.positive = Tri::Yes;
    if (v.positive == Tri::No && v.cp == Tri::Undetermined) v.cp = Tri::No;
    if (v.cp == Tri::No) {
        if (v.cpze == Tri::Undetermined) v.cpze = Tri::No;
        if (v.cpte == Tri::Undetermined) v.cpte = Tri::No;
    }
}

CpzeResult classify_cpze(const HermitianMatrix& choi, double psdTol) {
    const auto e = eigh(choi);
    CpzeResult r;
    r.minEigenvalue = e.values(0);
    r.eigenvector = e.vectors.col(0);
    r.verdict = r.minEigenvalue >= -psdTol ? Tri::Yes : Tri::No;
    if (r.verdict == Tri::Yes) r.certificate = choi.matrix();
    return r;
}

FeasStatus class_has_psd(const CMatrix& rep, const std::vector<CMatrix>& quotient, int iterationCap, double psdTol,
                         CMatrix* point) {
    if (min_eigenvalue(rep) >= -psdTol) {
        if (point) *point = rep;
        return FeasStatus::Feasible;
    }
    if (quotient.empty()) return FeasStatus::InfeasibleNumerically;
    FeasibilityProblem p;
    p.dim = static_cast<int>(rep.rows());
    p.iterationCap = iterationCap;
    p.add_affine_membership(rep, quotient);
    const auto r = solve_feasibility(p);
    if (point) *point = r.point;
    return r.status;
}

FeasibilityProblem extension_problem(const SubspaceMap& f, bool zeroOutside, bool tracePreserving, int iterationCap) {
    FeasibilityProblem p;
    p.dim = f.dOut * f.dIn;
    p.iterationCap = iterationCap;
    const auto ks = f.has_quotient() ? hermitian_complement(f.quotientBasis, f.dOut) : hermitian_basis(f.dOut);
    for (int m = 0; m < f.dim(); ++m) {
        const CMatrix bc = f.domainBasis[m].conjugate();
        for (const auto& k : ks) p.add(kron(k, bc), hs_inner(k, f.images[m]).real());
    }
    if (zeroOutside)
        for (const auto& b : hermitian_complement(f.domainBasis, f.dIn)) {
            const CMatrix bc = b.conjugate();
            for (const auto& k : ks) p.add(kron(k, bc), 0.0);
        }
    if (tracePreserving) {
        const CMatrix id = identity(f.dOut);
        for (const auto& h : hermitian_basis(f.dIn)) p.add(kron(id, h.conjugate()), h.trace().real());
    }
    return p;
}

namespace {

std::vector<CMatrix> tensor_quotient(const std::vector<CMatrix>& q, int dW) {
    if (dW == 1) return q;
    std::vector<CMatrix> out;
    for (const auto& a : q)
        for (const auto& e : hermitian_basis(dW)) out.push_back(kron(a, e));
    return out;
}

class Classifier {
public:
    Classifier(const SubspaceMap& f, const ClassifyOptions& opt) : f_(f), opt_(opt), rng_(opt.seed) {
        if (f.dim() != static_cast<int>(f.images.size())) throw DimensionError("classify: basis and images differ in length");
        for (const auto& b : f.domainBasis)
            if (b.rows() != f.dIn) throw DimensionError("classify: domain basis element has wrong size");
        for (const auto& im : f.images)
            if (im.rows() != f.dOut) throw DimensionError("classify: image has wrong size");
        seed_state();
    }

    FieldResult cpze() {
        if (cpze_) return *cpze_;
        FieldResult r;
        const CMatrix c = f_.zero_extension_choi();
        const auto e = classify_cpze(HermitianMatrix::from_symmetrized(c), opt_.tol.psd);
        choiMin_ = e.minEigenvalue;
        if (e.verdict == Tri::Yes) {
            r.verdict = Tri::Yes;
            r.certificate = c;
        } else if (!f_.has_quotient()) {
            r.verdict = Tri::No;
            r.witness = MapWitness{"choi-eigenvector", CMatrix(e.eigenvector), c, e.minEigenvalue, f_.dIn};
        } else {
            const auto sol = solve_feasibility(extension_problem(f_, true, false, opt_.iterationCap));
            if (sol.status == FeasStatus::Feasible) {
                r.verdict = Tri::Yes;
                r.certificate = sol.point;
                r.note = "positive element found in the Choi class";
            } else if (sol.status == FeasStatus::InfeasibleNumerically) {
                r.verdict = Tri::No;
                r.witness = MapWitness{"choi-eigenvector", CMatrix(e.eigenvector), c, e.minEigenvalue, f_.dIn};
                r.note = "no positive element in the Choi class";
            } else {
                r.note = "Choi-class search inconclusive";
            }
        }
        cpze_ = r;
        return r;
    }

    double choi_min() {
        cpze();
        return choiMin_;
    }

    // Witness search at dW = 1: hints, basis projectors in R, known states, random boundary points.
    std::optional<MapWitness> positivity_witness() {
        if (posSearched_) return posWitness_;
        posSearched_ = true;
        std::vector<CMatrix> cands;
        for (const auto& h : opt_.positivityHints)
            if (h.rows() == f_.dIn && min_eigenvalue(h) >= -1e-12 && f_.domain_residual(h) <= 1e-8) cands.push_back(h);
        for (int i = 0; i < f_.dIn; ++i) {
            const CMatrix p = ketbra(f_.dIn, i, i);
            if (f_.domain_residual(p) <= 1e-9) cands.push_back(p);
        }
        for (const auto& s : f_.domainStates) cands.push_back(s);
        for (const auto& b : f_.domainBasis)
            if (min_eigenvalue(b) >= -1e-12) cands.push_back(b);
        for (const auto& y : cands)
            if (auto w = check(y, 1, opt_.tol.psd, "positive-input")) return posWitness_ = w;
        if (auto w = random_search(1, opt_.tol.psd)) return posWitness_ = w;
        return posWitness_;
    }

    FieldResult positive() {
        FieldResult r;
        r.witnessDimTested = 1;
        if (auto w = positivity_witness()) {
            r.verdict = Tri::No;
            r.witness = w;
            return r;
        }
        if (f_.dim() <= 2 && haveState_) {
            // The states of R form a point or a segment; positivity is decided at its ends.
            std::vector<CMatrix> ends{state_};
            if (f_.dim() == 2) {
                CMatrix d = f_.domainBasis[0];
                if (f_.domain_residual(d) > 1e-9 || hs_norm(d - hs_inner(state_, d) / hs_inner(state_, state_) * state_) < 1e-9)
                    d = f_.domainBasis[1];
                d -= (d.trace() / state_.trace()) * state_;
                ends = {boundary(state_, d), boundary(state_, -d)};
            }
            bool all = true;
            for (const auto& e : ends) {
                if (auto w = check(e, 1, opt_.tol.psd, "positive-input")) {
                    r.verdict = Tri::No;
                    r.witness = w;
                    return r;
                }
                const CMatrix out = f_.apply(e);
                if (class_has_psd(out, f_.quotientBasis, opt_.iterationCap, opt_.tol.psd) != FeasStatus::Feasible) all = false;
            }
            if (all) {
                r.verdict = Tri::Yes;
                r.note = "extreme states of the domain checked exactly";
                return r;
            }
        }
        r.note = "no positivity witness found";
        return r;
    }

    FieldResult cp() {
        if (cp_) return *cp_;
        FieldResult r;
        const auto z = cpze();
        if (z.verdict == Tri::Yes) {
            r.verdict = Tri::Yes;
            r.certificate = z.certificate;
            r.note = "zero extension is completely positive";
            return *(cp_ = r);
        }
        if (auto w = positivity_witness()) {
            r.verdict = Tri::No;
            r.witness = w;
            r.witnessDimTested = 1;
            return *(cp_ = r);
        }
        if (f_.full_domain()) {
            // The zero extension is the map itself.
            r.verdict = z.verdict;
            r.witness = z.witness;
            r.witnessDimTested = f_.dIn;
            r.note = "full domain: decided by the Choi matrix";
            return *(cp_ = r);
        }
        const auto sol = solve_feasibility(extension_problem(f_, false, false, opt_.iterationCap));
        if (sol.status == FeasStatus::Feasible) {
            r.verdict = Tri::Yes;
            r.certificate = sol.point;
            r.note = "completely positive extension found";
            return *(cp_ = r);
        }
        int tested = 1;
        if (sol.status == FeasStatus::InfeasibleNumerically) {
            tested = f_.dOut;
            if (auto w = dual_witness(sol.dualWitness)) {
                r.verdict = Tri::No;
                r.witness = w;
                r.witnessDimTested = tested;
                r.note = "witness derived from the infeasible extension problem";
                return *(cp_ = r);
            }
        }
        for (int dW = 2; dW <= f_.dIn; ++dW) {
            tested = std::max(tested, dW);
            if (auto w = random_search(dW, opt_.tol.witness)) {
                r.verdict = Tri::No;
                r.witness = w;
                r.witnessDimTested = tested;
                return *(cp_ = r);
            }
        }
        r.witnessDimTested = tested;
        r.note = sol.status == FeasStatus::InfeasibleNumerically ? "extension problem infeasible but no witness found"
                                                                 : "extension search inconclusive";
        return *(cp_ = r);
    }

    FieldResult cpte() {
        FieldResult r;
        if (f_.trace_preservation_residual() > opt_.tol.invariant) {
            r.verdict = Tri::No;
            r.note = "not trace preserving on the domain";
            return r;
        }
        const auto c = cp();
        r.witnessDimTested = c.witnessDimTested;
        if (c.verdict == Tri::No) {
            r.verdict = Tri::No;
            r.witness = c.witness;
            r.note = "not completely positive";
            return r;
        }
        if (f_.full_domain() && !f_.has_quotient()) {
            r.verdict = c.verdict;
            r.certificate = c.certificate;
            r.note = "full domain: the map is its own extension";
            return r;
        }
        const auto sol = solve_feasibility(extension_problem(f_, false, true, opt_.iterationCap));
        if (sol.status == FeasStatus::Feasible) {
            r.verdict = Tri::Yes;
            r.certificate = sol.point;
            r.note = "trace-preserving completely positive extension found";
        } else {
            r.note = "no trace-preserving extension certified";
        }
        return r;
    }

    int witness_dims() const { return maxDimW_; }

private:
    void seed_state() {
        CMatrix acc = CMatrix::Zero(f_.dIn, f_.dIn);
        int count = 0;
        for (const auto& s : f_.domainStates)
            if (s.trace().real() > 1e-12 && f_.domain_residual(s) <= 1e-8) {
                acc += s / s.trace().real();
                ++count;
            }
        if (count == 0) {
            for (int i = 0; i < f_.dIn; ++i) {
                const CMatrix p = ketbra(f_.dIn, i, i);
                if (f_.domain_residual(p) <= 1e-9) {
                    acc += p;
                    ++count;
                }
            }
        }
        if (count == 0 && f_.domain_residual(identity(f_.dIn)) <= 1e-9) {
            acc = identity(f_.dIn);
            count = 1;
        }
        if (count > 0) {
            state_ = hermitian_part(acc / acc.trace().real());
            haveState_ = true;
        }
    }

    // Y0 + t D at the largest t keeping it PSD.
    CMatrix boundary(const CMatrix& y0, const CMatrix& d) {
        double hi = 1.0;
        while (min_eigenvalue(y0 + hi * d) >= 0.0 && hi < 1e8) hi *= 2.0;
        if (hi >= 1e8) return y0 + hi * d;
        double lo = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (min_eigenvalue(y0 + mid * d) >= 0.0) lo = mid;
            else hi = mid;
        }
        return y0 + lo * d;
    }

    std::optional<MapWitness> check(const CMatrix& y, int dW, double threshold, const char* kind) {
        maxDimW_ = std::max(maxDimW_, dW);
        const CMatrix out = f_.apply_tensor(y, dW);
        const double lam = min_eigenvalue(out);
        if (lam >= -threshold) return std::nullopt;
        if (f_.has_quotient()) {
            const auto q = tensor_quotient(f_.quotientBasis, dW);
            if (class_has_psd(out, q, opt_.iterationCap, opt_.tol.psd) != FeasStatus::InfeasibleNumerically) return std::nullopt;
        }
        return MapWitness{kind, y, out, lam, dW};
    }

    CMatrix random_direction(int dW) {
        CMatrix d = CMatrix::Zero(f_.dIn * dW, f_.dIn * dW);
        for (const auto& b : f_.domainBasis) {
            const CMatrix h = dW == 1 ? CMatrix::Constant(1, 1, rng_.normal()) : rng_.hermitian(dW);
            d += kron(b, h);
        }
        return d;
    }

    std::optional<MapWitness> random_search(int dW, double threshold) {
        if (!haveState_) return std::nullopt;
        maxDimW_ = std::max(maxDimW_, dW);
        const CMatrix y0 = kron(state_, identity(dW) / static_cast<double>(dW));
        auto score = [&](const CMatrix& d, CMatrix& y) {
            CMatrix dd = d - (d.trace() / y0.trace()) * y0;
            y = boundary(y0, dd);
            return min_eigenvalue(f_.apply_tensor(y, dW));
        };
        struct Cand {
            double lam;
            CMatrix y;
        };
        std::vector<Cand> cands;
        CMatrix bestD;
        double best = 1e300;
        for (int t = 0; t < opt_.randomTrials; ++t) {
            const CMatrix d = random_direction(dW);
            CMatrix y;
            const double lam = score(d, y);
            cands.push_back({lam, y});
            if (lam < best) {
                best = lam;
                bestD = d;
            }
        }
        for (int t = 0; t < opt_.randomTrials && bestD.size() > 0; ++t) {
            const CMatrix d = bestD + 0.25 * random_direction(dW);
            CMatrix y;
            const double lam = score(d, y);
            if (lam < best) {
                best = lam;
                bestD = d;
                cands.push_back({lam, y});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.lam < b.lam; });
        const size_t checks = f_.has_quotient() ? 3 : 1;
        for (size_t k = 0; k < std::min(checks, cands.size()); ++k)
            if (auto w = check(cands[k].y, dW, threshold, dW == 1 ? "positive-input" : "tensored-input")) return w;
        return std::nullopt;
    }

    // Separating direction of the infeasible extension problem, turned into an input on
    // R (x) B(C^dOut) whose image pairs negatively with the maximally entangled vector.
    std::optional<MapWitness> dual_witness(const CMatrix& gap) {
        if (gap.size() == 0 || hs_norm(gap) == 0.0) return std::nullopt;
        const int dW = f_.dOut;
        const CMatrix y = swap_factors(gap.conjugate(), f_.dOut, f_.dIn);
        CMatrix yr = hermitian_part(project_tensor(f_.domainBasis, y, f_.dIn, dW));
        yr /= hs_norm(yr);
        const double lam = min_eigenvalue(yr);
        if (lam < 0.0) {
            if (!haveState_) return std::nullopt;
            const CMatrix y0 = kron(state_, identity(dW) / static_cast<double>(dW));
            double s = 0.0, hi = 1e-6;
            while (min_eigenvalue(yr + hi * y0) < 0.0 && hi < 1.0) hi *= 2.0;
            if (min_eigenvalue(yr + hi * y0) < 0.0) return std::nullopt;
            double lo = s;
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (min_eigenvalue(yr + mid * y0) >= 0.0) hi = mid;
                else lo = mid;
            }
            yr += hi * y0;
        }
        return check(yr, dW, opt_.tol.witness, "tensored-input");
    }

    const SubspaceMap& f_;
    ClassifyOptions opt_;
    Rng rng_;
    std::optional<FieldResult> cpze_, cp_;
    std::optional<MapWitness> posWitness_;
    bool posSearched_ = false;
    double choiMin_ = 0.0;
    CMatrix state_;
    bool haveState_ = false;
    int maxDimW_ = 0;
};

}  // namespace

FieldResult classify_cpze(const SubspaceMap& f, const ClassifyOptions& opt) { return Classifier(f, opt).cpze(); }

FieldResult classify_positive(const SubspaceMap& f, const ClassifyOptions& opt) {
    Classifier c(f, opt);
    auto p = c.positive();
    if (p.verdict == Tri::Undetermined && c.cp().verdict == Tri::Yes) {
        p.verdict = Tri::Yes;
        p.note = "completely positive";
    }
    return p;
}

FieldResult classify_cp(const SubspaceMap& f, const ClassifyOptions& opt) { return Classifier(f, opt).cp(); }

FieldResult classify_cpte(const SubspaceMap& f, const ClassifyOptions& opt) { return Classifier(f, opt).cpte(); }

CPVerdict classify(const SubspaceMap& f, const ClassifyOptions& opt) {
    Classifier c(f, opt);
    CPVerdict v;
    v.seed = opt.seed;
    const auto z = c.cpze();
    v.choiMinEigenvalue = c.choi_min();
    v.cpze = z.verdict;
    v.cpzeWitness = z.witness;
    v.cpzeCertificate = z.certificate;
    if (!z.note.empty()) v.notes.push_back("cpze: " + z.note);

    const auto k = c.cp();
    v.cp = k.verdict;
    v.cpWitness = k.witness;
    v.cpCertificate = k.certificate;
    if (!k.note.empty()) v.notes.push_back("cp: " + k.note);

    const auto t = c.cpte();
    v.cpte = t.verdict;
    v.cpteCertificate = t.certificate;
    if (!t.note.empty()) v.notes.push_back("cpte: " + t.note);

    if (v.cp == Tri::Yes) {
        v.positive = Tri::Yes;
    } else {
        const auto p = c.positive();
        v.positive = p.verdict;
        v.positiveWitness = p.witness;
        if (!p.note.empty()) v.notes.push_back("positive: " + p.note);
    }
    v.witnessDimTested = std::max({c.witness_dims(), k.witnessDimTested, t.witnessDimTested});
    enforce_lattice(v);
    return v;
}

}  // namespace cpkit
