#include "cpkit/analysis.hpp"

#include "cpkit/assignment.hpp"
#include "cpkit/consistency.hpp"
#include "cpkit/cpclass.hpp"
#include "cpkit/dynmaps.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace cpkit {

const std::vector<std::string>& all_checks() {
    static const std::vector<std::string> names{"consistency", "assignment", "dynmap", "positive", "cp",
                                                "cpte",        "cpze",       "domain", "osr"};
    return names;
}

std::vector<std::string> resolve_checks(const std::vector<std::string>& requested) {
    std::set<std::string> want;
    for (const auto& r : requested) {
        if (r == "all") {
            want.insert(all_checks().begin(), all_checks().end());
            continue;
        }
        if (std::find(all_checks().begin(), all_checks().end(), r) == all_checks().end())
            throw ParseError("--checks: unknown check \"" + r + "\"");
        want.insert(r);
    }
    if (requested.empty()) want.insert(all_checks().begin(), all_checks().end());
    if (want.count("dynmap")) want.insert("consistency");
    std::vector<std::string> out;
    for (const auto& n : all_checks())
        if (want.count(n)) out.push_back(n);
    return out;
}

namespace {

struct Skip {
    std::string reason;
};

struct LabelledUnitary {
    std::string label;
    CMatrix U;
    bool sampled = false;
};

const char* kFields[4] = {"positive", "cp", "cpte", "cpze"};

Tri field_of(const CPVerdict& v, int k) {
    switch (k) {
        case 0: return v.positive;
        case 1: return v.cp;
        case 2: return v.cpte;
        default: return v.cpze;
    }
}

std::string word_label(const std::vector<int>& word) {
    std::string s;
    for (int g : word) s += "g" + std::to_string(g);
    return s;
}

std::vector<LabelledUnitary> sample_unitaries(const SemigroupSpec& g, int samples, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabelledUnitary> out;
    const int n = g.dims.total();
    switch (g.kind) {
        case SemigroupKind::Full:
            for (int k = 0; k < samples; ++k) out.push_back({"haar[" + std::to_string(k) + "]", rng.haar_unitary(n), true});
            break;
        case SemigroupKind::Local:
            for (int k = 0; k < samples; ++k)
                out.push_back({"local[" + std::to_string(k) + "]", rng.local_unitary(g.dims), true});
            break;
        case SemigroupKind::Hamiltonian:
            for (int k = 0; k < samples; ++k) {
                const double t = 0.25 * (k + 1);
                std::ostringstream label;
                label << "t=" << t;
                out.push_back({label.str(), expm_hermitian(g.hamiltonian, t), true});
            }
            break;
        case SemigroupKind::Generators: {
            const int m = static_cast<int>(g.generators.size());
            for (int k = 0; k < samples; ++k) {
                std::vector<int> word;
                if (k < m) word = {k};
                else
                    for (int len = rng.uniform_int(2, 4); len > 0; --len) word.push_back(rng.uniform_int(0, m - 1));
                // The word g_a g_b ... acts right to left.
                CMatrix u = identity(n);
                for (int w : word) u = u * g.generators[w];
                out.push_back({word_label(word), u, true});
            }
            break;
        }
    }
    return out;
}

bool same_json(const json& a, const json& b, double tol) {
    if (a.is_boolean() || a.is_string()) return a == b;
    if (a.is_number()) return b.is_number() && std::abs(a.get<double>() - b.get<double>()) <= tol;
    if (a.is_object() && a.contains("rows")) {
        if (!b.is_object() || !b.contains("rows")) return false;
        const CMatrix x = matrix_from_json(a), y = matrix_from_json(b);
        return x.rows() == y.rows() && x.cols() == y.cols() && max_abs(x - y) <= tol;
    }
    return a == b;
}

class Pipeline {
public:
    Pipeline(const GalleryCase& c, const AnalysisRequest& r, std::vector<std::string> checks, int samples)
        : c_(c), r_(r), checks_(std::move(checks)), samples_(samples) {}

    json run();

private:
    const GalleryCase& c_;
    const AnalysisRequest& r_;
    std::vector<std::string> checks_;
    int samples_;
    json observed_ = json::object();
    json checkResults_ = json::object();
    json timings_ = json::object();
    std::optional<AssignmentMap> a_;
    std::optional<std::string> assignmentError_;
    std::optional<bool> consistent_;
    std::optional<CPVerdict> assignmentVerdict_;

    bool requested(const std::string& n) const { return std::find(checks_.begin(), checks_.end(), n) != checks_.end(); }
    ClassifyOptions options() const {
        ClassifyOptions o;
        o.seed = r_.seed;
        o.tol = r_.tol;
        return o;
    }

    template <class F>
    void run_check(const std::string& name, F fn) {
        if (!requested(name)) return;
        const auto t0 = std::chrono::steady_clock::now();
        json res;
        try {
            res = fn();
            res["status"] = "completed";
        } catch (const Skip& s) {
            res = json{{"status", "skipped"}, {"reason", s.reason}};
        } catch (const std::exception& e) {
            res = json{{"status", "failed"}, {"error", e.what()}};
        }
        // status first for readability
        json ordered{{"status", res["status"]}};
        for (auto it = res.begin(); it != res.end(); ++it)
            if (it.key() != "status") ordered[it.key()] = it.value();
        checkResults_[name] = ordered;
        timings_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    const AssignmentMap& assignment() {
        if (a_) return *a_;
        if (assignmentError_) throw Skip{*assignmentError_};
        try {
            a_ = build_assignment(c_.subspace, r_.tol);
        } catch (const DomainError& e) {
            assignmentError_ = std::string("no assignment map: ") + e.what();
            throw Skip{*assignmentError_};
        }
        return *a_;
    }

    const CPVerdict& assignment_verdict() {
        if (!assignmentVerdict_) {
            ClassifyOptions o = options();
            o.positivityHints = c_.positivityHints;
            assignmentVerdict_ = classify(assignment().as_subspace_map(), o);
        }
        return *assignmentVerdict_;
    }

    std::vector<LabelledUnitary> unitaries() const {
        if (r_.unitary) return {{"explicit", *r_.unitary, false}};
        if (!c_.unitaries.empty()) {
            std::vector<LabelledUnitary> out;
            for (size_t k = 0; k < c_.unitaries.size(); ++k)
                out.push_back({k < c_.unitaryLabels.size() ? c_.unitaryLabels[k] : "u[" + std::to_string(k) + "]",
                               c_.unitaries[k], false});
            return out;
        }
        return sample_unitaries(c_.semigroup, samples_, r_.seed);
    }

    // Unitaries whose maps are well defined; throws Skip when sampling from an inconsistent semigroup.
    std::vector<LabelledUnitary> usable_unitaries() const {
        auto us = unitaries();
        if (!us.empty() && us.front().sampled && consistent_ && !*consistent_)
            throw Skip{"V is not consistent for the semigroup; dynamical maps are undefined"};
        return us;
    }

    json check_consistency();
    json check_assignment();
    json check_dynmap();
    json check_field(int k);
    json check_domain();
    json check_osr();
    json expectations() const;
};

json Pipeline::check_consistency() {
    const SemigroupSpec& g = c_.semigroup;
    g.validate();
    const auto v = check_g_consistency(c_.subspace, g, r_.seed, 50, r_.tol);
    json res{{"consistent", v.consistent}, {"semigroup", to_string(g.kind)}, {"method", v.method}, {"closureDim", v.closureDim}};
    if (v.witness)
        res["witness"] = {{"word", v.witness->word},
                          {"norm", v.witness->norm},
                          {"X", matrix_to_json(v.witness->X)},
                          {"U", matrix_to_json(v.witness->U)}};
    bool all = v.consistent;
    if (r_.unitary || !c_.unitaries.empty()) {
        json list = json::array();
        for (const auto& u : unitaries()) {
            const auto uv = check_u_consistency(c_.subspace, u.U, r_.tol);
            json e{{"label", u.label}, {"consistent", uv.consistent}};
            if (uv.witness) e["witnessNorm"] = uv.witness->norm;
            list.push_back(e);
            all = all && uv.consistent;
        }
        res["unitaries"] = list;
    }
    res["consistentOverall"] = all;
    consistent_ = all;
    observed_["consistency"] = all;
    return res;
}

json Pipeline::check_assignment() {
    const AssignmentMap& a = assignment();
    const int dS = a.dims.dS;
    // Choi of the orthogonal projection onto Tr_B V: sum_m B_m (x) conj(B_m) over an orthonormal basis.
    CMatrix pchoi = CMatrix::Zero(dS * dS, dS * dS);
    for (const auto& b : orthonormalize(a.source)) pchoi += kron(b, b.conjugate());
    const double pmin = min_eigenvalue(pchoi);
    json res{{"dimV", c_.subspace.dim()},
             {"dimV0", static_cast<int>(a.v0Basis.size())},
             {"dimTrBV", a.dim()},
             {"selfAdjoint", c_.subspace.selfAdjointVerified},
             {"stateSpanned", to_string(c_.subspace.stateSpannedStatus)},
             {"consistencyResidual", a.consistency_residual()},
             {"traceResidual", a.trace_residual()},
             {"daggerResidual", a.dagger_residual()},
             {"projectionChoiMinEigenvalue", pmin}};
    observed_["dims.V"] = c_.subspace.dim();
    observed_["dims.V0"] = static_cast<int>(a.v0Basis.size());
    observed_["dims.TrBV"] = a.dim();
    observed_["assignment.projectionChoiMin"] = pmin;
    return res;
}

json Pipeline::check_field(int k) {
    const CPVerdict& v = assignment_verdict();
    const std::string f = kFields[k];
    json res{{"verdict", to_string(field_of(v, k))}, {"seed", v.seed}, {"witnessDimTested", v.witnessDimTested},
             {"latticeConsistent", v.lattice_consistent()}};
    const std::optional<MapWitness>* w = nullptr;
    if (k == 0) w = &v.positiveWitness;
    if (k == 1) w = &v.cpWitness;
    if (k == 3) w = &v.cpzeWitness;
    if (w && *w) res["witness"] = witness_to_json(**w);
    if (k == 3) res["choiMinEigenvalue"] = v.choiMinEigenvalue;
    json notes = json::array();
    for (const auto& n : v.notes)
        if (n.rfind(f + ":", 0) == 0) notes.push_back(n);
    res["notes"] = notes;
    observed_["assignment." + f] = to_string(field_of(v, k));
    if (k == 0 && v.positiveWitness) observed_["assignment.positiveWitnessEigenvalue"] = v.positiveWitness->eigenvalue;
    return res;
}

json Pipeline::check_dynmap() {
    const AssignmentMap& a = assignment();
    const auto us = usable_unitaries();
    json maps = json::array();
    int counts[4][3] = {};
    int built = 0;
    double maxTrace = 0.0, maxHerm = 0.0, maxShift = 0.0;
    std::optional<CMatrix> firstChoi;
    bool constant = true;
    std::optional<CMatrix> constantValue;
    for (size_t k = 0; k < us.size(); ++k) {
        const auto& u = us[k];
        json e{{"label", u.label}};
        const auto cv = check_u_consistency(a.v0Basis, a.dims, u.U, r_.tol);
        if (!cv.consistent) {
            e["consistent"] = false;
            e["witnessNorm"] = cv.witness ? cv.witness->norm : 0.0;
            maps.push_back(e);
            continue;
        }
        const DynamicalMap psi = build_dynamical_map(a, u.U, r_.tol, r_.seed + k);
        ClassifyOptions o = options();
        o.seed = r_.seed + k;
        const CPVerdict v = classify(psi.as_subspace_map(), o);
        ++built;
        e["consistent"] = true;
        for (int f = 0; f < 4; ++f) {
            e[kFields[f]] = to_string(field_of(v, f));
            counts[f][static_cast<int>(field_of(v, f))]++;
        }
        e["choiMinEigenvalue"] = v.choiMinEigenvalue;
        e["traceResidual"] = psi.trace_residual();
        e["hermiticityResidual"] = psi.hermiticity_residual();
        e["representativeShiftResidual"] = psi.representativeShiftResidual;
        if (!u.sampled) e["choi"] = matrix_to_json(psi.choiOfZeroExtension.matrix());
        if (v.cpWitness) e["cpWitness"] = witness_to_json(*v.cpWitness);
        maxTrace = std::max(maxTrace, psi.trace_residual());
        maxHerm = std::max(maxHerm, psi.hermiticity_residual());
        maxShift = std::max(maxShift, psi.representativeShiftResidual);
        if (!firstChoi) firstChoi = psi.choiOfZeroExtension.matrix();

        // Constant map X -> Tr(X) rho.
        int best = 0;
        for (int m = 1; m < psi.dim(); ++m)
            if (std::abs(psi.domainBasis[m].trace()) > std::abs(psi.domainBasis[best].trace())) best = m;
        const cplx t = psi.domainBasis[best].trace();
        if (std::abs(t) < 1e-12) constant = false;
        else {
            const CMatrix rho = psi.images[best] / t;
            for (int m = 0; m < psi.dim(); ++m)
                if (max_abs(psi.images[m] - psi.domainBasis[m].trace() * rho) > r_.tol.invariant) constant = false;
            if (constantValue && max_abs(*constantValue - rho) > r_.tol.invariant) constant = false;
            constantValue = rho;
        }
        maps.push_back(e);
    }
    if (built == 0) throw Skip{"no unitary gives a well-defined dynamical map"};
    json summary = json::object();
    for (int f = 0; f < 4; ++f) {
        const char* all = counts[f][0] == built ? "yes" : (counts[f][1] > 0 ? "no" : "undetermined");
        summary[kFields[f]] = {{"yes", counts[f][0]}, {"no", counts[f][1]}, {"undetermined", counts[f][2]}, {"all", all}};
        observed_[std::string("dynmap.") + kFields[f] + ".all"] = all;
    }
    observed_["dynmap.cp.someNo"] = counts[1][1] > 0;
    observed_["dynmap.choi.inputOutput"] = matrix_to_json(swap_factors(*firstChoi, a.dims.dS, a.dims.dS));
    observed_["dynmap.constant"] = constant && constantValue ? matrix_to_json(*constantValue) : json(nullptr);
    return json{{"unitaries", static_cast<int>(us.size())},
                {"mapsBuilt", built},
                {"summary", summary},
                {"maxTraceResidual", maxTrace},
                {"maxHermiticityResidual", maxHerm},
                {"maxRepresentativeShiftResidual", maxShift},
                {"maps", maps}};
}

json Pipeline::check_domain() {
    const AssignmentMap& a = assignment();
    const int dS = a.dims.dS;
    json res = json::object();
    json probes = json::array();
    for (const auto& p : c_.probes) {
        const double t = physical_domain_extent(a, p.center, p.direction, p.tMax, 1e-10, r_.tol, 5000);
        probes.push_back({{"label", p.label}, {"extent", t}, {"tMax", p.tMax}});
        observed_["domain.extent." + p.label] = t;
    }
    res["probes"] = probes;
    auto queries = c_.membershipQueries;
    if (queries.empty()) {
        queries.push_back({"maximallyMixed", identity(dS) / static_cast<double>(dS)});
        for (int i = 0; i < dS; ++i) queries.push_back({"basis[" + std::to_string(i) + "]", ketbra(dS, i, i)});
    }
    json members = json::array();
    for (const auto& [label, state] : queries) {
        const auto q = physical_domain_membership(a, state, r_.tol, 5000);
        members.push_back({{"label", label}, {"verdict", to_string(q.verdict)}, {"residual", q.residual}, {"reason", q.reason}});
        observed_["domain.membership." + label] = to_string(q.verdict);
    }
    res["membership"] = members;
    const bool full = a.dim() == dS * dS && domain_is_full(c_.subspace, r_.seed);
    res["full"] = full;
    observed_["domain.full"] = full;
    return res;
}

json Pipeline::check_osr() {
    const AssignmentMap& a = assignment();
    const AssignmentOSR ao = assignment_osr(a);
    double recon = 0.0;
    for (int m = 0; m < a.dim(); ++m) {
        const CMatrix d = ao.osr.apply(a.source[m]) - a.representatives[m];
        recon = std::max(recon, hs_norm(d - orthogonal_projection(a.v0Basis, d)));
    }
    const bool kraus = ao.positiveClassElement && ao.osr.kraus_form(r_.tol.psd);
    json res{{"assignment",
              {{"positiveClassElement", ao.positiveClassElement},
               {"kraus", kraus},
               {"terms", static_cast<int>(ao.osr.coefficients.size())},
               {"coefficients", ao.osr.coefficients},
               {"minCoefficient", ao.osr.min_coefficient()},
               {"reconstructionResidual", recon}}}};
    observed_["osr.assignment.kraus"] = kraus;

    std::vector<LabelledUnitary> us;
    try {
        us = usable_unitaries();
    } catch (const Skip& s) {
        res["dynmap"] = {{"skipped", s.reason}};
        return res;
    }
    json maps = json::array();
    bool allKraus = true;
    int built = 0;
    for (size_t k = 0; k < us.size(); ++k) {
        if (!check_u_consistency(a.v0Basis, a.dims, us[k].U, r_.tol).consistent) continue;
        const DynamicalMap psi = build_dynamical_map(a, us[k].U, r_.tol, r_.seed + k);
        const OSRData osr = dynmap_osr(psi);
        double r = 0.0;
        for (int m = 0; m < psi.dim(); ++m) r = std::max(r, hs_norm(osr.apply(psi.domainBasis[m]) - psi.images[m]));
        const double scale = std::max(1.0, psi.choiOfZeroExtension.matrix().cwiseAbs().maxCoeff());
        const bool kr = osr.min_coefficient() >= -r_.tol.psd * scale;
        allKraus = allKraus && kr;
        ++built;
        maps.push_back({{"label", us[k].label},
                        {"kraus", kr},
                        {"terms", static_cast<int>(osr.coefficients.size())},
                        {"minCoefficient", osr.min_coefficient()},
                        {"reconstructionResidual", r}});
    }
    res["dynmap"] = {{"maps", maps}, {"allKraus", built > 0 && allKraus}};
    if (built > 0) observed_["osr.dynmap.kraus"] = allKraus;
    return res;
}

json Pipeline::expectations() const {
    json out = json::array();
    for (const auto& e : c_.expected) {
        json item{{"key", e.key}, {"expected", e.value}, {"origin", e.origin}, {"tol", e.tol}};
        const json* obs = nullptr;
        if (observed_.contains(e.key)) obs = &observed_[e.key];
        else if (c_.observed.contains(e.key)) obs = &c_.observed[e.key];
        if (!obs) {
            item["observed"] = nullptr;
            item["status"] = "unevaluated";
        } else {
            item["observed"] = *obs;
            item["status"] = same_json(e.value, *obs, e.tol) ? "match" : "mismatch";
        }
        out.push_back(item);
    }
    return out;
}

json Pipeline::run() {
    run_check("consistency", [&] { return check_consistency(); });
    run_check("assignment", [&] { return check_assignment(); });
    run_check("dynmap", [&] { return check_dynmap(); });
    for (int k = 0; k < 4; ++k) run_check(kFields[k], [&] { return check_field(k); });
    run_check("domain", [&] { return check_domain(); });
    run_check("osr", [&] { return check_osr(); });

    const json exp = expectations();
    json summary{{"completed", json::array()}, {"skipped", json::array()}, {"failed", json::array()}};
    for (const auto& n : checks_) summary[checkResults_[n]["status"].get<std::string>()].push_back(n);
    int match = 0, mismatch = 0, unevaluated = 0;
    for (const auto& e : exp) {
        const auto s = e["status"].get<std::string>();
        if (s == "match") ++match;
        else if (s == "mismatch") ++mismatch;
        else ++unevaluated;
    }
    summary["expectations"] = {{"match", match}, {"mismatch", mismatch}, {"unevaluated", unevaluated}};
    return json{{"checks", checkResults_}, {"expectations", exp}, {"summary", summary}, {"timings", timings_}};
}

json request_echo(const AnalysisRequest& r, const std::vector<std::string>& checks, int samples, const GalleryCase& c) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    json tol{{"hermiticity", r.tol.hermiticity}, {"rank", r.tol.rank},         {"psd", r.tol.psd},
             {"feasibility", r.tol.feasibility}, {"consistency", r.tol.consistency}, {"witness", r.tol.witness},
             {"kernel", r.tol.kernel},           {"invariant", r.tol.invariant},     {"osr", r.tol.osr}};
    json overrides = json::object();
    for (const auto& [k, v] : r.tolOverrides) overrides[k] = v;
    return json{{"source", r.source},
                {"params", params},
                {"checks", checks},
                {"semigroup", semigroup_to_json(c.semigroup)},
                {"unitary", r.unitary ? matrix_to_json(*r.unitary) : json(nullptr)},
                {"samples", samples},
                {"seed", r.seed},
                {"format", r.format},
                {"tolerances", tol},
                {"tolOverrides", overrides}};
}

}  // namespace

bool AnalysisReport::ok() const { return body.contains("summary") && body["summary"]["failed"].empty(); }

std::string AnalysisReport::render(const std::string& format) const {
    if (format == "text") return render_text(body);
    return body.dump(2);
}

AnalysisReport analyze_case(const GalleryCase& c, const AnalysisRequest& request) {
    const auto checks = resolve_checks(request.checks);
    if (request.unitary) {
        const int n = c.subspace.dims.total();
        if (request.unitary->rows() != n || request.unitary->cols() != n)
            throw DimensionError("--unitary: expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
        if (!is_unitary(*request.unitary)) throw DomainError("--unitary: matrix is not unitary");
    }
    const int samples = request.samples > 0 ? request.samples : c.samples;
    Pipeline p(c, request, checks, samples);
    const json body = p.run();
    AnalysisReport rep;
    rep.body = json{{"schemaVersion", kReportSchemaVersion},
                    {"tool", {{"name", "cpkit"}, {"version", kToolVersion}}},
                    {"seed", request.seed},
                    {"request", request_echo(request, checks, samples, c)},
                    {"case",
                     {{"name", c.name},
                      {"description", c.description},
                      {"parameters", c.parameters},
                      {"dims", {{"dS", c.subspace.dims.dS}, {"dB", c.subspace.dims.dB}}},
                      {"extra", c.extra}}}};
    for (auto it = body.begin(); it != body.end(); ++it) rep.body[it.key()] = it.value();
    return rep;
}

AnalysisReport run_analyze(const AnalysisRequest& request) {
    GalleryCase c;
    const std::string& src = request.source;
    if (src.rfind("gallery:", 0) == 0) {
        c = make_gallery_case(src.substr(8), request.params);
    } else {
        if (!request.params.empty()) throw DomainError("--param applies only to gallery sources");
        const std::string path = src.rfind("file:", 0) == 0 ? src.substr(5) : src;
        const json j = load_json_file(path);
        const SubspaceInput in = subspace_from_json(j);
        c.name = path;
        c.description = "subspace read from " + path;
        c.subspace = build_subspace(in.generators, in.dims, request.tol.rank);
        c.semigroup = j.contains("semigroup") ? semigroup_from_json(j["semigroup"], in.dims, "$.semigroup")
                                              : SemigroupSpec::full(in.dims);
        if (j.contains("unitary")) {
            c.unitaries.push_back(matrix_from_json(j["unitary"], "$.unitary"));
            c.unitaryLabels.push_back("file");
        }
    }
    if (request.semigroup) c.semigroup = semigroup_from_json(*request.semigroup, c.subspace.dims, "--semigroup");
    return analyze_case(c, request);
}

AnalysisReport run_gallery(const std::string& name, const ParamMap& params, std::uint64_t seed, int samples,
                           const std::vector<std::string>& checks) {
    AnalysisRequest r;
    r.source = "gallery:" + name;
    r.params = params;
    r.seed = seed;
    r.samples = samples;
    r.checks = checks;
    return run_analyze(r);
}

std::vector<std::string> validate_report(const json& report) {
    std::vector<std::string> problems;
    auto need = [&](const json& j, const std::string& key, const std::string& path, auto pred, const char* what) {
        if (!j.is_object() || !j.contains(key)) {
            problems.push_back(path + "." + key + ": missing");
            return false;
        }
        if (!pred(j[key])) {
            problems.push_back(path + "." + key + ": expected " + what);
            return false;
        }
        return true;
    };
    auto isObj = [](const json& x) { return x.is_object(); };
    auto isArr = [](const json& x) { return x.is_array(); };
    auto isStr = [](const json& x) { return x.is_string(); };
    auto isNum = [](const json& x) { return x.is_number(); };
    if (need(report, "schemaVersion", "$", isNum, "a number") && report["schemaVersion"] != kReportSchemaVersion)
        problems.push_back("$.schemaVersion: unsupported version");
    if (need(report, "tool", "$", isObj, "an object")) {
        need(report["tool"], "name", "$.tool", isStr, "a string");
        need(report["tool"], "version", "$.tool", isStr, "a string");
    }
    need(report, "seed", "$", isNum, "a number");
    if (need(report, "request", "$", isObj, "an object")) {
        need(report["request"], "source", "$.request", isStr, "a string");
        need(report["request"], "checks", "$.request", isArr, "an array");
        need(report["request"], "tolerances", "$.request", isObj, "an object");
    }
    need(report, "case", "$", isObj, "an object");
    if (need(report, "checks", "$", isObj, "an object")) {
        for (auto it = report["checks"].begin(); it != report["checks"].end(); ++it) {
            const std::string path = "$.checks." + it.key();
            if (need(it.value(), "status", path, isStr, "a string")) {
                const auto s = it.value()["status"].get<std::string>();
                if (s != "completed" && s != "skipped" && s != "failed") problems.push_back(path + ".status: unknown value " + s);
            }
        }
    }
    if (need(report, "expectations", "$", isArr, "an array")) {
        for (size_t i = 0; i < report["expectations"].size(); ++i) {
            const json& e = report["expectations"][i];
            const std::string path = "$.expectations[" + std::to_string(i) + "]";
            need(e, "key", path, isStr, "a string");
            need(e, "origin", path, isStr, "a string");
            need(e, "status", path, isStr, "a string");
            if (!e.contains("expected") || !e.contains("observed")) problems.push_back(path + ": missing expected/observed");
        }
    }
    if (need(report, "summary", "$", isObj, "an object")) {
        for (const char* k : {"completed", "skipped", "failed"}) need(report["summary"], k, "$.summary", isArr, "an array");
    }
    need(report, "timings", "$", isObj, "an object");
    return problems;
}

std::string render_text(const json& report) {
    std::ostringstream os;
    os << "cpkit " << report["tool"]["version"].get<std::string>() << "  case " << report["case"]["name"].get<std::string>()
       << "  seed " << report["seed"] << "\n";
    os << "dims: dS=" << report["case"]["dims"]["dS"] << " dB=" << report["case"]["dims"]["dB"] << "\n\n";
    os << std::left;
    for (auto it = report["checks"].begin(); it != report["checks"].end(); ++it) {
        const json& r = it.value();
        os << std::setw(12) << it.key() << std::setw(10) << r["status"].get<std::string>();
        const auto st = r["status"].get<std::string>();
        if (st == "skipped") os << r["reason"].get<std::string>();
        else if (st == "failed") os << r["error"].get<std::string>();
        else if (it.key() == "consistency") {
            os << "consistent=" << r["consistentOverall"] << " (" << r["method"].get<std::string>() << ")";
            if (r.contains("witness")) os << " witness word " << r["witness"]["word"] << " norm " << r["witness"]["norm"];
        } else if (it.key() == "assignment") {
            os << "dim V=" << r["dimV"] << " V0=" << r["dimV0"] << " Tr_B V=" << r["dimTrBV"]
               << " projection Choi min=" << r["projectionChoiMinEigenvalue"];
        } else if (it.key() == "dynmap") {
            os << "maps=" << r["mapsBuilt"];
            for (const char* f : kFields) {
                const json& s = r["summary"][f];
                os << "  " << f << " " << s["yes"] << "/" << s["no"] << "/" << s["undetermined"];
            }
            os << " (yes/no/undetermined)";
        } else if (it.key() == "domain") {
            os << "full=" << r["full"];
            for (const auto& p : r["probes"]) os << "  extent[" << p["label"].get<std::string>() << "]=" << p["extent"];
            for (const auto& m : r["membership"])
                os << "  " << m["label"].get<std::string>() << ":" << m["verdict"].get<std::string>();
        } else if (it.key() == "osr") {
            os << "assignment kraus=" << r["assignment"]["kraus"];
            if (r["dynmap"].contains("allKraus")) os << "  dynmap kraus=" << r["dynmap"]["allKraus"];
        } else {
            os << r["verdict"].get<std::string>();
            if (r.contains("witness"))
                os << "  witness " << r["witness"]["kind"].get<std::string>() << " dimW=" << r["witness"]["dimW"]
                   << " eigenvalue=" << r["witness"]["eigenvalue"];
        }
        os << "\n";
    }
    if (!report["expectations"].empty()) {
        os << "\nexpectations:\n";
        for (const auto& e : report["expectations"])
            os << "  " << std::setw(40) << e["key"].get<std::string>() << std::setw(13) << e["status"].get<std::string>()
               << "expected " << (e["expected"].is_object() ? std::string("<matrix>") : e["expected"].dump()) << "  observed "
               << (e["observed"].is_object() ? std::string("<matrix>") : e["observed"].dump()) << "  (" << e["origin"].get<std::string>()
               << ")\n";
    }
    const json& s = report["summary"];
    os << "\nchecks: " << s["completed"].size() << " completed, " << s["skipped"].size() << " skipped, " << s["failed"].size()
       << " failed;  expectations: " << s["expectations"]["match"] << " match, " << s["expectations"]["mismatch"]
       << " mismatch, " << s["expectations"]["unevaluated"] << " unevaluated\n";
    return os.str();
}

}  // namespace cpkit
