#include "cpkit/json_io.hpp"

#include "cpkit/errors.hpp"

#include <fstream>
#include <sstream>

namespace cpkit {

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

int positive_int(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(path + ": expected a positive integer");
    return j.get<int>();
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const json& j, const std::string& path) {
    const int rows = positive_int(field(j, "rows", path), path + ".rows");
    const int cols = positive_int(field(j, "cols", path), path + ".cols");
    const json& data = field(j, "data", path);
    if (!data.is_array()) throw ParseError(path + ".data: expected an array");
    if (data.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
        throw ParseError(path + ".data: expected " + std::to_string(rows * cols) + " entries, found " +
                         std::to_string(data.size()));
    CMatrix m(rows, cols);
    for (size_t k = 0; k < data.size(); ++k) {
        const json& e = data[k];
        const std::string p = path + ".data[" + std::to_string(k) + "]";
        cplx z;
        if (e.is_number()) {
            z = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            z = cplx(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ParseError(p + ": expected [re, im]");
        }
        m(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols) = z;
    }
    return m;
}

json subspace_to_json(const SubspaceInput& s) {
    json gens = json::array();
    for (const auto& g : s.generators) gens.push_back(matrix_to_json(g));
    return json{{"dS", s.dims.dS}, {"dB", s.dims.dB}, {"generators", gens}};
}

SubspaceInput subspace_from_json(const json& j, const std::string& path) {
    SubspaceInput s;
    s.dims.dS = positive_int(field(j, "dS", path), path + ".dS");
    s.dims.dB = positive_int(field(j, "dB", path), path + ".dB");
    const json& gens = field(j, "generators", path);
    if (!gens.is_array() || gens.empty()) throw ParseError(path + ".generators: expected a non-empty array");
    const int n = s.dims.total();
    for (size_t k = 0; k < gens.size(); ++k) {
        const std::string p = path + ".generators[" + std::to_string(k) + "]";
        CMatrix g = matrix_from_json(gens[k], p);
        if (g.rows() != n || g.cols() != n)
            throw ParseError(p + ": expected " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        s.generators.push_back(std::move(g));
    }
    return s;
}

json semigroup_to_json(const SemigroupSpec& g) {
    json j{{"kind", to_string(g.kind)}};
    if (g.kind == SemigroupKind::Generators) {
        json gens = json::array();
        for (const auto& u : g.generators) gens.push_back(matrix_to_json(u));
        j["generators"] = gens;
    }
    if (g.kind == SemigroupKind::Hamiltonian) j["hamiltonian"] = matrix_to_json(g.hamiltonian);
    return j;
}

SemigroupSpec semigroup_from_json(const json& j, BipartiteDims dims, const std::string& path) {
    const json& kind = field(j, "kind", path);
    if (!kind.is_string()) throw ParseError(path + ".kind: expected a string");
    const auto k = kind.get<std::string>();
    if (k == "full") return SemigroupSpec::full(dims);
    if (k == "local") return SemigroupSpec::local(dims);
    if (k == "generators") {
        const json& gens = field(j, "generators", path);
        if (!gens.is_array() || gens.empty()) throw ParseError(path + ".generators: expected a non-empty array");
        std::vector<CMatrix> us;
        for (size_t i = 0; i < gens.size(); ++i) us.push_back(matrix_from_json(gens[i], path + ".generators[" + std::to_string(i) + "]"));
        return SemigroupSpec::from_generators(dims, std::move(us));
    }
    if (k == "hamiltonian") return SemigroupSpec::from_hamiltonian(dims, matrix_from_json(field(j, "hamiltonian", path), path + ".hamiltonian"));
    throw ParseError(path + ".kind: unknown semigroup kind \"" + k + "\"");
}

json witness_to_json(const MapWitness& w) {
    return json{{"kind", w.kind},
                {"dimW", w.dimW},
                {"eigenvalue", w.eigenvalue},
                {"input", matrix_to_json(w.input)},
                {"output", matrix_to_json(w.output)}};
}

json verdict_to_json(const CPVerdict& v) {
    json j{{"positive", to_string(v.positive)}, {"cp", to_string(v.cp)}, {"cpte", to_string(v.cpte)}, {"cpze", to_string(v.cpze)}};
    json w = json::object();
    if (v.positiveWitness) w["positive"] = witness_to_json(*v.positiveWitness);
    if (v.cpWitness) w["cp"] = witness_to_json(*v.cpWitness);
    if (v.cpzeWitness) w["cpze"] = witness_to_json(*v.cpzeWitness);
    if (v.cpCertificate) w["cpCertificate"] = matrix_to_json(*v.cpCertificate);
    if (v.cpteCertificate) w["cpteCertificate"] = matrix_to_json(*v.cpteCertificate);
    j["witness"] = w;
    j["seed"] = v.seed;
    j["witnessDimTested"] = v.witnessDimTested;
    j["choiMinEigenvalue"] = v.choiMinEigenvalue;
    j["notes"] = v.notes;
    return j;
}

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

}  // namespace cpkit
