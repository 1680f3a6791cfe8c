#pragma once

#include "cpkit/consistency.hpp"
#include "cpkit/cpclass.hpp"
#include "cpkit/linalg.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace cpkit {

using json = nlohmann::ordered_json;

// {"rows": n, "cols": m, "data": [[re, im], ...]} row-major. A bare number in
// data is read as a real entry.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& path = "$");

struct SubspaceInput {
    BipartiteDims dims;
    std::vector<CMatrix> generators;
};

// {"dS": .., "dB": .., "generators": [matrix, ...]}
json subspace_to_json(const SubspaceInput& s);
SubspaceInput subspace_from_json(const json& j, const std::string& path = "$");

// {"kind": "full"|"local"|"generators"|"hamiltonian", "generators": [..]?, "hamiltonian": matrix?}
json semigroup_to_json(const SemigroupSpec& g);
SemigroupSpec semigroup_from_json(const json& j, BipartiteDims dims, const std::string& path = "$");

json witness_to_json(const MapWitness& w);
// {"positive": .., "cp": .., "cpte": .., "cpze": .., "witness": {..}, "seed": .., "witnessDimTested": ..}
json verdict_to_json(const CPVerdict& v);

// Parses text, reporting line and column of syntax errors in the ParseError message.
json parse_json_text(const std::string& text, const std::string& source);
json load_json_file(const std::string& path);

}  // namespace cpkit
