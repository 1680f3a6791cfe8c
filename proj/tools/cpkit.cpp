#include "cpkit/analysis.hpp"
#include "cpkit/errors.hpp"
#include "cpkit/gallery.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace cpkit;

namespace {

std::pair<std::string, double> parse_assignment(const std::string& text, const std::string& flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(flag + ": expected name=value, got \"" + text + "\"");
    const std::string key = text.substr(0, eq);
    const std::string value = text.substr(eq + 1);
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return {key, v};
    } catch (const std::logic_error&) {
        throw ParseError(flag + ": value of " + key + " is not a number: \"" + value + "\"");
    }
}

// Inline JSON when the text starts with '{', otherwise a file path.
json json_argument(const std::string& text, const std::string& flag) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') return parse_json_text(text, flag);
    return load_json_file(text);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CPKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw ParseError(std::string("CPKIT_SEED: not an unsigned integer: \"") + env + "\"");
        }
    }
    return 1;
}

struct CommonOptions {
    std::vector<std::string> checks;
    std::vector<std::string> tols;
    std::vector<std::string> params;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    int samples = 0;
    std::string output;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--checks", o.checks, "checks to run: consistency,assignment,dynmap,positive,cp,cpte,cpze,domain,osr or all")
        ->delimiter(',');
    cmd->add_option("--tol", o.tols, "tolerance override name=value (repeatable)");
    cmd->add_option("--param", o.params, "gallery parameter name=value (repeatable)");
    cmd->add_option("--seed", o.seed, "random seed (default: $CPKIT_SEED, then 1)");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--samples", o.samples, "sampled unitaries for dynamical-map checks (default: case default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--output", o.output, "write the report to a file instead of stdout");
}

void fill_request(AnalysisRequest& r, const CommonOptions& o) {
    r.checks = o.checks;
    for (const auto& t : o.tols) {
        const auto [k, v] = parse_assignment(t, "--tol");
        if (!r.tol.set(k, v)) throw ParseError("--tol: unknown tolerance \"" + k + "\"");
        if (!(v > 0.0)) throw ParseError("--tol: " + k + " must be positive");
        r.tolOverrides[k] = v;
    }
    for (const auto& p : o.params) {
        const auto [k, v] = parse_assignment(p, "--param");
        r.params[k] = v;
    }
    r.seed = resolve_seed(o.seed);
    r.format = o.format;
    r.samples = o.samples;
}

int emit(const AnalysisReport& rep, const CommonOptions& o) {
    const std::string out = rep.render(o.format);
    if (o.output.empty()) std::cout << out << (out.empty() || out.back() == '\n' ? "" : "\n");
    else {
        std::ofstream f(o.output);
        if (!f) throw std::runtime_error("cannot write " + o.output);
        f << out << "\n";
    }
    return rep.ok() ? 0 : 1;
}

// "--alpha 0" and "--alpha=0" left over after CLI11 parsing become gallery parameters.
void extras_to_params(const std::vector<std::string>& extras, std::vector<std::string>& params) {
    for (size_t i = 0; i < extras.size(); ++i) {
        const std::string& a = extras[i];
        if (a.rfind("--", 0) != 0) throw ParseError("unexpected argument \"" + a + "\"");
        const std::string body = a.substr(2);
        if (body.find('=') != std::string::npos) params.push_back(body);
        else if (i + 1 < extras.size()) params.push_back(body + "=" + extras[++i]);
        else throw ParseError("missing value for " + a);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cpkit: consistent subspaces, assignment maps and complete positivity of subsystem dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonOptions analyzeOpts;
    std::string input, inputFlag, semigroup, unitary;
    auto* analyze = app.add_subcommand("analyze", "analyze a subspace from a file or gallery:<name>");
    analyze->add_option("source", input, "subspace JSON file, file:<path> or gallery:<name>");
    analyze->add_option("--input", inputFlag, "same as the positional input");
    analyze->add_option("--semigroup", semigroup, "full, local, inline semigroup JSON or a JSON file");
    analyze->add_option("--unitary", unitary, "inline matrix JSON or a JSON file; replaces sampled unitaries");
    add_common(analyze, analyzeOpts);

    auto* gallery = app.add_subcommand("gallery", "built-in example families");
    gallery->require_subcommand(1);
    std::string listFormat = "text";
    auto* list = gallery->add_subcommand("list", "list gallery cases");
    list->add_option("--format", listFormat)->check(CLI::IsMember({"json", "text"}));
    CommonOptions runOpts;
    std::string caseName;
    auto* run = gallery->add_subcommand("run", "run the full pipeline on a gallery case");
    run->add_option("name", caseName, "case name")->required();
    run->allow_extras();
    add_common(run, runOpts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*analyze) {
            if (!input.empty() && !inputFlag.empty() && input != inputFlag)
                throw ParseError("give the input either positionally or with --input, not both");
            AnalysisRequest r;
            r.source = input.empty() ? inputFlag : input;
            if (r.source.empty()) throw ParseError("analyze: no input given");
            fill_request(r, analyzeOpts);
            if (!semigroup.empty()) {
                if (semigroup == "full" || semigroup == "local") r.semigroup = json{{"kind", semigroup}};
                else r.semigroup = json_argument(semigroup, "--semigroup");
            }
            if (!unitary.empty()) r.unitary = matrix_from_json(json_argument(unitary, "--unitary"), "--unitary");
            return emit(run_analyze(r), analyzeOpts);
        }
        if (*list) {
            if (listFormat == "json") {
                json names = gallery_names();
                std::cout << names.dump(2) << "\n";
            } else {
                for (const auto& n : gallery_names()) std::cout << n << "  " << make_gallery_case(n).description << "\n";
            }
            return 0;
        }
        if (*run) {
            extras_to_params(run->remaining(), runOpts.params);
            AnalysisRequest r;
            r.source = "gallery:" + caseName;
            fill_request(r, runOpts);
            return emit(run_analyze(r), runOpts);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
