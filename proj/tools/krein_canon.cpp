#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "krein/catalog.hpp"
#include "krein/classify.hpp"
#include "krein/io.hpp"
#include "krein/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitScope = 3;
constexpr int kExitInconclusive = 4;

struct TolOptions {
    double eig_cluster_rel = -1;
    double residual_abs = -1;
    double rank_rel = -1;

    krein::TolerancePolicy resolve() const {
        krein::TolerancePolicy tol;
        if (const char* env = std::getenv("KREIN_CANON_TOL")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || v <= 0)
                throw krein::KreinError("KREIN_CANON_TOL must be a positive number");
            tol.residual_abs = v;
        }
        if (eig_cluster_rel > 0) tol.eig_cluster_rel = eig_cluster_rel;
        if (residual_abs > 0) tol.residual_abs = residual_abs;
        if (rank_rel > 0) tol.rank_rel = rank_rel;
        tol.validate();
        return tol;
    }
};

void add_tol_flags(CLI::App* cmd, TolOptions& t) {
    cmd->add_option("--tol-eig", t.eig_cluster_rel, "relative eigenvalue clustering gap");
    cmd->add_option("--tol-residual", t.residual_abs, "absolute residual bound for matrix identities");
    cmd->add_option("--tol-rank", t.rank_rel, "relative singular-value cutoff for kernels");
}

krein::Params parse_param_list(const std::vector<std::string>& kvs) {
    krein::Params p;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw krein::KreinError("--param expects name=value, got '" + kv + "'");
        char* end = nullptr;
        std::string val = kv.substr(eq + 1);
        double v = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw krein::KreinError("--param " + kv + ": value is not a number");
        p[kv.substr(0, eq)] = v;
    }
    return p;
}

int run_classify(const std::vector<std::string>& inputs, const TolOptions& topt,
                 const std::string& format, bool emit_transform) {
    auto tol = topt.resolve();
    int exit_code = kExitOk;
    bool first = true;
    for (const auto& path : inputs) {
        if (!first && format == "text") std::cout << "\n";
        first = false;
        auto doc = krein::read_pair_document(path);
        krein::OperatorPair pair(doc.N, doc.H, tol);
        auto rep = krein::classify_pair(pair, tol);
        if (format == "json") {
            auto j = krein::report_to_json(rep, emit_transform);
            j["input"] = path;
            if (doc.expected_family) j["expected_family"] = *doc.expected_family;
            std::cout << j.dump(2) << "\n";
        } else {
            if (inputs.size() > 1) std::cout << path << ":\n";
            std::cout << krein::report_to_text(rep, emit_transform);
        }
        if (!rep.all_classified()) exit_code = kExitScope;
    }
    return exit_code;
}

int run_generate(const std::string& family, const std::vector<std::string>& kvs, std::uint64_t seed,
                 int count, double magnitude, const std::string& output) {
    auto params = parse_param_list(kvs);
    auto canon = krein::construct(family, params);
    auto scrambled = magnitude > 0
                         ? krein::scramble(canon, {seed, magnitude, count})
                         : std::vector<krein::OperatorPair>(static_cast<std::size_t>(count), canon);
    for (int i = 0; i < count; ++i) {
        krein::PairDocument doc;
        doc.N = scrambled[static_cast<std::size_t>(i)].N();
        doc.H = scrambled[static_cast<std::size_t>(i)].H();
        doc.label = family + " draw " + std::to_string(i);
        doc.seed = seed + static_cast<std::uint64_t>(i);
        doc.expected_family = family;
        std::string path = output;
        if (count > 1) {
            auto dot = path.rfind(".json");
            std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
            path = stem + "_" + std::to_string(i) + ".json";
        }
        std::ofstream out(path);
        if (!out) throw krein::KreinError("cannot write " + path);
        out << krein::to_json(doc).dump(2) << "\n";
        std::cout << path << "\n";
    }
    return kExitOk;
}

int run_verify(const std::string& path_a, const std::string& path_b, const TolOptions& topt,
               const std::string& format, bool emit_transform) {
    auto tol = topt.resolve();
    auto a = krein::read_pair_document(path_a);
    auto b = krein::read_pair_document(path_b);
    krein::OperatorPair pa(a.N, a.H, tol), pb(b.N, b.H, tol);
    auto res = krein::similarity_solve(pa, pb, tol);
    if (format == "json")
        std::cout << krein::verify_to_json(res, emit_transform).dump(2) << "\n";
    else
        std::cout << krein::verify_to_text(res);
    return res.status == krein::SimilarityStatus::SearchExhausted ? kExitInconclusive : kExitOk;
}

int run_atlas(const std::string& format, int rank_filter, int n_filter,
              const std::string& class_filter) {
    auto keep = [&](int rank, int n, const std::string& cls) {
        if (rank_filter > 0 && rank != rank_filter) return false;
        if (n_filter > 0 && n != n_filter) return false;
        if (!class_filter.empty() && cls != class_filter) return false;
        return true;
    };
    const bool filtered = rank_filter > 0 || n_filter > 0 || !class_filter.empty();
    if (format == "json") {
        auto j = krein::atlas_json();
        if (filtered) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : j["families"])
                if (keep(row["rank"].get<int>(), row["n"].get<int>(), row["class"].get<std::string>()))
                    rows.push_back(row);
            j["families"] = rows;
        }
        std::cout << j.dump(2) << "\n";
    } else if (filtered) {
        int shown = 0;
        for (const auto& f : krein::catalog()) {
            if (!keep(f.rank, f.n, krein::block_class_name(f.cls))) continue;
            std::cout << f.id << "  n=" << f.n << " rank=" << f.rank << "  "
                      << (f.rank == 1 ? "Theorem 1" : "Theorem 2") << ", form " << f.n_equation
                      << "\n";
            ++shown;
        }
        std::cout << shown << " families\n";
    } else {
        std::cout << krein::atlas_text();
    }
    return kExitOk;
}

int run_decompose(const std::string& input, const TolOptions& topt, const std::string& format) {
    auto tol = topt.resolve();
    auto doc = krein::read_pair_document(input);
    krein::OperatorPair pair(doc.N, doc.H, tol);
    auto dec = krein::block_decompose(pair, tol);
    auto check = krein::verify_decomposition(pair, dec, tol);
    if (format == "json") {
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& b : dec.blocks) {
            auto restricted = krein::to_json({b.restricted_n, b.restricted_h});
            blocks.push_back({{"class", krein::block_class_name(b.cls)},
                              {"dimension", b.basis.dim()},
                              {"N", restricted.at("N")},
                              {"H", restricted.at("H")}});
        }
        nlohmann::json j{{"schema", "krein-canon/decompose/v1"},
                         {"blocks", blocks},
                         {"verified", check.ok},
                         {"max_residual", check.max_residual},
                         {"failures", check.failures}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << dec.blocks.size() << " block(s), "
                  << (check.ok ? "verified" : "VERIFICATION FAILED") << " (max residual "
                  << check.max_residual << ")\n";
        for (std::size_t i = 0; i < dec.blocks.size(); ++i)
            std::cout << "block " << i << ": " << krein::block_class_name(dec.blocks[i].cls)
                      << ", n = " << dec.blocks[i].basis.dim() << "\n";
        for (const auto& f : check.failures) std::cout << "failure: " << f << "\n";
    }
    return check.ok ? kExitOk : kExitScope;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification of H-normal matrix pairs in indefinite scalar product spaces"};
    app.require_subcommand(1);

    TolOptions topt;
    std::string format = "text";

    // classify
    auto* classify = app.add_subcommand("classify", "decompose and classify a matrix pair");
    std::vector<std::string> classify_inputs;
    bool emit_transform = false;
    classify->add_option("input", classify_inputs, "pair document(s), JSON")->required();
    classify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    classify->add_flag("--emit-transform", emit_transform, "include the reducing transformation");
    add_tol_flags(classify, topt);

    // generate
    auto* generate = app.add_subcommand("generate", "write scrambled canonical-pair documents");
    std::string gen_family, gen_output = "pair.json";
    std::vector<std::string> gen_params;
    std::uint64_t gen_seed = 0;
    int gen_count = 1;
    double gen_magnitude = 1.0;
    generate->add_option("--family", gen_family, "catalog family id")->required();
    generate->add_option("--param", gen_params, "parameter as name=value (repeatable)")
        ->type_size(1)
        ->allow_extra_args(false);
    generate->add_option("--seed", gen_seed, "scramble seed");
    generate->add_option("--count", gen_count, "number of documents")->check(CLI::PositiveNumber);
    generate->add_option("--magnitude", gen_magnitude, "scramble generator norm bound (0 = canonical)");
    generate->add_option("output", gen_output, "output path (suffix _k added when count > 1)");

    // verify
    auto* verify = app.add_subcommand("verify", "decide unitary similarity of two pairs");
    std::string verify_a, verify_b;
    verify->add_option("a", verify_a, "first pair document")->required();
    verify->add_option("b", verify_b, "second pair document")->required();
    verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    verify->add_flag("--emit-transform", emit_transform, "include the similarity certificate");
    add_tol_flags(verify, topt);

    // atlas
    auto* atlas = app.add_subcommand("atlas", "export the canonical-family table");
    int atlas_rank = 0, atlas_n = 0;
    std::string atlas_class;
    atlas->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    atlas->add_option("--rank", atlas_rank, "filter by space rank");
    atlas->add_option("--n", atlas_n, "filter by dimension");
    atlas->add_option("--class", atlas_class, "filter by spectral class name");

    // decompose
    auto* decompose = app.add_subcommand("decompose", "orthogonal decomposition only");
    std::string dec_input;
    decompose->add_option("input", dec_input, "pair document")->required();
    decompose->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    add_tol_flags(decompose, topt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return run_classify(classify_inputs, topt, format, emit_transform);
        if (generate->parsed())
            return run_generate(gen_family, gen_params, gen_seed, gen_count, gen_magnitude, gen_output);
        if (verify->parsed()) return run_verify(verify_a, verify_b, topt, format, emit_transform);
        if (atlas->parsed()) return run_atlas(format, atlas_rank, atlas_n, atlas_class);
        if (decompose->parsed()) return run_decompose(dec_input, topt, format);
    } catch (const krein::ParameterDomainViolation& e) {
        std::cerr << "error: parameter domain violation\n";
        for (const auto& v : e.violations) std::cerr << "  " << v << "\n";
        return kExitValidation;
    } catch (const krein::NotHNormal& e) {
        std::cerr << "error: " << e.what() << " (commutator residual " << e.residual << ")\n";
        return kExitValidation;
    } catch (const std::out_of_range&) {
        std::cerr << "error: unknown family id\n";
        return kExitValidation;
    } catch (const krein::KreinError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
