#include "krein/io.hpp"

#include <fstream>
#include <sstream>

#include "krein/catalog.hpp"

namespace krein {

namespace {

using nlohmann::json;

json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) throw KreinError(name + ": expected a non-empty nested array");
    const auto rows = j.size();
    std::size_t cols = 0;
    for (const auto& row : j) {
        if (!row.is_array()) throw KreinError(name + ": expected a nested array of rows");
        if (cols == 0) cols = row.size();
        if (row.size() != cols || cols == 0) throw KreinError(name + ": rows have unequal lengths");
    }
    if (rows != cols) throw KreinError(name + ": matrix must be square");
    Mat M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& v = j[i][k];
            if (!v.is_number()) throw KreinError(name + ": entries must be numbers");
            M(static_cast<int>(i), static_cast<int>(k)) = v.get<double>();
        }
    return M;
}

std::string theorem_name(const FamilyInfo& info) {
    return info.rank == 1 ? "Theorem 1" : "Theorem 2";
}

std::string family_citation(const std::string& id) {
    const auto& info = family_info(id);
    return theorem_name(info) + ", form " + info.n_equation + " with H from " + info.h_equation;
}

json classification_json(const ClassificationResult& c, bool emit_transform) {
    const auto& info = family_info(c.family);
    json j{{"family", c.family},
           {"theorem", theorem_name(info)},
           {"equations", {{"N", info.n_equation}, {"H", info.h_equation}}},
           {"parameters", c.params},
           {"residual", c.residual},
           {"warnings", c.warnings}};
    if (emit_transform) {
        j["transform"] = matrix_to_json(c.transform.T);
        json steps = json::array();
        for (const auto& s : c.transform.steps)
            steps.push_back({{"name", s.name}, {"anchor", s.anchor}, {"T", matrix_to_json(s.T)}});
        j["steps"] = steps;
    } else {
        json steps = json::array();
        for (const auto& s : c.transform.steps) steps.push_back({{"name", s.name}, {"anchor", s.anchor}});
        j["steps"] = steps;
    }
    return j;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

PairDocument parse_pair_document(const json& j) {
    if (!j.is_object()) throw KreinError("document: expected a JSON object with fields N and H");
    if (!j.contains("N") || !j.contains("H")) throw KreinError("document: missing field N or H");
    PairDocument doc;
    doc.N = matrix_from_json(j.at("N"), "N");
    doc.H = matrix_from_json(j.at("H"), "H");
    if (doc.N.rows() != doc.H.rows()) throw KreinError("document: N and H dimensions differ");
    if (j.contains("label")) doc.label = j.at("label").get<std::string>();
    if (j.contains("seed")) doc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("expected_family")) doc.expected_family = j.at("expected_family").get<std::string>();
    return doc;
}

PairDocument read_pair_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KreinError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw KreinError(path + ": " + e.what());
    }
    return parse_pair_document(j);
}

json to_json(const PairDocument& doc) {
    json j{{"schema", "krein-canon/pair/v1"}, {"N", matrix_to_json(doc.N)}, {"H", matrix_to_json(doc.H)}};
    if (doc.label) j["label"] = *doc.label;
    if (doc.seed) j["seed"] = *doc.seed;
    if (doc.expected_family) j["expected_family"] = *doc.expected_family;
    return j;
}

std::string block_class_name(BlockClass cls) {
    switch (cls) {
        case BlockClass::SingleReal: return "single-real-eigenvalue";
        case BlockClass::TwoReal: return "two-real-eigenvalues";
        case BlockClass::SinglePair: return "single-conjugate-pair";
        case BlockClass::RealPlusPair: return "real-plus-conjugate-pair";
        case BlockClass::TwoPairs: return "two-conjugate-pairs";
    }
    return "unknown";
}

std::string block_status_name(BlockStatus status) {
    switch (status) {
        case BlockStatus::Classified: return "classified";
        case BlockStatus::Definite: return "definite";
        case BlockStatus::OutOfScope: return "out-of-scope";
        case BlockStatus::Unresolved: return "unresolved";
    }
    return "unknown";
}

json report_to_json(const ClassifyReport& rep, bool emit_transform) {
    json blocks = json::array();
    for (const auto& b : rep.blocks) {
        json jb{{"index", b.index},
                {"class", block_class_name(b.cls)},
                {"n", b.n},
                {"rank", b.rank},
                {"signature", {{"minus", b.sig.v_minus}, {"plus", b.sig.v_plus}}},
                {"status", block_status_name(b.status)}};
        if (b.classification) {
            jb["classification"] = classification_json(*b.classification, emit_transform);
            if (emit_transform && b.index < static_cast<int>(rep.decomposition.blocks.size())) {
                // embedding E = basis * T of the canonical block into the input
                // space: N E = E N_canon and E^T H E = H_canon
                const Mat& basis = rep.decomposition.blocks[static_cast<std::size_t>(b.index)].basis.vectors;
                jb["classification"]["embedding"] = matrix_to_json(basis * b.classification->transform.T);
            }
        }
        if (!b.definite_pieces.empty()) {
            json pieces = json::array();
            for (const auto& p : b.definite_pieces) {
                json jp{{"multiplicity", p.multiplicity}, {"sign", p.sign}};
                if (p.real)
                    jp["lambda"] = p.lambda;
                else {
                    jp["alpha"] = p.alpha;
                    jp["beta"] = p.beta;
                }
                pieces.push_back(std::move(jp));
            }
            jb["definite_pieces"] = pieces;
        }
        if (!b.message.empty()) jb["message"] = b.message;
        blocks.push_back(std::move(jb));
    }
    json dec_blocks = json::array();
    for (const auto& blk : rep.decomposition.blocks)
        dec_blocks.push_back({{"class", block_class_name(blk.cls)},
                              {"dimension", blk.basis.dim()},
                              {"basis", matrix_to_json(blk.basis.vectors)}});
    json indices = json::array();
    for (const auto& ix : rep.decomposition.indices) {
        json ji{{"multiplicity", ix.multiplicity}};
        if (ix.real)
            ji["lambda"] = ix.lambda;
        else {
            ji["alpha"] = ix.alpha;
            ji["beta"] = ix.beta;
        }
        indices.push_back(std::move(ji));
    }
    return json{{"schema", "krein-canon/report/v1"},
                {"status", rep.all_classified() ? "classified" : "partial"},
                {"n", rep.n},
                {"signature", {{"minus", rep.sig.v_minus}, {"plus", rep.sig.v_plus}}},
                {"h_negated", rep.h_negated},
                {"decomposition",
                 {{"verified", rep.check.ok},
                  {"max_residual", rep.check.max_residual},
                  {"indices", indices},
                  {"blocks", dec_blocks}}},
                {"blocks", blocks},
                {"warnings", rep.warnings}};
}

std::string report_to_text(const ClassifyReport& rep, bool emit_transform) {
    std::ostringstream os;
    os.precision(12);
    os << "pair: n = " << rep.n << ", signature (v-, v+) = (" << rep.sig.v_minus << ", "
       << rep.sig.v_plus << ")\n";
    if (rep.h_negated) os << "note: H was negated on input to enforce v- <= v+\n";
    os << "decomposition: " << rep.blocks.size() << " block(s), "
       << (rep.check.ok ? "verified" : "VERIFICATION FAILED") << " (max residual "
       << rep.check.max_residual << ")\n";
    for (const auto& b : rep.blocks) {
        os << "block " << b.index << ": " << block_class_name(b.cls) << ", n = " << b.n
           << ", rank " << b.rank << ", signature (" << b.sig.v_minus << ", " << b.sig.v_plus
           << ") -> " << block_status_name(b.status) << "\n";
        if (b.classification) {
            const auto& c = *b.classification;
            os << "  family " << c.family << " — " << family_citation(c.family) << "\n";
            os << "  parameters:";
            for (const auto& [k, v] : c.params) os << " " << k << " = " << format_double(v);
            os << "\n  certificate residual " << c.residual << "\n";
            os << "  reduction steps:\n";
            int i = 1;
            for (const auto& s : c.transform.steps) {
                os << "    " << i++ << ". " << s.name;
                if (!s.anchor.empty()) os << " [" << s.anchor << "]";
                os << "\n";
            }
            if (emit_transform) os << "  transform T:\n" << c.transform.T << "\n";
            for (const auto& w : c.warnings) os << "  warning: " << w << "\n";
        }
        for (const auto& p : b.definite_pieces) {
            os << "  " << (p.sign < 0 ? "negative" : "positive") << " definite piece: ";
            if (p.real)
                os << "eigenvalue " << format_double(p.lambda);
            else
                os << "pair " << format_double(p.alpha) << " +- " << format_double(p.beta) << "i";
            os << " (multiplicity " << p.multiplicity << ")\n";
        }
        if (!b.message.empty()) os << "  " << b.message << "\n";
    }
    for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
    return os.str();
}

json atlas_json() {
    json rows = json::array();
    for (const auto& f : catalog()) {
        rows.push_back({{"id", f.id},
                        {"rank", f.rank},
                        {"n", f.n},
                        {"class", block_class_name(f.cls)},
                        {"dim_s0", f.dim_s0},
                        {"n1_decomposable", f.n1_decomposable},
                        {"deferred", f.deferred},
                        {"unnormalized_params", f.unnormalized_params},
                        {"theorem", f.rank == 1 ? "Theorem 1" : "Theorem 2"},
                        {"equations", {{"N", f.n_equation}, {"H", f.h_equation}}},
                        {"parameters", f.param_names},
                        {"domain", f.domain}});
    }
    return json{{"schema", "krein-canon/atlas/v1"}, {"families", rows}};
}

std::string atlas_text() {
    std::ostringstream os;
    for (const auto& f : catalog()) {
        os << f.id << "  n=" << f.n << " rank=" << f.rank << "  "
           << (f.rank == 1 ? "Theorem 1" : "Theorem 2") << ", form " << f.n_equation
           << ", H " << f.h_equation << "  [" << block_class_name(f.cls) << "]";
        if (f.deferred) os << "  (deferred: recognition only)";
        os << "\n  parameters:";
        if (f.param_names.empty()) os << " none";
        for (const auto& p : f.param_names) os << " " << p;
        if (!f.domain.empty()) os << "   domain: " << f.domain;
        os << "\n";
    }
    os << catalog().size() << " families\n";
    return os.str();
}

json verify_to_json(const SimilarityResult& res, bool emit_transform) {
    std::string status;
    switch (res.status) {
        case SimilarityStatus::Similar: status = "similar"; break;
        case SimilarityStatus::InvariantMismatch: status = "not-similar"; break;
        case SimilarityStatus::SearchExhausted: status = "inconclusive"; break;
    }
    json j{{"schema", "krein-canon/verify/v1"}, {"status", status}, {"residual", res.residual}};
    if (!res.mismatch_field.empty()) j["mismatch_field"] = res.mismatch_field;
    if (res.status == SimilarityStatus::Similar && emit_transform) j["transform"] = matrix_to_json(res.T);
    return j;
}

std::string verify_to_text(const SimilarityResult& res) {
    std::ostringstream os;
    os.precision(12);
    switch (res.status) {
        case SimilarityStatus::Similar:
            os << "similar: certificate found, residual " << res.residual << "\n";
            break;
        case SimilarityStatus::InvariantMismatch:
            os << "not similar: invariant mismatch in " << res.mismatch_field << "\n";
            break;
        case SimilarityStatus::SearchExhausted:
            os << "inconclusive: search exhausted without a certificate (best residual "
               << res.residual << ")\n";
            break;
    }
    return os.str();
}

}  // namespace krein
