#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "krein/classify.hpp"
#include "krein/oracle.hpp"
#include "krein/types.hpp"

namespace krein {

/// On-disk representation of one matrix pair (schema krein-canon/pair/v1):
/// row-major nested arrays, numbers parsed as 64-bit floats.
struct PairDocument {
    Mat N;
    Mat H;
    std::optional<std::string> label;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> expected_family;
};

/// Throws KreinError with a parse message for malformed documents
/// (non-rectangular arrays, size mismatch, non-numbers).
PairDocument parse_pair_document(const nlohmann::json& j);
PairDocument read_pair_document(const std::string& path);
nlohmann::json to_json(const PairDocument& doc);

std::string block_class_name(BlockClass cls);
std::string block_status_name(BlockStatus status);

/// Report serialization (schema krein-canon/report/v1). Stable field
/// names; residuals always present; the transform only with emit_transform.
nlohmann::json report_to_json(const ClassifyReport& rep, bool emit_transform);
std::string report_to_text(const ClassifyReport& rep, bool emit_transform);

/// Catalog table export (all 33 families).
nlohmann::json atlas_json();
std::string atlas_text();

/// Verification report for cmd_verify.
nlohmann::json verify_to_json(const SimilarityResult& res, bool emit_transform);
std::string verify_to_text(const SimilarityResult& res);

}  // namespace krein
