#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "krein/decomposition.hpp"
#include "krein/types.hpp"

namespace krein {

/// Named parameter values of a canonical form (discrete parameters such
/// as z = +-1 are stored as doubles).
using Params = std::map<std::string, double>;

/// Static description of one canonical family.
struct FamilyInfo {
    std::string id;    // "R1.1" ... "R1.6", "R2.L1" ... "R2.L16"
    int rank;          // min(v-, v+) of the space: 1 or 2
    int n;             // dimension
    BlockClass cls;    // spectral class of the clause
    int dim_s0;        // dim S0 stated by the clause; 0 when not applicable
    int n1_decomposable;  // 1/0 when the clause fixes it; -1 when not applicable
    bool deferred;     // reduction lives in an external reference; recognition only
    bool unnormalized_params;  // a parameter range is left open (r of forms (47)/(48))
    std::string n_equation;    // equation label of N in the source text
    std::string h_equation;    // equation label of H
    std::vector<std::string> param_names;
    std::string domain;  // printed parameter domain, human readable
};

/// The full 33-family table (6 of Theorem 1, 27 of Theorem 2).
const std::vector<FamilyInfo>& catalog();

/// Lookup by id; throws std::out_of_range for unknown ids.
const FamilyInfo& family_info(const std::string& id);

/// Every violated constraint, named; empty means the parameters are valid.
std::vector<std::string> validate_params(const std::string& id, const Params& p);

/// The exact matrix pair printed in the source for this family.
/// Throws ParameterDomainViolation listing the violated constraints.
OperatorPair construct(const std::string& id, const Params& p, const TolerancePolicy& tol = {});

/// Candidate families consistent with (dimension, space rank, spectral
/// class). Empty means no theorem clause matches.
std::vector<std::string> families_for(int n, int rank, BlockClass cls);

/// Entrywise template match of an already-canonical pair; returns the
/// family and read-off parameters, or nothing.
std::optional<std::pair<std::string, Params>> recognize(const OperatorPair& pair,
                                                        const TolerancePolicy& tol = {});

}  // namespace krein
