#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krein/decomposition.hpp"
#include "krein/rank1.hpp"
#include "krein/types.hpp"

namespace krein {

/// Outcome of classifying one H-orthogonal summand.
enum class BlockStatus {
    Classified,   ///< matched a catalog family with a certificate
    Definite,     ///< the restricted product is definite: plain normal operator,
                  ///< orthogonally diagonalizable, no indefinite invariants
    OutOfScope,   ///< rank >= 3, dimension outside the theorems, or decomposable
                  ///< within a single spectral class (finer reduction not covered)
    Unresolved,   ///< deferred-case recognition exhausted its search budget
};

/// One eigenvalue piece of a definite block (always semisimple).
struct DefinitePiece {
    bool real = true;
    double lambda = 0.0;  // real case
    double alpha = 0.0, beta = 0.0;  // conjugate pair
    int multiplicity = 0;
    int sign = 1;  // sign of the definite restricted product
};

struct BlockReport {
    int index = 0;        ///< position in the decomposition
    BlockClass cls;       ///< spectral class
    int n = 0;            ///< block dimension
    int rank = 0;         ///< min(v-, v+) of the restricted product
    Signature sig;        ///< signature of the restricted product
    BlockStatus status = BlockStatus::OutOfScope;
    std::optional<ClassificationResult> classification;  ///< when Classified
    std::vector<DefinitePiece> definite_pieces;          ///< when Definite
    std::string message;  ///< scope / unresolved explanation
};

struct ClassifyReport {
    int n = 0;
    Signature sig;
    bool h_negated = false;  ///< H was negated on input to enforce v- <= v+
    Decomposition decomposition;
    DecompositionCheck check;  ///< structural re-verification of the split
    std::vector<BlockReport> blocks;
    std::vector<std::string> warnings;

    bool all_classified() const;
};

/// Full pipeline: H-orthogonal decomposition, then per-block routing by
/// space rank (definite blocks are reported as plain normal operators,
/// rank-1 and rank-2 blocks go to the theorem reducers, rank >= 3 is
/// reported out of scope). Never force-classifies: scope and budget
/// failures land in the per-block status instead of an exception.
/// Throws NotHNormal and NondegenerateViolation for invalid inputs.
ClassifyReport classify_pair(const OperatorPair& pair, const TolerancePolicy& tol = {});

}  // namespace krein
