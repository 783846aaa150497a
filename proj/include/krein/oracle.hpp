#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "krein/decomposition.hpp"
#include "krein/types.hpp"

namespace krein {

/// Recipe for reproducible scrambling of canonical pairs.
struct ScrambleSpec {
    std::uint64_t seed = 0;
    double magnitude = 1.0;  ///< bound on the generator norm ||K||
    int count = 1;
};

/// T = exp(K) with (HK)^T = -HK sampled deterministically from the seed,
/// ||K|| <= magnitude. T is H-unitary: T^T H T = H.
Mat random_h_unitary(const Mat& H, const ScrambleSpec& spec, const TolerancePolicy& tol = {});

/// `count` pairs (T_i^{-1} N T_i, T_i^T H T_i) for scrambles T_i drawn
/// from seeds spec.seed, spec.seed + 1, ...
std::vector<OperatorPair> scramble(const OperatorPair& pair, const ScrambleSpec& spec,
                                   const TolerancePolicy& tol = {});

/// Observables invariant under unitary similarity of pairs
/// (N, H) -> (T^{-1} N T, T^T H T).
struct InvariantFingerprint {
    int n = 0;
    Signature sig;
    SpectrumPartition spectrum;

    struct EigenData {
        bool real = true;
        double lambda = 0, alpha = 0, beta = 0;
        int multiplicity = 0;
        std::vector<int> kernel_dims;  ///< dim ker phi(N)^k, k = 1..multiplicity
        int dim_s0 = 0;         ///< joint-eigenvector dim; for a pair, real dim of S0'
        int dim_s0_second = 0;  ///< real dim of S0'' (conjugate pairs only)
    };
    std::vector<EigenData> eigs;

    int block_class = -1;  ///< BlockClass value when the spectrum shape matches one, else -1

    /// Named scalar invariants: normalized trace words over {N, N^[*]} plus
    /// family-specific slots where the defining identity holds (shear
    /// coefficient of the 3-dimensional rank-1 clause, congruence
    /// invariants of the off-diagonal block of the 4-dimensional
    /// dim-S0 = 2 clause). Presence of a slot is itself an invariant.
    std::map<std::string, double> scalars;
};

InvariantFingerprint fingerprint(const OperatorPair& pair, const TolerancePolicy& tol = {});

struct FingerprintComparison {
    bool equal = true;
    std::string mismatch_field;  ///< named field when not equal
};

FingerprintComparison compare_fingerprints(const InvariantFingerprint& a, const InvariantFingerprint& b,
                                           const TolerancePolicy& tol = {});

enum class SimilarityStatus {
    Similar,            ///< certificate T found
    InvariantMismatch,  ///< conclusive: a named invariant differs
    SearchExhausted,    ///< inconclusive: no certificate found within budget
};

struct SimilarityResult {
    SimilarityStatus status = SimilarityStatus::SearchExhausted;
    Mat T;                       ///< certificate, valid when Similar
    double residual = 0.0;       ///< max of similarity and congruence residuals
    std::string mismatch_field;  ///< set when InvariantMismatch
};

/// Seeks T with N_a T = T N_b and T^T H_a T = H_b: the Sylvester solution
/// space is parameterized exactly, then the quadratic congruence
/// constraint is solved by a damped least-squares search with multistart.
/// "Not similar" is only ever concluded from an invariant mismatch.
SimilarityResult similarity_solve(const OperatorPair& a, const OperatorPair& b,
                                  const TolerancePolicy& tol = {}, std::uint64_t seed = 0);

}  // namespace krein
