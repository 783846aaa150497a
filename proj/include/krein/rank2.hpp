#pragma once

#include <array>
#include <optional>
#include <string>

#include "krein/catalog.hpp"
#include "krein/rank1.hpp"
#include "krein/types.hpp"

namespace krein {

/// No catalog template could be fitted to a deferred-case input within the
/// search budget; inconclusive, never a proof of non-membership.
struct DeferredUnresolved : KreinError {
    using KreinError::KreinError;
};
/// More than one catalog template fitted the same input even after
/// tolerance escalation (contradicts uniqueness of the canonical form).
struct AmbiguousFit : KreinError {
    using KreinError::KreinError;
};

/// The unrestricted off-diagonal block N2 of a 4-dimensional single-eigenvalue
/// space with dim S0 = 2, together with the congruence invariant N2' = N2 (N2^T)^{-1}.
struct CongruenceBlock {
    Mat n2;
    Mat n2_prime;              // det = 1 when defined
    bool prime_defined = false;  // requires N2 nonsingular
};
CongruenceBlock congruence_block(const Mat& n2, const TolerancePolicy& tol = {});

/// Adapted basis (S0 | S | S1) for a space whose spectrum is a single
/// conjugate pair: H becomes [[0,0,I2],[0,I,0],[I2,0,0]], N block upper
/// triangular with 2x2 rotation corner blocks N1 and N6.
struct ComplexPairDecomposition {
    SubspaceBasis s0, s, s1;  // columns in the ambient space
    Mat T;                    // [s0 | s | s1]
    Mat n_adapted;            // T^{-1} N T
    Mat h_adapted;            // T^T H T
    Mat n1, n2, n3, n4, n5, n6;  // blocks of n_adapted (n2, n4, n5 may be empty)
    bool second_kind = false;    // N6 is the transposed rotation (S0'' nontrivial)
    std::array<double, 4> normality_residuals{};  // equations (52)-(55)
};

/// One real eigenvalue, dim S0 = 2, n = 4: congruence normalization of the
/// coupling block N2 into one of the families of eqs. (22)-(25).
ClassificationResult classify_dimS0_2_n4(const OperatorPair& pair, double lambda,
                                         const TolerancePolicy& tol = {});

/// Eigenvalues lambda and alpha +- i beta on a 4-dimensional space: eq. (40).
ClassificationResult classify_real_plus_pair(const OperatorPair& pair, const TolerancePolicy& tol = {});

/// Two conjugate pairs on a 4-dimensional space: eq. (42).
ClassificationResult classify_two_pairs(const OperatorPair& pair, const TolerancePolicy& tol = {});

/// Adapted decomposition for a single conjugate pair (n > 2); throws
/// DecomposableInput when dim S0 != 2 or a neutrality check fails.
ComplexPairDecomposition prop2_decomposition(const OperatorPair& pair, const TolerancePolicy& tol = {});

/// Single conjugate pair, n in {4, 6, 8}: reduction to eqs. (44)/(45),
/// (47)/(48), or (50).
ClassificationResult classify_conjugate_pair(const OperatorPair& pair, const TolerancePolicy& tol = {});

/// Recognition result for a family whose constructive reduction lives in an
/// external reference: parameters and a similarity certificate only.
struct DeferredRecognition {
    std::string family;
    Params params;
    Mat T;  // pair_transform(input, T) = construct(family, params)
    double residual = 0.0;
};

/// Fits the deferred catalog templates consistent with the observables
/// (n, spectral class, dim S0); returns the unique fit with certificate
/// residual below 1e-6 or nothing when the search is exhausted.
/// Throws DecomposableInput when no deferred clause matches the observables
/// and AmbiguousFit when several templates survive tolerance escalation.
std::optional<DeferredRecognition> recognize_deferred(const OperatorPair& pair,
                                                      const TolerancePolicy& tol = {});

/// Classifies an indecomposable H-normal pair on a rank-2 space into one of
/// the 27 families of Theorem 2 (constructive where the reduction is proven
/// here, recognition-by-fitting for the deferred clauses).
/// Throws RankMismatch, NotHNormal, DecomposableInput, DimensionOutOfTheorem,
/// DeferredUnresolved, AmbiguousFit.
ClassificationResult classify_rank2(const OperatorPair& pair, const TolerancePolicy& tol = {});

}  // namespace krein
