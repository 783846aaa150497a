#pragma once

#include <string>
#include <vector>

#include "krein/catalog.hpp"
#include "krein/types.hpp"

namespace krein {

/// Invertible change of basis assembled from named elementary steps;
/// T equals the ordered product of the steps.
struct TransformRecord {
    struct Step {
        std::string name;    // what the step does, e.g. "diagonal scaling"
        std::string anchor;  // source equation/section label, may be empty
        Mat T;
    };
    Mat T;
    std::vector<Step> steps;
};

struct ClassificationResult {
    std::string family;  // catalog id
    Params params;
    TransformRecord transform;     // pair_transform(input, T) = construct(family, params)
    double residual = 0.0;         // max of similarity and congruence residuals
    std::vector<std::string> warnings;
};

/// Adapted basis (S0 | S | S1) of eq. (8): H becomes
/// [[0,0,I],[0,H1,0],[I,0,0]] and N block upper triangular.
struct TriangularDecomposition {
    SubspaceBasis s0, s, s1;  // columns in the ambient space
    Mat T;                    // [s0 | s | s1]
    Mat n_adapted;            // T^{-1} N T
    Mat h_adapted;            // T^T H T
    Mat n1;                   // middle block of n_adapted (may be 0x0)
    Mat h1;                   // middle block of h_adapted, diag(+-1)
};

/// S0 = {x : (N - lambda I) x = (N^[*] - lambda I) x = 0}.
SubspaceBasis s0_subspace(const OperatorPair& pair, double lambda, const TolerancePolicy& tol = {});

/// Builds the adapted basis; throws DecomposableInput when S0 is not
/// neutral or the middle space degenerates.
TriangularDecomposition triangular_decomposition(const OperatorPair& pair, double lambda,
                                                 const TolerancePolicy& tol = {});

/// Classifies an indecomposable H-normal pair on a rank-1 space into one
/// of the six families of Theorem 1, emitting the reducing transformation.
/// Throws RankMismatch, NotHNormal, DecomposableInput, DimensionOutOfTheorem.
ClassificationResult classify_rank1(const OperatorPair& pair, const TolerancePolicy& tol = {});

}  // namespace krein
