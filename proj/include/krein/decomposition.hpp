#pragma once

#include <string>
#include <vector>

#include "krein/core.hpp"
#include "krein/types.hpp"

namespace krein {

/// One eigenvalue cluster of N: either a real eigenvalue or a complex
/// conjugate pair alpha +- i beta. Real indices come first, in the order
/// of SpectrumPartition.
struct SpectralIndex {
    bool real = true;
    double lambda = 0.0;  // real case
    double alpha = 0.0;   // complex case
    double beta = 0.0;    // complex case, > 0
    int multiplicity = 0;
};

/// Spectral content of an H-orthogonal summand.
enum class BlockClass {
    SingleReal,    // one real eigenvalue
    TwoReal,       // two distinct real eigenvalues paired through H
    SinglePair,    // one conjugate pair
    RealPlusPair,  // a real eigenvalue paired with a conjugate pair
    TwoPairs,      // two distinct conjugate pairs paired through H
};

struct Block {
    BlockClass cls;
    std::vector<int> index_ids;  // indices into Decomposition::indices
    SubspaceBasis basis;         // H-orthonormal columns of the ambient space
    Mat restricted_n;            // N in the block basis
    Mat restricted_h;            // diag(+-1)
};

struct Decomposition {
    std::vector<SpectralIndex> indices;
    std::vector<Block> blocks;
};

/// Annihilating factor for one spectral index:
/// (N - lambda I)^m for a real eigenvalue,
/// (N^2 - 2 alpha N + (alpha^2 + beta^2) I)^m for a conjugate pair,
/// rescaled to unit norm after each multiplication (the kernel is scale
/// invariant and the rescaling avoids overflow/underflow).
Mat annihilator_power(const Mat& N, const SpectralIndex& idx, int power);

/// Q_jk = ker phi_j(N)  intersect  ker phi_k(N^[*]).
SubspaceBasis q_subspace(const OperatorPair& pair, const std::vector<SpectralIndex>& indices, int j, int k,
                         const TolerancePolicy& tol = {});

/// Splits an H-normal pair into pairwise H-orthogonal, N- and
/// N^[*]-invariant, nondegenerate summands, each holding the spectrum of
/// one or two indices. Throws NotHNormal if the pair is not H-normal and
/// DegenerateBlock if a candidate summand degenerates numerically.
Decomposition block_decompose(const OperatorPair& pair, const TolerancePolicy& tol = {});

struct DecompositionCheck {
    bool ok = true;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

/// Re-verifies every structural claim of the decomposition against the
/// original pair: dimensions sum to n, blocks are pairwise H-orthogonal,
/// each block is invariant under N and N^[*], each restricted pair is
/// H-normal with the advertised spectrum, and the restricted H is the
/// recorded sign matrix.
DecompositionCheck verify_decomposition(const OperatorPair& pair, const Decomposition& dec,
                                        const TolerancePolicy& tol = {});

}  // namespace krein
