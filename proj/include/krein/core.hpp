#pragma once

#include "krein/types.hpp"

namespace krein {

/// H-adjoint A^[*] = H^{-1} A^T H, the unique operator with
/// [A^[*] x, y] = [x, A y].
Mat h_adjoint(const Mat& A, const Mat& H, const TolerancePolicy& tol = {});

struct CheckResult {
    bool ok = false;
    double residual = 0.0;
};

/// True iff N commutes with its H-adjoint, relative to the pair's scale.
CheckResult is_h_normal(const OperatorPair& pair, const TolerancePolicy& tol = {});

/// True iff T^T H T = H (equivalent to T T^[*] = I).
CheckResult is_h_unitary(const Mat& T, const Mat& H, const TolerancePolicy& tol = {});

/// Counts of negative/positive eigenvalues of a symmetric H.
Signature signature(const Mat& H, const TolerancePolicy& tol = {});

/// (T^{-1} N T, T^T H T); throws SingularTransform if T is not invertible.
OperatorPair pair_transform(const OperatorPair& pair, const Mat& T, const TolerancePolicy& tol = {});

/// [x, y] = (Hx, y).
double indefinite_product(const Vec& x, const Vec& y, const Mat& H);

bool is_neutral(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol = {});
bool is_nondegenerate(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol = {});

/// Basis of V^[perp] = {x : [x, v] = 0 for all v in V}.
SubspaceBasis h_orth_complement(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol = {});

/// Orthonormal basis of the numerical nullspace (singular values below
/// rank_rel relative to the largest).
SubspaceBasis kernel(const Mat& A, const TolerancePolicy& tol = {});

/// Distinct real eigenvalues and conjugate pairs of N after clustering.
SpectrumPartition real_spectrum(const Mat& N, const TolerancePolicy& tol = {});

// -- small helpers shared across modules --

/// r x r reversal matrix (ones on the secondary diagonal).
Mat reversal_matrix(int r);
/// [[a, b], [-b, a]].
Mat rot2(double a, double b);
/// Orthonormalized column span of A (rank decided at rank_rel).
Mat orth(const Mat& A, const TolerancePolicy& tol = {});
/// Numerical rank at rank_rel.
int numerical_rank(const Mat& A, const TolerancePolicy& tol = {});

}  // namespace krein
