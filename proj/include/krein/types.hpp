#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace krein {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Numerical policy shared by every operation that has to decide
/// "is this zero" or "are these eigenvalues the same".
struct TolerancePolicy {
    double eig_cluster_rel = 1e-6;  ///< relative gap for merging eigenvalues
    double residual_abs = 1e-9;     ///< absolute residual bound for matrix identities
    double rank_rel = 1e-10;        ///< relative singular-value cutoff for kernels

    void validate() const {
        if (eig_cluster_rel <= 0 || eig_cluster_rel >= 1 || residual_abs <= 0 || rank_rel <= 0)
            throw std::invalid_argument("TolerancePolicy: tolerances must be positive, eig_cluster_rel < 1");
    }
};

struct KreinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NondegenerateViolation : KreinError {
    using KreinError::KreinError;
};
struct SingularTransform : KreinError {
    using KreinError::KreinError;
};
struct NotHNormal : KreinError {
    double residual = 0.0;
    NotHNormal(const std::string& msg, double res) : KreinError(msg), residual(res) {}
};
struct ParameterDomainViolation : KreinError {
    std::vector<std::string> violations;
    explicit ParameterDomainViolation(std::vector<std::string> v)
        : KreinError(v.empty() ? "parameter domain violation" : v.front()), violations(std::move(v)) {}
};
struct RankMismatch : KreinError {
    using KreinError::KreinError;
};
/// The input splits into smaller nondegenerate invariant pieces; the
/// message carries a hint about the split that was detected.
struct DecomposableInput : KreinError {
    using KreinError::KreinError;
};
struct DimensionOutOfTheorem : KreinError {
    using KreinError::KreinError;
};
struct DegenerateBlock : KreinError {
    using KreinError::KreinError;
};

struct Signature {
    int v_minus = 0;
    int v_plus = 0;
    int rank() const { return std::min(v_minus, v_plus); }
};

/// The object being classified: N together with the symmetric
/// nondegenerate H defining the scalar product [x,y] = (Hx,y).
/// Construction validates H and enforces the convention v- <= v+
/// (negating H when needed; the flip is recorded).
class OperatorPair {
public:
    OperatorPair(Mat N, Mat H, const TolerancePolicy& tol = {});

    int dim() const { return static_cast<int>(N_.rows()); }
    const Mat& N() const { return N_; }
    const Mat& H() const { return H_; }
    const Signature& signature() const { return sig_; }
    bool h_negated() const { return h_negated_; }

private:
    Mat N_;
    Mat H_;
    Signature sig_;
    bool h_negated_ = false;
};

/// Basis of a subspace of R^n, columns linearly independent.
struct SubspaceBasis {
    Mat vectors;  // n x d, d may be 0
    int ambient_dim() const { return static_cast<int>(vectors.rows()); }
    int dim() const { return static_cast<int>(vectors.cols()); }
};

/// Distinct real eigenvalues and complex-conjugate pairs, after clustering.
struct SpectrumPartition {
    struct RealEig {
        double lambda;
        int multiplicity;
    };
    struct ComplexPair {
        double alpha;
        double beta;  // > 0
        int multiplicity;
    };
    std::vector<RealEig> real_eigs;
    std::vector<ComplexPair> complex_pairs;
    int p() const { return static_cast<int>(real_eigs.size()); }
    int q() const { return static_cast<int>(complex_pairs.size()); }
    double cluster_scale = 1.0;  // scale the clustering gap was relative to
};

}  // namespace krein
