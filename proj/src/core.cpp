#include "krein/core.hpp"

#include <algorithm>
#include <cmath>

#include "krein/schur.hpp"

namespace krein {

namespace {

void require_square_same(const Mat& A, const Mat& H) {
    if (A.rows() != A.cols() || H.rows() != H.cols() || A.rows() != H.rows())
        throw std::invalid_argument("expected square matrices of equal size");
}

std::vector<double> symmetric_eigenvalues(const Mat& H) {
    // H symmetric: the Schur iteration terminates with real eigenvalues,
    // but guard against rounding by taking real parts.
    auto eigs = schur_eigenvalues(0.5 * (H + H.transpose()));
    std::vector<double> out;
    out.reserve(eigs.size());
    for (auto& e : eigs) out.push_back(e.real());
    return out;
}

}  // namespace

OperatorPair::OperatorPair(Mat N, Mat H, const TolerancePolicy& tol) : N_(std::move(N)), H_(std::move(H)) {
    tol.validate();
    require_square_same(N_, H_);
    if (!N_.allFinite() || !H_.allFinite()) throw std::invalid_argument("matrix entries must be finite");
    const double hscale = std::max(H_.norm(), 1e-300);
    if ((H_ - H_.transpose()).norm() > tol.residual_abs * (1.0 + hscale))
        throw NondegenerateViolation("H is not symmetric");
    H_ = 0.5 * (H_ + H_.transpose());
    sig_ = krein::signature(H_, tol);
    if (sig_.v_minus > sig_.v_plus) {
        H_ = -H_;
        std::swap(sig_.v_minus, sig_.v_plus);
        h_negated_ = true;
    }
}

Mat h_adjoint(const Mat& A, const Mat& H, const TolerancePolicy& tol) {
    require_square_same(A, H);
    Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= tol.rank_rel * smax) throw NondegenerateViolation("H is singular within tolerance");
    return svd.solve(A.transpose() * H);
}

CheckResult is_h_normal(const OperatorPair& pair, const TolerancePolicy& tol) {
    const Mat& N = pair.N();
    Mat Nadj = h_adjoint(N, pair.H(), tol);
    double res = (N * Nadj - Nadj * N).norm();
    double scale = 1.0 + N.norm() * N.norm();
    return {res <= tol.residual_abs * scale, res};
}

CheckResult is_h_unitary(const Mat& T, const Mat& H, const TolerancePolicy& tol) {
    require_square_same(T, H);
    double res = (T.transpose() * H * T - H).norm();
    double scale = 1.0 + H.norm() * std::max(1.0, T.norm() * T.norm());
    return {res <= tol.residual_abs * scale, res};
}

Signature signature(const Mat& H, const TolerancePolicy& tol) {
    auto eigs = symmetric_eigenvalues(H);
    double scale = 0.0;
    for (double e : eigs) scale = std::max(scale, std::abs(e));
    Signature sig;
    for (double e : eigs) {
        if (std::abs(e) <= tol.rank_rel * std::max(scale, 1e-300))
            throw NondegenerateViolation("H has an eigenvalue at zero within tolerance");
        (e < 0 ? sig.v_minus : sig.v_plus)++;
    }
    return sig;
}

OperatorPair pair_transform(const OperatorPair& pair, const Mat& T, const TolerancePolicy& tol) {
    if (T.rows() != pair.dim() || T.cols() != pair.dim())
        throw std::invalid_argument("transform size mismatch");
    Eigen::JacobiSVD<Mat> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= tol.rank_rel * smax) throw SingularTransform("T is singular within tolerance");
    Mat Nt = svd.solve(pair.N() * T);
    Mat Ht = T.transpose() * pair.H() * T;
    return OperatorPair(std::move(Nt), 0.5 * (Ht + Ht.transpose()), tol);
}

double indefinite_product(const Vec& x, const Vec& y, const Mat& H) { return y.dot(H * x); }

bool is_neutral(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol) {
    if (V.dim() == 0) return true;
    Mat G = V.vectors.transpose() * H * V.vectors;
    double scale = H.norm() * V.vectors.norm() * V.vectors.norm();
    return G.norm() <= tol.residual_abs * (1.0 + scale);
}

bool is_nondegenerate(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol) {
    if (V.dim() == 0) return true;
    Mat G = V.vectors.transpose() * H * V.vectors;
    Eigen::JacobiSVD<Mat> svd(G);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    // scale the cutoff against the basis itself so ill-conditioned bases
    // do not masquerade as degenerate subspaces
    double ref = std::max(smax, V.vectors.squaredNorm() * H.norm() * tol.rank_rel);
    return smin > tol.rank_rel * std::max(ref, 1e-300);
}

SubspaceBasis h_orth_complement(const SubspaceBasis& V, const Mat& H, const TolerancePolicy& tol) {
    if (V.dim() == 0) {
        return {Mat::Identity(H.rows(), H.cols())};
    }
    return kernel(V.vectors.transpose() * H, tol);
}

SubspaceBasis kernel(const Mat& A, const TolerancePolicy& tol) {
    const int n = static_cast<int>(A.cols());
    if (A.rows() == 0) return {Mat::Identity(n, n)};
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_rel * std::max(smax, 1e-300)) ++rank;
    return {svd.matrixV().rightCols(n - rank)};
}

SpectrumPartition real_spectrum(const Mat& N, const TolerancePolicy& tol) {
    auto eigs = schur_eigenvalues(N);
    SpectrumPartition part;
    double scale = 0.0;
    for (auto& e : eigs) scale = std::max(scale, std::abs(e));
    scale = std::max(scale, 1.0);
    part.cluster_scale = scale;
    // Eigenvalues of a defective cluster scatter like eps^(1/m) around the
    // true value (a 5-chain reaches ~1e-3), so the merge gap is floored
    // well above that scatter; the cluster mean cancels it to O(eps).
    const double defect_floor = 5e-3;
    const double gap = std::max(tol.eig_cluster_rel, defect_floor) * scale;

    std::vector<double> reals;
    std::vector<std::pair<double, double>> pairs;
    for (auto& e : eigs) {
        if (std::abs(e.imag()) <= gap)
            reals.push_back(e.real());
        else if (e.imag() > 0)
            pairs.emplace_back(e.real(), e.imag());
    }
    std::sort(reals.begin(), reals.end());
    for (double r : reals) {
        if (!part.real_eigs.empty() && std::abs(r - part.real_eigs.back().lambda) <= gap) {
            auto& c = part.real_eigs.back();
            c.lambda = (c.lambda * c.multiplicity + r) / (c.multiplicity + 1);
            c.multiplicity++;
        } else {
            part.real_eigs.push_back({r, 1});
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto& [a, b] : pairs) {
        if (!part.complex_pairs.empty()) {
            auto& c = part.complex_pairs.back();
            if (std::hypot(a - c.alpha, b - c.beta) <= gap) {
                c.alpha = (c.alpha * c.multiplicity + a) / (c.multiplicity + 1);
                c.beta = (c.beta * c.multiplicity + b) / (c.multiplicity + 1);
                c.multiplicity++;
                continue;
            }
        }
        part.complex_pairs.push_back({a, b, 1});
    }
    return part;
}

Mat reversal_matrix(int r) {
    Mat D = Mat::Zero(r, r);
    for (int i = 0; i < r; ++i) D(i, r - 1 - i) = 1.0;
    return D;
}

Mat rot2(double a, double b) {
    Mat R(2, 2);
    R << a, b, -b, a;
    return R;
}

Mat orth(const Mat& A, const TolerancePolicy& tol) {
    if (A.cols() == 0) return A;
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_rel * std::max(smax, 1e-300)) ++rank;
    return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Mat& A, const TolerancePolicy& tol) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_rel * std::max(smax, 1e-300)) ++rank;
    return rank;
}

}  // namespace krein
