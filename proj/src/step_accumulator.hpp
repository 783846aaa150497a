#pragma once

#include <string>

#include <Eigen/Dense>

#include "krein/rank1.hpp"
#include "krein/types.hpp"

namespace krein::detail {

/// Running product of elementary reduction steps together with the pair
/// expressed in the current basis.
struct StepAccumulator {
    Mat N, H, T;
    TransformRecord rec;

    explicit StepAccumulator(const OperatorPair& pair)
        : N(pair.N()), H(pair.H()), T(Mat::Identity(pair.dim(), pair.dim())) {
        rec.T = T;
    }

    void apply(const std::string& name, const std::string& anchor, const Mat& Tk) {
        Eigen::JacobiSVD<Mat> svd(Tk, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-12 * sv(0))
            throw SingularTransform("reduction step '" + name + "' is numerically singular");
        N = svd.solve(N * Tk);
        H = Tk.transpose() * H * Tk;
        H = ((H + H.transpose()) / 2).eval();
        T = T * Tk;
        rec.steps.push_back({name, anchor, Tk});
        rec.T = T;
    }
};

/// Certificate residual against the canonical pair: max of the similarity
/// and congruence defects, relative to the input scale.
inline double certificate_residual(const OperatorPair& input, const Mat& T, const OperatorPair& canon) {
    Mat Nt = T.partialPivLu().solve(input.N() * T);
    double rs = (Nt - canon.N()).norm() / (1 + input.N().norm());
    double rc = (T.transpose() * input.H() * T - canon.H()).norm() / (1 + input.H().norm());
    return std::max(rs, rc);
}

}  // namespace krein::detail
