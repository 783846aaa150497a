#include "krein/rank1.hpp"

#include <cmath>

#include "krein/core.hpp"
#include "krein/decomposition.hpp"
#include "step_accumulator.hpp"

namespace krein {

namespace {

using detail::StepAccumulator;

Mat stacked_joint(const Mat& N, const Mat& Nadj, double lambda) {
    const int n = static_cast<int>(N.rows());
    Mat S(2 * n, n);
    S.topRows(n) = N - lambda * Mat::Identity(n, n);
    S.bottomRows(n) = Nadj - lambda * Mat::Identity(n, n);
    return S;
}

ClassificationResult finish(const OperatorPair& input, StepAccumulator& acc, const std::string& family,
                            Params params, std::vector<std::string> warnings, const TolerancePolicy& tol) {
    ClassificationResult res;
    res.family = family;
    res.params = std::move(params);
    res.transform = acc.rec;
    res.warnings = std::move(warnings);
    OperatorPair canon = construct(family, res.params, tol);
    res.residual = detail::certificate_residual(input, acc.T, canon);
    return res;
}

// two real eigenvalues coupled through the form: family of eq. (1)
ClassificationResult reduce_two_real(const OperatorPair& pair, const SpectrumPartition& sp,
                                     const TolerancePolicy& tol) {
    if (pair.dim() != 2)
        throw DimensionOutOfTheorem("rank-1 space with two real eigenvalues must be 2-dimensional");
    double l1 = sp.real_eigs[0].lambda, l2 = sp.real_eigs[1].lambda;
    const Mat &N = pair.N(), &H = pair.H();
    Vec x1 = kernel(N - l1 * Mat::Identity(2, 2), tol).vectors.col(0);
    Vec x2 = kernel(N - l2 * Mat::Identity(2, 2), tol).vectors.col(0);
    double hs = 1 + H.norm();
    if (std::abs(indefinite_product(x1, x1, H)) > 1e3 * tol.residual_abs * hs ||
        std::abs(indefinite_product(x2, x2, H)) > 1e3 * tol.residual_abs * hs)
        throw DecomposableInput("an eigenvector spans a nondegenerate invariant line");
    double b = indefinite_product(x1, x2, H);
    if (std::abs(b) <= 1e3 * tol.residual_abs * hs)
        throw DecomposableInput("the two eigenlines are H-orthogonal");
    Mat T(2, 2);
    T.col(0) = x1;
    T.col(1) = x2 / b;
    StepAccumulator acc(pair);
    acc.apply("eigenbasis with unit cross product", "(1)", T);
    return finish(pair, acc, "R1.1", {{"lambda1", l1}, {"lambda2", l2}}, {}, tol);
}

// one conjugate pair: family of eq. (2)
ClassificationResult reduce_single_pair(const OperatorPair& pair, const SpectrumPartition& sp,
                                        const TolerancePolicy& tol) {
    if (pair.dim() != 2 || sp.complex_pairs[0].multiplicity != 1)
        throw DimensionOutOfTheorem("rank-1 space with a conjugate pair must be 2-dimensional");
    double alpha = sp.complex_pairs[0].alpha, beta = sp.complex_pairs[0].beta;
    CMat A = pair.N().cast<std::complex<double>>() -
             std::complex<double>(alpha, beta) * CMat::Identity(2, 2);
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
    CVec z = svd.matrixV().col(1);
    Mat T0(2, 2);
    T0.col(0) = z.real();
    T0.col(1) = z.imag();
    StepAccumulator acc(pair);
    acc.apply("real and imaginary parts of the eigenvector", "(2)", T0);

    // the restricted form is traceless symmetric [[a, b], [b, -a]]
    double a = acc.H(0, 0), b = acc.H(0, 1);
    double theta = 0.5 * std::atan2(a, b);
    Mat R = rot2(std::cos(theta), std::sin(theta)).transpose();
    acc.apply("rotation zeroing the diagonal of the form", "(2)", R);
    if (acc.H(0, 1) < 0) acc.apply("reflection fixing the sign of the form", "(2)", (Mat(2, 2) << -1, 0, 0, 1).finished());
    double g = acc.H(0, 1);
    if (g <= 0) throw DegenerateBlock("restricted form could not be normalized");
    acc.apply("uniform scaling", "(2)", std::pow(g, -0.5) * Mat::Identity(2, 2));
    if (acc.N(0, 1) < 0) acc.apply("conjugation normalizing beta > 0", "(2)", reversal_matrix(2));
    return finish(pair, acc, "R1.2", {{"alpha", acc.N(0, 0)}, {"beta", acc.N(0, 1)}}, {}, tol);
}

// one real eigenvalue on a 2-dimensional space: family of eq. (3)
ClassificationResult reduce_single_real_n2(const OperatorPair& pair, double lambda, const Mat& B0,
                                           const TolerancePolicy& tol) {
    const Mat &N = pair.N(), &H = pair.H();
    Vec v1 = B0.col(0);
    Vec w = H * v1 / (v1.transpose() * H * H * v1)(0);  // [v1, w] = 1
    w -= 0.5 * indefinite_product(w, w, H) * v1;        // [w, w] = 0
    Mat M = N - lambda * Mat::Identity(2, 2);
    double a = v1.dot(M * w);
    if (std::abs(a) <= 1e3 * tol.residual_abs * (1 + N.norm()))
        throw DecomposableInput("N = lambda I on the block: splits into definite lines");
    double s = std::sqrt(std::abs(a));
    Mat T(2, 2);
    T.col(0) = s * v1;
    T.col(1) = w / s;
    StepAccumulator acc(pair);
    acc.apply("adapted basis and scaling", "(3)", T);
    double z = a > 0 ? 1.0 : -1.0;
    return finish(pair, acc, "R1.3", {{"lambda", lambda}, {"z", z}}, {}, tol);
}

// one real eigenvalue on a 3-dimensional space: families (4) and (5)
ClassificationResult reduce_single_real_n3(const OperatorPair& pair, double lambda,
                                           const TolerancePolicy& tol) {
    auto tri = triangular_decomposition(pair, lambda, tol);
    if (tri.s0.dim() != 1 || tri.h1.rows() != 1 || tri.h1(0, 0) < 0)
        throw DecomposableInput("adapted basis shape is inconsistent with an indecomposable rank-1 block");
    StepAccumulator acc(pair);
    acc.apply("adapted basis", "(8)", tri.T);
    double b = acc.N(0, 1), d = acc.N(1, 2);
    double scale_n = 1 + acc.N.norm();
    if (std::abs(b) <= 1e-8 * scale_n || std::abs(d) <= 1e-8 * scale_n)
        throw DecomposableInput("the middle vector decouples from the neutral chain");
    acc.apply("diagonal scaling", "(4)", (Vec(3) << b, 1, 1.0 / b).finished().asDiagonal());
    double x = acc.N(1, 2);  // +-1 up to residual; the sign discriminates (4) from (5)
    if (x > 0) {
        double t = acc.N(0, 2) / 2;
        Mat Tsh = Mat::Identity(3, 3);
        Tsh(0, 1) = t;
        Tsh(0, 2) = -t * t / 2;
        Tsh(1, 2) = -t;
        acc.apply("unipotent shear removing the corner entry", "(4)", Tsh);
        return finish(pair, acc, "R1.4", {{"lambda", lambda}}, {}, tol);
    }
    return finish(pair, acc, "R1.5", {{"lambda", lambda}, {"r", acc.N(0, 2)}}, {}, tol);
}

// one real eigenvalue on a 4-dimensional space: family of eq. (6)
ClassificationResult reduce_single_real_n4(const OperatorPair& pair, double lambda,
                                           const TolerancePolicy& tol) {
    auto tri = triangular_decomposition(pair, lambda, tol);
    if (tri.s0.dim() != 1 || tri.h1.rows() != 2 || !tri.h1.isIdentity(1e-8))
        throw DecomposableInput("adapted basis shape is inconsistent with an indecomposable rank-1 block");
    StepAccumulator acc(pair);
    acc.apply("adapted basis", "(8)", tri.T);
    std::vector<std::string> warnings;
    double scale_n = 1 + acc.N.norm();

    double a = acc.N(0, 1), b = acc.N(0, 2);
    if (std::hypot(a, b) <= 1e-8 * scale_n)
        throw DecomposableInput("the neutral chain does not reach the middle space");
    double phi = std::atan2(b, a);
    Mat Trot = Mat::Identity(4, 4);
    Trot.block(1, 1, 2, 2) = rot2(std::cos(phi), std::sin(phi)).transpose();
    acc.apply("rotation of the middle plane", "(6)", Trot);

    double s = acc.N(0, 1);
    acc.apply("diagonal scaling", "(6)", (Vec(4) << s, 1, 1, 1.0 / s).finished().asDiagonal());

    double d = acc.N(1, 3), e = acc.N(2, 3);
    if (std::abs(d * d + e * e - 1) > 1e-6)
        warnings.push_back("normality identity a^2+b^2 = d^2+e^2 holds only to " +
                           std::to_string(std::abs(d * d + e * e - 1)));
    if (std::abs(e) < 1e-8)
        warnings.push_back("boundary: sin(alpha) = " + std::to_string(e) +
                           " is at the edge of the open domain 0 < alpha < pi");
    if (e < 0) {
        acc.apply("reflection normalizing sin(alpha) > 0", "(6)",
                  (Vec(4) << 1, 1, -1, 1).finished().asDiagonal());
        e = acc.N(2, 3);
    }
    double c = acc.N(0, 3);
    if (std::abs(c) > 0 && std::abs(e) > 0) {
        double u = c / e;
        Mat Tsh = Mat::Identity(4, 4);
        Tsh(0, 2) = u;
        Tsh(0, 3) = -u * u / 2;
        Tsh(2, 3) = -u;
        acc.apply("unipotent shear removing the corner entry", "(6)", Tsh);
    }
    double alpha = std::atan2(acc.N(2, 3), acc.N(1, 3));
    return finish(pair, acc, "R1.6", {{"lambda", lambda}, {"alpha", alpha}}, std::move(warnings), tol);
}

}  // namespace

SubspaceBasis s0_subspace(const OperatorPair& pair, double lambda, const TolerancePolicy& tol) {
    Mat Nadj = h_adjoint(pair.N(), pair.H(), tol);
    return kernel(stacked_joint(pair.N(), Nadj, lambda), tol);
}

TriangularDecomposition triangular_decomposition(const OperatorPair& pair, double lambda,
                                                 const TolerancePolicy& tol) {
    const int n = pair.dim();
    const Mat& H = pair.H();
    TriangularDecomposition out;
    out.s0 = s0_subspace(pair, lambda, tol);
    const int k = out.s0.dim();
    if (k == 0)
        throw DecomposableInput("S0 is empty: not H-normal at this eigenvalue or misclassified");
    Mat B0 = out.s0.vectors;
    double hs = 1 + H.norm();
    if ((B0.transpose() * H * B0).norm() > 1e3 * tol.residual_abs * hs)
        throw DecomposableInput("S0 is not neutral: the pair decomposes");

    // S1: dual basis, [s0_i, s1_j] = delta_ij, then made neutral
    Mat G = B0.transpose() * H * H * B0;
    Mat W = H * B0 * G.inverse();
    Mat K = W.transpose() * H * W;
    W -= B0 * (0.5 * (K + K.transpose()));

    // S = everything H-orthogonal to S0 + S1
    Mat C(2 * k, n);
    C.topRows(k) = B0.transpose() * H;
    C.bottomRows(k) = W.transpose() * H;
    Mat Bs = kernel(C, tol).vectors;
    const int m = static_cast<int>(Bs.cols());
    if (m != n - 2 * k) throw DecomposableInput("adapted basis dimensions are inconsistent");
    Mat H1 = Mat::Zero(0, 0);
    if (m > 0) {
        Mat Gs = Bs.transpose() * H * Bs;
        Gs = ((Gs + Gs.transpose()) / 2).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(Gs);
        double emax = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().cwiseAbs().minCoeff() <= 1e-8 * std::max(emax, 1.0))
            throw DecomposableInput("middle space degenerates");
        Mat Un = es.eigenvectors() * es.eigenvalues().cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
        Bs = Bs * Un;
        H1 = es.eigenvalues().cwiseSign().asDiagonal();
    }
    out.s = {Bs};
    out.s1 = {W};
    out.T = Mat(n, n);
    out.T.leftCols(k) = B0;
    if (m > 0) out.T.middleCols(k, m) = Bs;
    out.T.rightCols(k) = W;
    out.n_adapted = out.T.partialPivLu().solve(pair.N() * out.T);
    out.h_adapted = out.T.transpose() * H * out.T;
    out.n1 = out.n_adapted.block(k, k, m, m);
    out.h1 = H1;
    return out;
}

ClassificationResult classify_rank1(const OperatorPair& pair, const TolerancePolicy& tol) {
    if (pair.signature().rank() != 1)
        throw RankMismatch("classify_rank1 requires min(v-, v+) = 1, got " +
                           std::to_string(pair.signature().rank()));
    auto dec = block_decompose(pair, tol);  // throws NotHNormal when applicable
    if (dec.blocks.size() > 1)
        throw DecomposableInput("input splits into " + std::to_string(dec.blocks.size()) +
                                " orthogonal summands; classify them block by block");
    auto sp = real_spectrum(pair.N(), tol);
    const int n = pair.dim();
    if (sp.p() == 2 && sp.q() == 0) return reduce_two_real(pair, sp, tol);
    if (sp.p() == 0 && sp.q() == 1) return reduce_single_pair(pair, sp, tol);
    if (sp.p() == 1 && sp.q() == 0) {
        double lambda = sp.real_eigs[0].lambda;
        auto s0 = s0_subspace(pair, lambda, tol);
        if (s0.dim() != 1)
            throw DecomposableInput("dim S0 = " + std::to_string(s0.dim()) +
                                    ": a rank-1 indecomposable block requires dim S0 = 1");
        if (n == 2) return reduce_single_real_n2(pair, lambda, s0.vectors, tol);
        if (n == 3) return reduce_single_real_n3(pair, lambda, tol);
        if (n == 4) return reduce_single_real_n4(pair, lambda, tol);
        throw DimensionOutOfTheorem("rank-1 single-eigenvalue blocks exist only for 2 <= n <= 4, got n = " +
                                    std::to_string(n));
    }
    throw DecomposableInput("spectrum splits across more than one coupled cluster pair");
}

}  // namespace krein
