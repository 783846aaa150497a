#include "krein/decomposition.hpp"

#include <random>

#include "doctest.h"

using namespace krein;

namespace {

Mat random_invertible(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    while (true) {
        Mat T(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T(i, j) = g(rng);
        Eigen::JacobiSVD<Mat> svd(T);
        if (svd.singularValues()(n - 1) > 0.05 * svd.singularValues()(0)) return T;
    }
}

// change of basis: the pair seen in the columns of T
OperatorPair scrambled(const Mat& N, const Mat& H, const Mat& T) {
    Mat Ti = T.inverse();
    return OperatorPair(Ti * N * T, T.transpose() * H * T);
}

}  // namespace

TEST_CASE("annihilator_power kills exactly the targeted eigenspace") {
    TolerancePolicy tol;
    Mat N(3, 3);
    N << 1, 1, 0, 0, 1, 0, 0, 0, 4;
    SpectralIndex one{true, 1.0, 0, 0, 2};
    Mat P = annihilator_power(N, one, 2);
    CHECK(kernel(P, tol).dim() == 2);
    SpectralIndex four{true, 4.0, 0, 0, 1};
    CHECK(kernel(annihilator_power(N, four, 1), tol).dim() == 1);

    // conjugate-pair factor on a rotation block
    Mat R = Mat::Zero(4, 4);
    R.block(0, 0, 2, 2) = rot2(1.0, 2.0);
    R(2, 2) = 5.0;
    R(3, 3) = 6.0;
    SpectralIndex pr{false, 0, 1.0, 2.0, 2};
    CHECK(kernel(annihilator_power(R, pr, 1), tol).dim() == 2);
}

TEST_CASE("two real eigenvalues coupled through a reversal form give one block") {
    TolerancePolicy tol;
    Mat N(2, 2);
    N << 1, 0, 0, 2;
    Mat H = reversal_matrix(2);
    std::mt19937_64 rng(42);
    Mat T = random_invertible(2, rng);
    auto pair = scrambled(N, H, T);
    auto dec = block_decompose(pair, tol);
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].cls == BlockClass::TwoReal);
    CHECK(dec.blocks[0].basis.dim() == 2);
    auto chk = verify_decomposition(pair, dec, tol);
    CHECK(chk.ok);
    CHECK(chk.max_residual < 1e-8);
}

TEST_CASE("direct sum of independent summands is recovered after scrambling") {
    TolerancePolicy tol;
    // block 1: Jordan cell at 1 with reversal form (self-adjoint, single real)
    // block 2: plane rotation with the identity form (single conjugate pair)
    // block 3: scalar 5 with the trivial form
    int n = 5;
    Mat N = Mat::Zero(n, n), H = Mat::Zero(n, n);
    N(0, 0) = N(1, 1) = 1.0;
    N(0, 1) = 1.0;
    H.block(0, 0, 2, 2) = reversal_matrix(2);
    N.block(2, 2, 2, 2) = rot2(0.5, 1.5);
    H.block(2, 2, 2, 2) = Mat::Identity(2, 2);
    N(4, 4) = 5.0;
    H(4, 4) = 1.0;

    std::mt19937_64 rng(7);
    Mat T = random_invertible(n, rng);
    auto pair = scrambled(N, H, T);
    auto dec = block_decompose(pair, tol);
    REQUIRE(dec.blocks.size() == 3);
    int singles = 0, pairs = 0;
    for (auto& b : dec.blocks) {
        if (b.cls == BlockClass::SingleReal) ++singles;
        if (b.cls == BlockClass::SinglePair) ++pairs;
    }
    CHECK(singles == 2);
    CHECK(pairs == 1);
    auto chk = verify_decomposition(pair, dec, tol);
    CHECK(chk.ok);
    for (auto& msg : chk.failures) MESSAGE(msg);
    CHECK(chk.max_residual < 1e-7);
}

TEST_CASE("real eigenvalue coupled to a conjugate pair stays one block") {
    TolerancePolicy tol;
    // rot2(a,b) over lambda I with the antidiagonal coupling form
    Mat N = Mat::Zero(4, 4), H = Mat::Zero(4, 4);
    N.block(0, 0, 2, 2) = rot2(1.0, 2.0);
    N.block(2, 2, 2, 2) = 3.0 * Mat::Identity(2, 2);
    H.block(0, 2, 2, 2) = Mat::Identity(2, 2);
    H.block(2, 0, 2, 2) = Mat::Identity(2, 2);

    std::mt19937_64 rng(11);
    Mat T = random_invertible(4, rng);
    auto pair = scrambled(N, H, T);
    auto dec = block_decompose(pair, tol);
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].cls == BlockClass::RealPlusPair);
    CHECK(verify_decomposition(pair, dec, tol).ok);
}

TEST_CASE("two conjugate pairs coupled through the form stay one block") {
    TolerancePolicy tol;
    Mat N = Mat::Zero(4, 4), H = Mat::Zero(4, 4);
    N.block(0, 0, 2, 2) = rot2(1.0, 1.0);
    N.block(2, 2, 2, 2) = rot2(2.0, 3.0);
    H.block(0, 2, 2, 2) = Mat::Identity(2, 2);
    H.block(2, 0, 2, 2) = Mat::Identity(2, 2);
    // check it is H-normal before relying on it
    OperatorPair raw(N, H);
    REQUIRE(is_h_normal(raw).ok);

    std::mt19937_64 rng(13);
    Mat T = random_invertible(4, rng);
    auto pair = scrambled(N, H, T);
    auto dec = block_decompose(pair, tol);
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].cls == BlockClass::TwoPairs);
    CHECK(verify_decomposition(pair, dec, tol).ok);
}

TEST_CASE("block_decompose rejects a pair that is not H-normal") {
    Mat N(2, 2);
    N << 1, 1, 0, 2;
    CHECK_THROWS_AS(block_decompose(OperatorPair(N, Mat::Identity(2, 2))), NotHNormal);
}

TEST_CASE("q_subspace separates the diagonal and off-diagonal intersections") {
    TolerancePolicy tol;
    Mat N(2, 2);
    N << 1, 0, 0, 2;
    OperatorPair pair(N, reversal_matrix(2), tol);
    std::vector<SpectralIndex> idx = {{true, 1.0, 0, 0, 1}, {true, 2.0, 0, 0, 1}};
    CHECK(q_subspace(pair, idx, 0, 0, tol).dim() == 0);
    CHECK(q_subspace(pair, idx, 1, 1, tol).dim() == 0);
    CHECK(q_subspace(pair, idx, 0, 1, tol).dim() == 1);
    CHECK(q_subspace(pair, idx, 1, 0, tol).dim() == 1);
}
