#include "krein/oracle.hpp"

#include <cmath>

#include "doctest.h"
#include "krein/catalog.hpp"
#include "krein/core.hpp"

using namespace krein;

TEST_CASE("random_h_unitary: identity at magnitude zero, orthogonal for identity H") {
    Mat D2 = reversal_matrix(2);
    CHECK(random_h_unitary(D2, {7, 0.0, 1}).isIdentity(1e-15));

    Mat T = random_h_unitary(Mat::Identity(4, 4), {3, 1.0, 1});
    CHECK((T.transpose() * T - Mat::Identity(4, 4)).norm() < 1e-12);

    Mat U = random_h_unitary(D2, {123, 1.0, 1});
    CHECK((U.transpose() * D2 * U - D2).norm() < 1e-10);
    // deterministic in the seed
    CHECK((U - random_h_unitary(D2, {123, 1.0, 1})).norm() == 0.0);
    CHECK((U - random_h_unitary(D2, {124, 1.0, 1})).norm() > 1e-6);
}

TEST_CASE("random_h_unitary preserves every tested scalar product to 1e-10") {
    std::vector<Mat> forms;
    for (int r = 2; r <= 8; ++r) forms.push_back(reversal_matrix(r));
    forms.push_back(Mat::Identity(5, 5));
    Vec mixed(6);
    mixed << 1, -1, 1, 1, -1, -1;
    forms.push_back(mixed.asDiagonal());
    std::uint64_t seed = 0;
    for (const auto& H : forms)
        for (int k = 0; k < 20; ++k) {
            Mat T = random_h_unitary(H, {seed++, 1.0, 1});
            CHECK(is_h_unitary(T, H).ok);
            CHECK((T.transpose() * H * T - H).norm() <= 1e-10);
        }
}

TEST_CASE("scramble preserves H-normality and the fingerprint") {
    auto pair = construct("R2.L6a", {{"lambda", 0.5}, {"alpha", 1.1}});
    auto same = scramble(pair, {0, 0.0, 1});
    REQUIRE(same.size() == 1);
    CHECK((same[0].N() - pair.N()).norm() < 1e-14);

    auto fp0 = fingerprint(pair);
    auto copies = scramble(pair, {42, 1.0, 10});
    for (const auto& c : copies) {
        CHECK(is_h_normal(c).ok);
        auto cmp = compare_fingerprints(fp0, fingerprint(c));
        if (!cmp.equal) MESSAGE(cmp.mismatch_field);
        CHECK(cmp.equal);
    }
}

TEST_CASE("fingerprint is invariant under 100 scrambles across several families") {
    std::vector<std::pair<std::string, Params>> picks = {
        {"R1.3", {{"lambda", 1.0}, {"z", -1.0}}},
        {"R1.5", {{"lambda", 2.0}, {"r", 0.7}}},
        {"R2.L6b", {{"lambda", 0.0}, {"r", 2.5}}},
        {"R2.L13", {{"alpha1", 0.1}, {"beta1", 0.5}, {"alpha2", 0.9}, {"beta2", 1.5}, {"z", -1.0}}},
        {"R2.L15a", {{"alpha", 0.3}, {"beta", 1.2}, {"gamma", 2.0}, {"r", 0.3}}},
    };
    for (const auto& [id, p] : picks) {
        CAPTURE(id);
        auto pair = construct(id, p);
        auto fp0 = fingerprint(pair);
        for (const auto& c : scramble(pair, {2718, 1.0, 20})) {
            auto fpc = fingerprint(c);
            auto cmp = compare_fingerprints(fp0, fpc);
            if (!cmp.equal) MESSAGE(cmp.mismatch_field);
            CHECK(cmp.equal);
            // trace words agree well inside the comparison tolerance
            for (const auto& [k, v] : fp0.scalars)
                if (k[0] == 'w') CHECK(std::abs(fpc.scalars.at(k) - v) <= 1e-8 * (1 + std::abs(v)));
        }
    }
}

TEST_CASE("fingerprint separates the intra-clause variants") {
    auto mism = [](const OperatorPair& a, const OperatorPair& b) {
        auto cmp = compare_fingerprints(fingerprint(a), fingerprint(b));
        CHECK(!cmp.equal);
        return cmp.mismatch_field;
    };
    // 3-dimensional rank-1 variants: the shear slot exists only on one
    auto r14 = construct("R1.4", {{"lambda", 1.0}});
    auto r15 = construct("R1.5", {{"lambda", 1.0}, {"r", 0.7}});
    CHECK(mism(r14, r15).find("nil") != std::string::npos);
    // and the slot values pin r
    auto r15b = construct("R1.5", {{"lambda", 1.0}, {"r", 0.8}});
    CHECK(mism(r15, r15b).find("nil") != std::string::npos);
    CHECK(fingerprint(r15).scalars.at("shear_r") == doctest::Approx(0.7).epsilon(1e-10));

    // sign slot of the 2-dimensional single-eigenvalue clause
    auto zp = construct("R1.3", {{"lambda", 0.0}, {"z", 1.0}});
    auto zm = construct("R1.3", {{"lambda", 0.0}, {"z", -1.0}});
    CHECK(mism(zp, zm).find("sign_q") != std::string::npos);

    // the four dim-S0 = 2 variants in dimension 4 are pairwise distinct
    std::vector<OperatorPair> v4 = {
        construct("R2.L6a", {{"lambda", 0.0}, {"alpha", 1.0}}),
        construct("R2.L6b", {{"lambda", 0.0}, {"r", 2.0}}),
        construct("R2.L6c", {{"lambda", 0.0}, {"z", 1.0}}),
        construct("R2.L6d", {{"lambda", 0.0}}),
    };
    for (size_t i = 0; i < v4.size(); ++i)
        for (size_t j = i + 1; j < v4.size(); ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(!compare_fingerprints(fingerprint(v4[i]), fingerprint(v4[j])).equal);
        }
    // ... even at the trace-coincident point alpha = pi/2 vs the Jordan variant
    auto a90 = construct("R2.L6a", {{"lambda", 0.0}, {"alpha", 3.14159265358979323846 / 2}});
    CHECK(!compare_fingerprints(fingerprint(a90), fingerprint(v4[2])).equal);

    // conjugate-pair variants in dimension 4: S0'' dimension
    auto l14a = construct("R2.L14a", {{"alpha", 0.2}, {"beta", 1.0}, {"gamma", 1.0}});
    auto l14b = construct("R2.L14b", {{"alpha", 0.2}, {"beta", 1.0}});
    CHECK(mism(l14a, l14b).find("dim_s0") != std::string::npos);
    CHECK(fingerprint(l14a).eigs[0].dim_s0_second == 0);
    CHECK(fingerprint(l14b).eigs[0].dim_s0_second == 2);

    // conjugate-pair variants in dimension 6
    auto l15a = construct("R2.L15a", {{"alpha", 0.3}, {"beta", 1.2}, {"gamma", 2.0}, {"r", 0.3}});
    auto l15b = construct("R2.L15b", {{"alpha", 0.3}, {"beta", 1.2}, {"r", 0.3}});
    CHECK(!compare_fingerprints(fingerprint(l15a), fingerprint(l15b)).equal);

    // two-pair clause: rotation sense of the second block
    auto tzp = construct("R2.L13",
                         {{"alpha1", 0.1}, {"beta1", 0.5}, {"alpha2", 0.9}, {"beta2", 1.5}, {"z", 1.0}});
    auto tzm = construct("R2.L13",
                         {{"alpha1", 0.1}, {"beta1", 0.5}, {"alpha2", 0.9}, {"beta2", 1.5}, {"z", -1.0}});
    CHECK(!compare_fingerprints(fingerprint(tzp), fingerprint(tzm)).equal);
}

TEST_CASE("fingerprint of a scalar pair is trivial") {
    auto fp = fingerprint(OperatorPair(2 * Mat::Identity(3, 3), Mat::Identity(3, 3)));
    CHECK(fp.spectrum.p() == 1);
    CHECK(fp.eigs[0].dim_s0 == 3);
    CHECK(fp.eigs[0].kernel_dims == std::vector<int>{3, 3, 3});
}

TEST_CASE("similarity_solve certifies a scramble of itself") {
    auto pair = construct("R2.L2b", {{"lambda", 1.0}, {"r1", 0.4}, {"r2", 0.9}});
    auto copies = scramble(pair, {5, 1.0, 3});
    for (const auto& c : copies) {
        auto res = similarity_solve(pair, c);
        REQUIRE(res.status == SimilarityStatus::Similar);
        CHECK(res.residual <= 1e-7);
        // the certificate works in both directions
        auto back = similarity_solve(c, pair);
        CHECK(back.status == SimilarityStatus::Similar);
    }
    auto self = similarity_solve(pair, pair);
    CHECK(self.status == SimilarityStatus::Similar);
}

TEST_CASE("similarity_solve concludes not-similar only from a named invariant") {
    auto a = construct("R1.5", {{"lambda", 2.0}, {"r", 0.3}});
    auto b = construct("R1.5", {{"lambda", 2.0}, {"r", 0.4}});
    auto res = similarity_solve(a, b);
    CHECK(res.status == SimilarityStatus::InvariantMismatch);
    CHECK(!res.mismatch_field.empty());

    auto r14 = construct("R1.4", {{"lambda", 2.0}});
    auto res2 = similarity_solve(r14, a);
    CHECK(res2.status == SimilarityStatus::InvariantMismatch);

    // dimension mismatch is conclusive too
    auto small = construct("R1.3", {{"lambda", 2.0}, {"z", 1.0}});
    CHECK(similarity_solve(small, a).status == SimilarityStatus::InvariantMismatch);
}
