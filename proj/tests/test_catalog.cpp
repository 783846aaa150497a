#include "krein/catalog.hpp"

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "krein/core.hpp"

using namespace krein;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Draw parameters strictly inside the printed domain of a family, away
// from boundaries so the draw is unambiguous.
Params sample_params(const std::string& id, std::mt19937_64& rng) {
    auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto pm1 = [&]() { return (rng() & 1u) ? 1.0 : -1.0; };
    Params p;
    double lambda = u(-2, 2);
    if (id == "R1.1") {
        p["lambda1"] = lambda;
        p["lambda2"] = lambda + u(0.5, 2);
    } else if (id == "R1.2") {
        p["alpha"] = lambda;
        p["beta"] = u(0.1, 2);
    } else if (id == "R1.3") {
        p["lambda"] = lambda;
        p["z"] = pm1();
    } else if (id == "R1.4" || id == "R2.L2a" || id == "R2.L6d") {
        p["lambda"] = lambda;
    } else if (id == "R1.5") {
        p["lambda"] = lambda;
        p["r"] = u(-2, 2);
    } else if (id == "R1.6" || id == "R2.L6a") {
        p["lambda"] = lambda;
        p["alpha"] = u(0.1, kPi - 0.1);
    } else if (id == "R2.L1" || id == "R2.L3a" || id == "R2.L6c" || id == "R2.L7a") {
        p["lambda"] = lambda;
        p["z"] = pm1();
    } else if (id == "R2.L2b") {
        p["lambda"] = lambda;
        p["r1"] = u(-2, 2);
        p["r2"] = u(-2, 2);
    } else if (id == "R2.L3b") {
        p["lambda"] = lambda;
        p["z"] = pm1();
        p["r"] = pm1() * u(1.1, 3);
    } else if (id == "R2.L4" || id == "R2.L7b") {
        p["lambda"] = lambda;
        p["z"] = pm1();
        p["r"] = u(0.1, 2);
    } else if (id == "R2.L5a" || id == "R2.L8a") {
        p["lambda"] = lambda;
        p["r"] = u(0.1, 2);
    } else if (id == "R2.L5b") {
        p["lambda"] = lambda;
        p["r1"] = u(-2, 2);
        p["r2"] = u(0.1, 2);
    } else if (id == "R2.L6b") {
        p["lambda"] = lambda;
        p["r"] = pm1() * u(1.1, 3);
    } else if (id == "R2.L8b") {
        p["lambda"] = lambda;
        p["r"] = u(-2, 2);
        p["alpha"] = u(0.1, kPi - 0.1);
    } else if (id == "R2.L9") {
        p["lambda"] = lambda;
        p["alpha"] = u(0.1, kPi - 0.1);
        p["beta"] = u(0.1, kPi - 0.1);
    } else if (id == "R2.L10a") {
        p["lambda"] = lambda;
        p["alpha"] = u(0.1, kPi - 0.1);
        p["beta"] = u(0.1, kPi / 2 - 0.05);
    } else if (id == "R2.L10b") {
        p["lambda"] = lambda;
        p["alpha"] = u(0.1, kPi - 0.1);
        double beta = u(0.3, kPi / 2 - 0.05);
        p["beta"] = beta;
        p["gamma"] = u(0.0, beta - 0.1);
    } else if (id == "R2.L11") {
        p["lambda1"] = lambda;
        p["lambda2"] = lambda + u(0.5, 2);
        p["r"] = u(-2, 2);
    } else if (id == "R2.L12") {
        p["lambda"] = lambda;
        p["alpha"] = u(-2, 2);
        p["beta"] = u(0.1, 2);
    } else if (id == "R2.L13") {
        p["alpha1"] = lambda;
        p["alpha2"] = lambda + u(0.5, 1);
        p["beta1"] = u(0.1, 1);
        p["beta2"] = p["beta1"] + u(0.1, 1);
        p["z"] = pm1();
    } else if (id == "R2.L14a") {
        p["alpha"] = lambda;
        p["beta"] = u(0.1, 2);
        p["gamma"] = u(0.0, 2 * kPi - 0.1);
    } else if (id == "R2.L14b") {
        p["alpha"] = lambda;
        p["beta"] = u(0.1, 2);
    } else if (id == "R2.L15a") {
        p["alpha"] = lambda;
        p["beta"] = u(0.2, 2);
        p["gamma"] = (rng() & 1u) ? u(0.05, kPi - 0.2) : u(kPi + 0.2, 2 * kPi - 0.05);
        p["r"] = u(-2, 2);
    } else if (id == "R2.L15b") {
        p["alpha"] = lambda;
        p["beta"] = u(0.2, 2);
        p["r"] = u(-2, 2);
    } else if (id == "R2.L16") {
        p["alpha"] = lambda;
        p["beta"] = u(0.2, 2);
        p["gamma"] = u(0.1, kPi / 2 - 0.1);
        p["delta"] = u(0.1, kPi - 0.1);
    } else {
        FAIL("no sampler for ", id);
    }
    return p;
}

}  // namespace

TEST_CASE("catalog lists all 33 families with unique ids and labels") {
    const auto& cat = catalog();
    CHECK(cat.size() == 33);
    std::set<std::string> ids;
    int rank1 = 0, rank2 = 0;
    for (const auto& f : cat) {
        ids.insert(f.id);
        (f.rank == 1 ? rank1 : rank2)++;
        CHECK(!f.n_equation.empty());
        CHECK(!f.h_equation.empty());
        CHECK(!f.param_names.empty());
    }
    CHECK(ids.size() == 33);
    CHECK(rank1 == 6);
    CHECK(rank2 == 27);
    CHECK(family_info("R2.L16").n_equation == "(50)");
    CHECK(family_info("R2.L16").h_equation == "(51)");
    CHECK(family_info("R1.6").n_equation == "(6)");
    CHECK(family_info("R2.L11").n_equation == "(38)");
    CHECK_THROWS_AS(family_info("nope"), std::out_of_range);
}

TEST_CASE("every constructed canonical pair is H-normal with the advertised rank") {
    std::mt19937_64 rng(2024);
    for (const auto& f : catalog()) {
        CAPTURE(f.id);
        for (int trial = 0; trial < 10; ++trial) {
            auto p = sample_params(f.id, rng);
            auto pair = construct(f.id, p);
            CHECK(pair.dim() == f.n);
            CHECK(!pair.h_negated());
            CHECK(pair.signature().rank() == f.rank);
            auto chk = is_h_normal(pair);
            CAPTURE(chk.residual);
            CHECK(chk.ok);
            CHECK(chk.residual <= 1e-12);
        }
    }
}

TEST_CASE("recognize is a left inverse of construct on every family") {
    std::mt19937_64 rng(99);
    for (const auto& f : catalog()) {
        CAPTURE(f.id);
        for (int trial = 0; trial < 5; ++trial) {
            auto p = sample_params(f.id, rng);
            auto pair = construct(f.id, p);
            auto hit = recognize(pair);
            REQUIRE(hit.has_value());
            CHECK(hit->first == f.id);
            for (const auto& [name, val] : p) {
                CAPTURE(name);
                double got = hit->second.at(name);
                if (name == "z")
                    CHECK(got == (val > 0 ? 1.0 : -1.0));
                else
                    CHECK(std::abs(got - val) <= 1e-9 * (1 + std::abs(val)));
            }
        }
    }
}

TEST_CASE("construct rejects out-of-domain parameters by name") {
    CHECK_THROWS_AS(construct("R1.1", {{"lambda1", 2.0}, {"lambda2", 1.0}}), ParameterDomainViolation);
    CHECK_THROWS_AS(construct("R1.2", {{"alpha", 0.0}, {"beta", 0.0}}), ParameterDomainViolation);
    CHECK_THROWS_AS(construct("R1.3", {{"lambda", 0.0}, {"z", 0.5}}), ParameterDomainViolation);
    CHECK_THROWS_AS(construct("R2.L3b", {{"lambda", 0.0}, {"z", 1.0}, {"r", 0.5}}), ParameterDomainViolation);
    CHECK_THROWS_AS(construct("R2.L16", {{"alpha", 0.0}, {"beta", 1.0}, {"gamma", 0.0}, {"delta", 1.0}}),
                    ParameterDomainViolation);
    // boundary gamma = beta is outside the open L10b domain
    CHECK_THROWS_AS(
        construct("R2.L10b", {{"lambda", 0.0}, {"alpha", 1.0}, {"beta", 0.7}, {"gamma", 0.7}}),
        ParameterDomainViolation);
    try {
        construct("R1.6", {{"lambda", 0.0}});
        FAIL("missing parameter accepted");
    } catch (const ParameterDomainViolation& e) {
        REQUIRE(!e.violations.empty());
        CHECK(e.violations.front().find("alpha") != std::string::npos);
    }
    try {
        construct("R2.L13",
                  {{"alpha1", 2.0}, {"alpha2", 1.0}, {"beta1", 1.0}, {"beta2", 1.0}, {"z", 1.0}});
        FAIL("equal-beta misordered alphas accepted");
    } catch (const ParameterDomainViolation& e) {
        CHECK(!e.violations.empty());
    }
}

TEST_CASE("families_for partitions the catalog by (n, rank, class)") {
    CHECK(families_for(2, 1, BlockClass::TwoReal) == std::vector<std::string>{"R1.1"});
    CHECK(families_for(2, 1, BlockClass::SinglePair) == std::vector<std::string>{"R1.2"});
    CHECK(families_for(2, 1, BlockClass::SingleReal) == std::vector<std::string>{"R1.3"});
    CHECK(families_for(3, 1, BlockClass::SingleReal).size() == 2);
    CHECK(families_for(4, 1, BlockClass::SingleReal) == std::vector<std::string>{"R1.6"});
    CHECK(families_for(4, 2, BlockClass::SingleReal).size() == 7);  // L1, L3a, L3b, L6a-d
    CHECK(families_for(5, 2, BlockClass::SingleReal).size() == 5);  // L2a, L2b, L4, L7a, L7b
    CHECK(families_for(6, 2, BlockClass::SingleReal).size() == 4);  // L5a, L5b, L8a, L8b
    CHECK(families_for(7, 2, BlockClass::SingleReal) == std::vector<std::string>{"R2.L9"});
    CHECK(families_for(8, 2, BlockClass::SingleReal).size() == 2);  // L10a, L10b
    CHECK(families_for(4, 2, BlockClass::TwoReal) == std::vector<std::string>{"R2.L11"});
    CHECK(families_for(4, 2, BlockClass::RealPlusPair) == std::vector<std::string>{"R2.L12"});
    CHECK(families_for(4, 2, BlockClass::TwoPairs) == std::vector<std::string>{"R2.L13"});
    CHECK(families_for(4, 2, BlockClass::SinglePair).size() == 2);  // L14a, L14b
    CHECK(families_for(6, 2, BlockClass::SinglePair).size() == 2);  // L15a, L15b
    CHECK(families_for(8, 2, BlockClass::SinglePair) == std::vector<std::string>{"R2.L16"});
    CHECK(families_for(9, 2, BlockClass::SingleReal).empty());
    int total = 0;
    for (int n = 2; n <= 8; ++n)
        for (int rank = 1; rank <= 2; ++rank)
            for (auto cls : {BlockClass::SingleReal, BlockClass::TwoReal, BlockClass::SinglePair,
                             BlockClass::RealPlusPair, BlockClass::TwoPairs})
                total += static_cast<int>(families_for(n, rank, cls).size());
    CHECK(total == 33);
}

TEST_CASE("uncoupled labels at r = 0 keep their order: the defective eigenvalue is invariant") {
    // at r = 0 the first block still carries the Jordan chain, and which
    // eigenvalue is defective distinguishes the two orderings as orbits
    auto pair = construct("R2.L11", {{"lambda1", 2.0}, {"lambda2", -1.0}, {"r", 0.0}});
    CHECK(pair.N()(0, 0) == 2.0);
    CHECK(pair.N()(0, 1) == 1.0);
    CHECK(pair.N()(2, 2) == -1.0);
    auto hit = recognize(pair);
    REQUIRE(hit.has_value());
    CHECK(hit->second.at("lambda1") == 2.0);
    // with coupling the order is a hard constraint instead
    CHECK_THROWS_AS(construct("R2.L11", {{"lambda1", 2.0}, {"lambda2", -1.0}, {"r", 0.5}}),
                    ParameterDomainViolation);
}

TEST_CASE("recognize refuses near-misses") {
    // right shape, wrong scalar product
    Mat N = Mat::Zero(2, 2);
    N(0, 0) = 1;
    N(1, 1) = 2;
    CHECK(!recognize(OperatorPair(N, Mat::Identity(2, 2))).has_value());
    // a generic H-normal pair in a scrambled basis is not canonical
    Mat H = reversal_matrix(2);
    Mat T(2, 2);
    T << 2, 1, 1, 1;
    OperatorPair scrambled(T.inverse() * N * T, T.transpose() * H * T);
    CHECK(!recognize(scrambled).has_value());
    // an off-template entry breaks the match
    auto good = construct("R2.L6d", {{"lambda", 1.0}});
    Mat bad = good.N();
    bad(0, 3) = 0.3;
    CHECK(!recognize(OperatorPair(bad, good.H())).has_value());
}

TEST_CASE("boundary overlap between neighbouring families resolves to the first clause") {
    // gamma -> beta collapses the second angle family onto the first
    Params p{{"lambda", 0.5}, {"alpha", 1.0}, {"beta", 0.8}, {"gamma", 0.8}};
    Params pa{{"lambda", 0.5}, {"alpha", 1.0}, {"beta", 0.8}};
    auto a = construct("R2.L10a", pa);
    Mat diff = a.N() - construct("R2.L10a", pa).N();
    CHECK(diff.norm() == 0.0);
    auto hit = recognize(a);
    REQUIRE(hit.has_value());
    CHECK(hit->first == "R2.L10a");
}
