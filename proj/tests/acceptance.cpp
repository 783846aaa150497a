// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "krein/catalog.hpp"
#include "krein/classify.hpp"
#include "krein/core.hpp"
#include "krein/oracle.hpp"
#include "krein/rank1.hpp"
#include "krein/rank2.hpp"

using namespace krein;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int g_failures = 0;

void report(int k, bool ok, const std::string& detail, double secs) {
    if (!ok) ++g_failures;
    std::printf("criterion %d: %s — %s (%.1f s)\n", k, ok ? "PASS" : "FAIL", detail.c_str(), secs);
    std::fflush(stdout);
}

OperatorPair direct_sum(const OperatorPair& a, const OperatorPair& b) {
    int na = a.dim(), nb = b.dim();
    Mat N = Mat::Zero(na + nb, na + nb), H = Mat::Zero(na + nb, na + nb);
    N.topLeftCorner(na, na) = a.N();
    N.bottomRightCorner(nb, nb) = b.N();
    H.topLeftCorner(na, na) = a.H();
    H.bottomRightCorner(nb, nb) = b.H();
    return OperatorPair(N, H);
}

// One parameter draw from the open domain of a family, with a margin from
// every boundary so that 1e-6 parameter comparisons are meaningful.
Params draw_params(const std::string& id, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> upos(0.3, 2.0);
    std::uniform_real_distribution<double> uang(0.15, 2.95);
    auto pm1 = [&] { return rng() % 2 ? 1.0 : -1.0; };
    auto ur = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    if (id == "R1.1" || id == "R2.L11") {
        double l1 = u(rng);
        Params p{{"lambda1", l1}, {"lambda2", l1 + 0.4 + upos(rng)}};
        if (id == "R2.L11") p["r"] = u(rng);
        return p;
    }
    if (id == "R1.2") return {{"alpha", u(rng)}, {"beta", upos(rng)}};
    if (id == "R1.3" || id == "R2.L1" || id == "R2.L3a" || id == "R2.L6c" || id == "R2.L7a")
        return {{"lambda", u(rng)}, {"z", pm1()}};
    if (id == "R1.4" || id == "R2.L2a" || id == "R2.L6d") return {{"lambda", u(rng)}};
    if (id == "R1.5") return {{"lambda", u(rng)}, {"r", u(rng)}};
    if (id == "R1.6" || id == "R2.L6a") return {{"lambda", u(rng)}, {"alpha", uang(rng)}};
    if (id == "R2.L2b") return {{"lambda", u(rng)}, {"r1", u(rng)}, {"r2", u(rng)}};
    if (id == "R2.L3b") return {{"lambda", u(rng)}, {"z", pm1()}, {"r", pm1() * (1.15 + upos(rng))}};
    if (id == "R2.L4" || id == "R2.L7b") return {{"lambda", u(rng)}, {"z", pm1()}, {"r", 0.2 + upos(rng)}};
    if (id == "R2.L5a" || id == "R2.L8a") return {{"lambda", u(rng)}, {"r", 0.2 + upos(rng)}};
    if (id == "R2.L5b") return {{"lambda", u(rng)}, {"r1", u(rng)}, {"r2", 0.2 + upos(rng)}};
    if (id == "R2.L6b") return {{"lambda", u(rng)}, {"r", pm1() * (1.15 + upos(rng))}};
    if (id == "R2.L8b") return {{"lambda", u(rng)}, {"r", u(rng)}, {"alpha", uang(rng)}};
    if (id == "R2.L9") return {{"lambda", u(rng)}, {"alpha", uang(rng)}, {"beta", uang(rng)}};
    if (id == "R2.L10a") return {{"lambda", u(rng)}, {"alpha", uang(rng)}, {"beta", ur(0.1, 1.45)}};
    if (id == "R2.L10b") {
        double beta = ur(0.5, 1.45);
        return {{"lambda", u(rng)}, {"alpha", uang(rng)}, {"beta", beta}, {"gamma", ur(0.05, beta - 0.1)}};
    }
    if (id == "R2.L12") return {{"lambda", u(rng)}, {"alpha", u(rng)}, {"beta", upos(rng)}};
    if (id == "R2.L13") {
        double b1 = upos(rng);
        return {{"alpha1", u(rng)}, {"beta1", b1}, {"alpha2", u(rng)}, {"beta2", b1 + 0.3 + upos(rng)},
                {"z", pm1()}};
    }
    if (id == "R2.L14a") return {{"alpha", u(rng)}, {"beta", upos(rng)}, {"gamma", ur(0.05, 6.2)}};
    if (id == "R2.L14b") return {{"alpha", u(rng)}, {"beta", upos(rng)}};
    if (id == "R2.L15a") {
        double gamma = ur(0.3, 2.6) + (rng() % 2 ? kPi + 0.4 : 0.0);
        return {{"alpha", u(rng)}, {"beta", upos(rng)}, {"gamma", gamma}, {"r", u(rng)}};
    }
    if (id == "R2.L15b") return {{"alpha", u(rng)}, {"beta", upos(rng)}, {"r", u(rng)}};
    if (id == "R2.L16")
        return {{"alpha", u(rng)}, {"beta", upos(rng)}, {"gamma", ur(0.15, 1.4)}, {"delta", uang(rng)}};
    throw std::runtime_error("no draw rule for " + id);
}

bool params_match(const Params& expected, const Params& got, std::string& why) {
    for (const auto& [k, v] : expected) {
        auto it = got.find(k);
        if (it == got.end()) {
            why = "missing parameter " + k;
            return false;
        }
        if (k == "z") {
            if (it->second != v) {
                why = "z mismatch";
                return false;
            }
        } else if (std::abs(it->second - v) > 1e-6) {
            why = k + " off by " + std::to_string(std::abs(it->second - v));
            return false;
        }
    }
    return true;
}

// criteria 1 and 2 share the round-trip protocol
bool round_trip_suite(const std::vector<std::string>& families, int draws, int scrambles, int rank,
                      std::uint64_t seed, std::string& detail) {
    std::mt19937_64 rng(seed);
    long runs = 0;
    for (const auto& id : families)
        for (int d = 0; d < draws; ++d) {
            auto p = draw_params(id, rng);
            auto canon = construct(id, p);
            for (const auto& input : scramble(canon, {rng(), 1.0, scrambles})) {
                ++runs;
                try {
                    auto res = rank == 1 ? classify_rank1(input) : classify_rank2(input);
                    std::string why;
                    if (res.family != id) {
                        detail = id + ": classified as " + res.family;
                        return false;
                    }
                    if (!params_match(p, res.params, why)) {
                        detail = id + ": " + why;
                        return false;
                    }
                    if (res.residual > 1e-6) {
                        detail = id + ": residual " + std::to_string(res.residual);
                        return false;
                    }
                } catch (const std::exception& e) {
                    detail = id + ": exception: " + e.what();
                    return false;
                }
            }
        }
    detail = std::to_string(runs) + " runs, families exact, parameters <= 1e-6, residuals <= 1e-6";
    return true;
}

bool criterion1(std::string& detail) {
    return round_trip_suite({"R1.1", "R1.2", "R1.3", "R1.4", "R1.5", "R1.6"}, 50, 20, 1, 101, detail);
}

bool criterion2(std::string& detail) {
    return round_trip_suite({"R2.L6a", "R2.L6b", "R2.L6c", "R2.L6d", "R2.L12", "R2.L13", "R2.L14a",
                             "R2.L14b", "R2.L15a", "R2.L15b", "R2.L16"},
                            50, 20, 2, 202, detail);
}

bool criterion3(std::string& detail) {
    const std::vector<std::string> deferred = {"R2.L1",  "R2.L2a", "R2.L2b", "R2.L3a", "R2.L3b",
                                               "R2.L4",  "R2.L5a", "R2.L5b", "R2.L7a", "R2.L7b",
                                               "R2.L8a", "R2.L8b", "R2.L9",  "R2.L10a", "R2.L10b",
                                               "R2.L11"};
    std::mt19937_64 rng(303);
    long total_hits = 0, total_runs = 0;
    double worst_rate = 1.0;
    std::string worst_family;
    for (const auto& id : deferred) {
        int hits = 0, runs = 0;
        for (int d = 0; d < 10; ++d) {
            auto p = draw_params(id, rng);
            auto canon = construct(id, p);
            for (const auto& input : scramble(canon, {rng(), 1.0, 20})) {
                ++runs;
                try {
                    auto res = classify_rank2(input);
                    if (res.family != id) {
                        detail = id + ": wrong family " + res.family;
                        return false;
                    }
                    if (res.residual <= 1e-6) ++hits;
                } catch (const DeferredUnresolved&) {
                    // allowed failure mode: search exhausted, never a wrong family
                } catch (const std::exception& e) {
                    detail = id + ": unexpected failure mode: " + e.what();
                    return false;
                }
            }
        }
        double rate = static_cast<double>(hits) / runs;
        if (rate < worst_rate) {
            worst_rate = rate;
            worst_family = id;
        }
        total_hits += hits;
        total_runs += runs;
        if (rate < 0.95) {
            detail = id + ": recovery rate " + std::to_string(rate);
            return false;
        }
    }
    detail = std::to_string(total_hits) + "/" + std::to_string(total_runs) +
             " recognized, worst family " + worst_family + " at " + std::to_string(worst_rate) +
             ", failures only search-exhausted";
    return true;
}

bool criterion4(std::string& detail) {
    struct Pair {
        std::string name;
        OperatorPair a, b;
    };
    auto mk = [](const std::string& id, const Params& p) { return construct(id, p); };
    std::vector<Pair> cases;
    cases.push_back({"(4) vs (5)", mk("R1.4", {{"lambda", 0.7}}), mk("R1.5", {{"lambda", 0.7}, {"r", 1.3}})});
    cases.push_back({"(3) z=+1 vs z=-1", mk("R1.3", {{"lambda", 0.5}, {"z", 1.0}}),
                     mk("R1.3", {{"lambda", 0.5}, {"z", -1.0}})});
    auto l6a = mk("R2.L6a", {{"lambda", 0.4}, {"alpha", 1.1}});
    auto l6b = mk("R2.L6b", {{"lambda", 0.4}, {"r", 1.8}});
    auto l6c = mk("R2.L6c", {{"lambda", 0.4}, {"z", 1.0}});
    auto l6d = mk("R2.L6d", {{"lambda", 0.4}});
    cases.push_back({"(22) vs (23)", l6a, l6b});
    cases.push_back({"(22) vs (24)", l6a, l6c});
    cases.push_back({"(22) vs (25)", l6a, l6d});
    cases.push_back({"(23) vs (24)", l6b, l6c});
    cases.push_back({"(23) vs (25)", l6b, l6d});
    cases.push_back({"(24) vs (25)", l6c, l6d});
    cases.push_back({"(44) vs (45)", mk("R2.L14a", {{"alpha", 0.3}, {"beta", 1.1}, {"gamma", 2.0}}),
                     mk("R2.L14b", {{"alpha", 0.3}, {"beta", 1.1}})});
    cases.push_back(
        {"(47) vs (48)",
         mk("R2.L15a", {{"alpha", 0.3}, {"beta", 1.1}, {"gamma", 1.0}, {"r", 0.6}}),
         mk("R2.L15b", {{"alpha", 0.3}, {"beta", 1.1}, {"r", 0.6}})});
    Params l13{{"alpha1", 0.2}, {"beta1", 1.0}, {"alpha2", -0.3}, {"beta2", 2.1}, {"z", 1.0}};
    Params l13m = l13;
    l13m["z"] = -1.0;
    cases.push_back({"(42) z=+1 vs z=-1", mk("R2.L13", l13), mk("R2.L13", l13m)});

    for (const auto& c : cases) {
        auto res = similarity_solve(c.a, c.b);
        if (res.status != SimilarityStatus::InvariantMismatch) {
            detail = c.name + ": verdict was not an invariant mismatch";
            return false;
        }
    }
    detail = std::to_string(cases.size()) + " variant pairs conclusively not-similar, zero false-similar";
    return true;
}

bool criterion5(std::string& detail) {
    std::mt19937_64 rng(505);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        // distinct spectral slots keep clusters separated across blocks
        int slot = 0;
        auto next = [&] { return -5.0 + 0.8 * slot++; };
        auto pm1 = [&] { return rng() % 2 ? 1.0 : -1.0; };
        int nblocks = 2 + static_cast<int>(rng() % 3);
        std::vector<OperatorPair> blocks;
        for (int b = 0; b < nblocks; ++b) {
            switch (rng() % 6) {
                case 0: blocks.push_back(construct("R1.3", {{"lambda", next()}, {"z", pm1()}})); break;
                case 1: {
                    double l1 = next();
                    blocks.push_back(construct("R1.1", {{"lambda1", l1}, {"lambda2", next()}}));
                    break;
                }
                case 2: blocks.push_back(construct("R1.2", {{"alpha", next()}, {"beta", 0.7}})); break;
                case 3:
                    blocks.push_back(
                        construct("R2.L12", {{"lambda", next()}, {"alpha", next()}, {"beta", 0.9}}));
                    break;
                case 4:
                    blocks.push_back(construct("R2.L13", {{"alpha1", next()},
                                                          {"beta1", 0.8},
                                                          {"alpha2", next()},
                                                          {"beta2", 1.3},
                                                          {"z", pm1()}}));
                    break;
                default: blocks.push_back(construct("R1.6", {{"lambda", next()}, {"alpha", 1.2}}));
            }
        }
        OperatorPair summed = blocks[0];
        for (std::size_t b = 1; b < blocks.size(); ++b) summed = direct_sum(summed, blocks[b]);
        auto input = scramble(summed, {rng(), 1.0, 1})[0];
        auto dec = block_decompose(input);
        auto check = verify_decomposition(input, dec);
        worst = std::max(worst, check.max_residual);
        if (!check.ok || check.max_residual > 1e-8) {
            detail = "trial " + std::to_string(trial) + ": residual " +
                     std::to_string(check.max_residual) +
                     (check.failures.empty() ? "" : ", " + check.failures.front());
            return false;
        }
        if (dec.blocks.size() != blocks.size()) {
            detail = "trial " + std::to_string(trial) + ": block count " +
                     std::to_string(dec.blocks.size()) + " != " + std::to_string(blocks.size());
            return false;
        }
    }
    detail = "100 multi-block constructions verified, worst residual " + std::to_string(worst);
    return true;
}

bool criterion6(std::string& detail) {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    // (a) the n = 4 one-real-eigenvalue pre-canonical shape: H-normality is
    // equivalent to eq. (13), a^2 + b^2 = d^2 + e^2
    double worst13 = 0;
    Mat H4 = Mat::Zero(4, 4);
    H4(0, 3) = H4(3, 0) = H4(1, 1) = H4(2, 2) = 1;
    for (int d = 0; d < 10; ++d) {
        double lambda = u(rng), a = u(rng) + 3.0, b = u(rng), c = u(rng), theta = u(rng);
        double dd = std::cos(theta) * a - std::sin(theta) * b;
        double ee = std::sin(theta) * a + std::cos(theta) * b;
        Mat N = lambda * Mat::Identity(4, 4);
        N(0, 1) = a;
        N(0, 2) = b;
        N(0, 3) = c;
        N(1, 3) = dd;
        N(2, 3) = ee;
        OperatorPair pair(N, H4);
        auto chk = is_h_normal(pair);
        double res13 = std::abs(a * a + b * b - dd * dd - ee * ee);
        worst13 = std::max(worst13, res13);
        if (!chk.ok || res13 > 1e-12) {
            detail = "eq. (13) residual " + std::to_string(res13);
            return false;
        }
    }
    // (b) normality system (52)-(55) on adapted single-conjugate-pair blocks
    double worst52 = 0;
    for (const std::string id : {"R2.L14a", "R2.L14b", "R2.L15a", "R2.L15b", "R2.L16"})
        for (int d = 0; d < 5; ++d) {
            auto canon = construct(id, draw_params(id, rng));
            for (const auto& input : scramble(canon, {rng(), 1.0, 2})) {
                auto dec = prop2_decomposition(input);
                for (double r : dec.normality_residuals) {
                    worst52 = std::max(worst52, r);
                    if (r > 1e-9) {
                        detail = id + ": system (52)-(55) residual " + std::to_string(r);
                        return false;
                    }
                }
            }
        }
    // (c) every catalog constructor is H-normal to machine precision
    double worstHN = 0;
    for (const auto& f : catalog())
        for (int d = 0; d < 10; ++d) {
            auto chk = is_h_normal(construct(f.id, draw_params(f.id, rng)));
            worstHN = std::max(worstHN, chk.residual);
            if (chk.residual > 1e-12) {
                detail = f.id + ": H-normality residual " + std::to_string(chk.residual);
                return false;
            }
        }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "eq. (13) residual <= %.2e, system (52)-(55) <= %.2e, 33 constructors H-normal <= %.2e",
                  worst13, worst52, worstHN);
    detail = buf;
    return true;
}

bool criterion7(std::string& detail) {
    std::vector<Mat> hs;
    for (int r = 2; r <= 8; ++r) hs.push_back(reversal_matrix(r));
    hs.push_back(Mat::Identity(5, 5));
    Vec d1(4), d2(7);
    d1 << 1, -1, 1, -1;
    d2 << -1, 1, 1, -1, 1, 1, -1;
    hs.push_back(Mat(d1.asDiagonal()));
    hs.push_back(Mat(d2.asDiagonal()));
    double worst = 0;
    int samples = 0;
    for (std::uint64_t seed = 0; samples < 1000; ++seed)
        for (const auto& H : hs) {
            if (samples >= 1000) break;
            Mat T = random_h_unitary(H, {seed, 1.0, 1});
            worst = std::max(worst, (T.transpose() * H * T - H).norm());
            ++samples;
            if (worst > 1e-10) {
                detail = "congruence defect " + std::to_string(worst);
                return false;
            }
        }
    char buf[96];
    std::snprintf(buf, sizeof buf, "1000 samples over 10 scalar products, worst defect %.2e", worst);
    detail = buf;
    return true;
}

bool criterion8(std::string& detail) {
    std::mt19937_64 rng(808);
    OperatorPair line_half(0.5 * Mat::Identity(1, 1), Mat::Identity(1, 1));
    std::vector<std::pair<std::string, OperatorPair>> cases;
    // rank 1, n = 5 and n = 6 with a single real eigenvalue
    cases.emplace_back("rank-1 n=5",
                       direct_sum(direct_sum(construct("R1.4", {{"lambda", 0.5}}), line_half), line_half));
    cases.emplace_back(
        "rank-1 n=6",
        direct_sum(direct_sum(construct("R1.6", {{"lambda", 0.5}, {"alpha", 1.1}}), line_half), line_half));
    // rank 2, n = 9 with a single real eigenvalue
    cases.emplace_back("rank-2 n=9",
                       direct_sum(construct("R2.L10a", {{"lambda", 0.5}, {"alpha", 1.0}, {"beta", 0.8}}),
                                  line_half));
    // rank 2, n = 10 with a single conjugate pair
    cases.emplace_back(
        "rank-2 n=10",
        direct_sum(construct("R2.L16", {{"alpha", 0.4}, {"beta", 1.0}, {"gamma", 0.7}, {"delta", 1.2}}),
                   OperatorPair(rot2(0.4, 1.0), Mat::Identity(2, 2))));

    for (const auto& [name, summed] : cases)
        for (const auto& input : scramble(summed, {rng(), 1.0, 3})) {
            auto rep = classify_pair(input);
            for (const auto& b : rep.blocks) {
                if (b.status == BlockStatus::Classified || b.status == BlockStatus::Definite) {
                    detail = name + ": out-of-bounds block was force-classified";
                    return false;
                }
                if (b.status != BlockStatus::OutOfScope) {
                    detail = name + ": unexpected status";
                    return false;
                }
            }
        }
    detail = "out-of-bounds synthesized inputs reported decomposable-or-out-of-scope, never classified";
    return true;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        bool (*fn)(std::string&);
        double limit;  // seconds, 0 = no bound
    };
    const Entry entries[] = {
        {1, criterion1, 30}, {2, criterion2, 120}, {3, criterion3, 600}, {4, criterion4, 0},
        {5, criterion5, 0},  {6, criterion6, 0},   {7, criterion7, 0},   {8, criterion8, 0},
    };
    for (const auto& e : entries) {
        Timer t;
        std::string detail;
        bool ok = false;
        try {
            ok = e.fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        double secs = t.elapsed();
        if (ok && e.limit > 0 && secs > e.limit) {
            ok = false;
            detail += " — exceeded the " + std::to_string(static_cast<int>(e.limit)) + " s budget";
        }
        report(e.id, ok, detail, secs);
    }
    return g_failures == 0 ? 0 : 1;
}
