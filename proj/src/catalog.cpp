#include "krein/catalog.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "krein/core.hpp"

namespace krein {

namespace {

constexpr double kPi = 3.14159265358979323846;
// equality at a domain boundary is decided at this absolute tolerance
constexpr double kBoundaryTol = 1e-9;

bool strictly_less(double a, double b) { return a < b - kBoundaryTol; }
bool at_most(double a, double b) { return a <= b + kBoundaryTol; }
bool is_pm1(double z) { return std::abs(z - 1.0) <= kBoundaryTol || std::abs(z + 1.0) <= kBoundaryTol; }
double snap_pm1(double z) { return z > 0 ? 1.0 : -1.0; }

double wrap_2pi(double a) {
    while (a < 0) a += 2 * kPi;
    while (a >= 2 * kPi) a -= 2 * kPi;
    return a;
}

// ---- H templates ----

Mat h_antidiag_identity(int k) {  // [[0, I_k], [I_k, 0]]
    Mat H = Mat::Zero(2 * k, 2 * k);
    H.block(0, k, k, k) = Mat::Identity(k, k);
    H.block(k, 0, k, k) = Mat::Identity(k, k);
    return H;
}

Mat h_corner_frame(int n, int s) {  // [[0,0,I_s],[0,I_{n-2s},0],[I_s,0,0]]
    Mat H = Mat::Zero(n, n);
    H.block(0, n - s, s, s) = Mat::Identity(s, s);
    H.block(n - s, 0, s, s) = Mat::Identity(s, s);
    if (n > 2 * s) H.block(s, s, n - 2 * s, n - 2 * s) = Mat::Identity(n - 2 * s, n - 2 * s);
    return H;
}

Mat h_block_1_d3_1_1() {  // [[0,0,0,1],[0,D3,0,0],[0,0,1,0],[1,0,0,0]] on sizes (1,3,1,1)
    Mat H = Mat::Zero(6, 6);
    H(0, 5) = H(5, 0) = 1;
    H.block(1, 1, 3, 3) = reversal_matrix(3);
    H(4, 4) = 1;
    return H;
}

Mat build_H(const std::string& id) {
    if (id == "R1.1" || id == "R1.2" || id == "R1.3") return reversal_matrix(2);
    if (id == "R1.4" || id == "R1.5") return reversal_matrix(3);
    if (id == "R1.6") return h_corner_frame(4, 1);
    if (id == "R2.L1" || id == "R2.L3a" || id == "R2.L3b") return reversal_matrix(4);
    if (id == "R2.L2a" || id == "R2.L2b" || id == "R2.L4") return reversal_matrix(5);
    if (id == "R2.L5a" || id == "R2.L5b") return h_block_1_d3_1_1();
    if (id == "R2.L6a" || id == "R2.L6b" || id == "R2.L6c" || id == "R2.L6d" || id == "R2.L11" ||
        id == "R2.L12" || id == "R2.L13" || id == "R2.L14a" || id == "R2.L14b")
        return h_antidiag_identity(2);
    if (id == "R2.L7a" || id == "R2.L7b") return h_corner_frame(5, 2);
    if (id == "R2.L8a" || id == "R2.L8b" || id == "R2.L15a" || id == "R2.L15b") return h_corner_frame(6, 2);
    if (id == "R2.L9") return h_corner_frame(7, 2);
    if (id == "R2.L10a" || id == "R2.L10b" || id == "R2.L16") return h_corner_frame(8, 2);
    throw std::out_of_range("unknown canonical family: " + id);
}

// ---- N templates ----

Mat build_N(const std::string& id, const Params& q) {
    auto g = [&](const char* k) { return q.at(k); };
    if (id == "R1.1") {
        Mat N = Mat::Zero(2, 2);
        N(0, 0) = g("lambda1");
        N(1, 1) = g("lambda2");
        return N;
    }
    if (id == "R1.2") return rot2(g("alpha"), g("beta"));
    if (id == "R1.3") {
        Mat N = g("lambda") * Mat::Identity(2, 2);
        N(0, 1) = snap_pm1(g("z"));
        return N;
    }
    if (id == "R1.4") {
        Mat N = g("lambda") * Mat::Identity(3, 3);
        N(0, 1) = N(1, 2) = 1;
        return N;
    }
    if (id == "R1.5") {
        Mat N = g("lambda") * Mat::Identity(3, 3);
        N(0, 1) = 1;
        N(0, 2) = g("r");
        N(1, 2) = -1;
        return N;
    }
    if (id == "R1.6") {
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 1) = 1;
        N(1, 3) = std::cos(g("alpha"));
        N(2, 3) = std::sin(g("alpha"));
        return N;
    }
    if (id == "R2.L1") {
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 1) = N(2, 3) = 1;
        N(1, 2) = snap_pm1(g("z"));
        return N;
    }
    if (id == "R2.L2a") {
        Mat N = g("lambda") * Mat::Identity(5, 5);
        for (int i = 0; i < 4; ++i) N(i, i + 1) = 1;
        return N;
    }
    if (id == "R2.L2b") {
        double r1 = g("r1"), r2 = g("r2");
        Mat N = g("lambda") * Mat::Identity(5, 5);
        N(0, 1) = 1;
        N(0, 2) = -r1;
        N(0, 4) = r2;
        N(1, 2) = 1;
        N(1, 3) = r1;
        N(2, 3) = -1;
        N(2, 4) = -r1;
        N(3, 4) = -1;
        return N;
    }
    if (id == "R2.L3a") {
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 1) = 1;
        N(1, 3) = snap_pm1(g("z"));
        return N;
    }
    if (id == "R2.L3b") {
        double z = snap_pm1(g("z")), r = g("r");
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 1) = 1;
        N(0, 2) = z;
        N(1, 3) = r;
        N(2, 3) = z / r;
        return N;
    }
    if (id == "R2.L4") {
        double z = snap_pm1(g("z")), r = g("r");
        Mat N = g("lambda") * Mat::Identity(5, 5);
        N(0, 1) = 1;
        N(0, 3) = r * r / 2;
        N(1, 3) = z;
        N(2, 4) = r;
        N(3, 4) = 1;
        return N;
    }
    if (id == "R2.L5a") {
        double r = g("r");
        Mat N = g("lambda") * Mat::Identity(6, 6);
        N(0, 1) = 1;
        N(1, 2) = 1;
        N(1, 5) = -r * r / 2;
        N(2, 3) = 1;
        N(3, 5) = 1;
        N(4, 5) = r;
        return N;
    }
    if (id == "R2.L5b") {
        double r1 = g("r1"), r2 = g("r2");
        Mat N = g("lambda") * Mat::Identity(6, 6);
        N(0, 1) = 1;
        N(0, 2) = -2 * r1;
        N(1, 2) = 1;
        N(1, 3) = r1;
        N(1, 5) = -2 * r1 * r1 + r2 * r2 / 2;
        N(2, 3) = -1;
        N(3, 5) = -1;
        N(4, 5) = r2;
        return N;
    }
    if (id == "R2.L6a") {
        double c = std::cos(g("alpha")), s = std::sin(g("alpha"));
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 2) = c;
        N(0, 3) = s;
        N(1, 2) = -s;
        N(1, 3) = c;
        return N;
    }
    if (id == "R2.L6b") {
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 3) = 1;
        N(1, 2) = g("r");
        return N;
    }
    if (id == "R2.L6c") {
        double z = snap_pm1(g("z"));
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(0, 2) = z / 2;
        N(0, 3) = z;
        N(1, 2) = -z;
        return N;
    }
    if (id == "R2.L6d") {
        Mat N = g("lambda") * Mat::Identity(4, 4);
        N(1, 2) = 1;
        return N;
    }
    if (id == "R2.L7a") {
        Mat N = g("lambda") * Mat::Identity(5, 5);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(2, 3) = snap_pm1(g("z"));
        return N;
    }
    if (id == "R2.L7b") {
        Mat N = g("lambda") * Mat::Identity(5, 5);
        N(0, 2) = 1;
        N(1, 3) = g("r");
        N(1, 4) = snap_pm1(g("z"));
        N(2, 3) = 1;
        return N;
    }
    if (id == "R2.L8a") {
        Mat N = g("lambda") * Mat::Identity(6, 6);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(1, 4) = g("r");
        N(2, 4) = 1;
        N(3, 5) = 1;
        return N;
    }
    if (id == "R2.L8b") {
        double c = std::cos(g("alpha")), s = std::sin(g("alpha"));
        Mat N = g("lambda") * Mat::Identity(6, 6);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(1, 4) = g("r");
        N(2, 4) = c;
        N(2, 5) = s;
        N(3, 4) = -s;
        N(3, 5) = c;
        return N;
    }
    if (id == "R2.L9") {
        double ca = std::cos(g("alpha")), sa = std::sin(g("alpha"));
        double cb = std::cos(g("beta")), sb = std::sin(g("beta"));
        Mat N = g("lambda") * Mat::Identity(7, 7);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(2, 5) = ca;
        N(2, 6) = -sa * cb;
        N(3, 5) = sa;
        N(3, 6) = ca * cb;
        N(4, 6) = sb;
        return N;
    }
    if (id == "R2.L10a") {
        double ca = std::cos(g("alpha")), sa = std::sin(g("alpha"));
        double cb = std::cos(g("beta")), sb = std::sin(g("beta"));
        Mat N = g("lambda") * Mat::Identity(8, 8);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(2, 6) = ca * sb;
        N(2, 7) = sa * sb;
        N(3, 6) = -sa * sb;
        N(3, 7) = ca * sb;
        N(4, 6) = cb;
        N(5, 7) = cb;
        return N;
    }
    if (id == "R2.L10b") {
        double ca = std::cos(g("alpha")), sa = std::sin(g("alpha"));
        double cb = std::cos(g("beta")), sb = std::sin(g("beta"));
        double cg = std::cos(g("gamma")), sg = std::sin(g("gamma"));
        Mat N = g("lambda") * Mat::Identity(8, 8);
        N(0, 2) = 1;
        N(1, 3) = 1;
        N(2, 6) = ca * sb;
        N(2, 7) = sa * sg;
        N(3, 6) = -sa * sb;
        N(3, 7) = ca * sg;
        N(4, 6) = cb;
        N(5, 7) = cg;
        return N;
    }
    if (id == "R2.L11") {
        double l1 = g("lambda1"), l2 = g("lambda2"), r = g("r");
        // at r = 0 the order is unconstrained: the defective eigenvalue always
        // sits in the first block, and which eigenvalue is defective is a
        // similarity invariant, so the two orderings are distinct orbits
        Mat N = Mat::Zero(4, 4);
        N(0, 0) = N(1, 1) = l1;
        N(2, 2) = N(3, 3) = l2;
        N(0, 1) = 1;
        N(3, 2) = r;
        return N;
    }
    if (id == "R2.L12") {
        Mat N = Mat::Zero(4, 4);
        N.block(0, 0, 2, 2) = rot2(g("alpha"), g("beta"));
        N(2, 2) = N(3, 3) = g("lambda");
        return N;
    }
    if (id == "R2.L13") {
        Mat N = Mat::Zero(4, 4);
        N.block(0, 0, 2, 2) = rot2(g("alpha1"), g("beta1"));
        N.block(2, 2, 2, 2) = rot2(g("alpha2"), snap_pm1(g("z")) * g("beta2"));
        return N;
    }
    if (id == "R2.L14a") {
        Mat N = Mat::Zero(4, 4);
        N.block(0, 0, 2, 2) = rot2(g("alpha"), g("beta"));
        N.block(2, 2, 2, 2) = rot2(g("alpha"), g("beta"));
        N.block(0, 2, 2, 2) = rot2(std::cos(g("gamma")), std::sin(g("gamma")));
        return N;
    }
    if (id == "R2.L14b") {
        Mat N = Mat::Zero(4, 4);
        N.block(0, 0, 2, 2) = rot2(g("alpha"), g("beta"));
        N.block(2, 2, 2, 2) = rot2(g("alpha"), -g("beta"));
        N(0, 3) = 1;
        N(1, 2) = 1;
        return N;
    }
    if (id == "R2.L15a") {
        double a = g("alpha"), b = g("beta"), gm = g("gamma"), r = g("r");
        double cg = std::cos(gm), sg = std::sin(gm);
        Mat N = Mat::Zero(6, 6);
        for (int k = 0; k < 3; ++k) N.block(2 * k, 2 * k, 2, 2) = rot2(a, b);
        N(1, 3) = 1;
        N(0, 5) = r;
        N(1, 4) = (cg + 1) / (4 * b) - r;
        N(1, 5) = sg / (4 * b);
        N(2, 4) = (cg + 1) / 2;
        N(2, 5) = sg / 2;
        N(3, 4) = -sg / 2;
        N(3, 5) = (cg - 1) / 2;
        return N;
    }
    if (id == "R2.L15b") {
        double a = g("alpha"), b = g("beta"), r = g("r");
        Mat N = Mat::Zero(6, 6);
        for (int k = 0; k < 3; ++k) N.block(2 * k, 2 * k, 2, 2) = rot2(a, b);
        N(1, 3) = 1;
        N(0, 4) = r;
        N(1, 5) = r;
        N(3, 5) = -1;
        return N;
    }
    if (id == "R2.L16") {
        double a = g("alpha"), b = g("beta"), gm = g("gamma"), dl = g("delta");
        double sg = std::sin(gm), cg = std::cos(gm), sd = std::sin(dl), cd = std::cos(dl);
        Mat N = Mat::Zero(8, 8);
        for (int k = 0; k < 4; ++k) N.block(2 * k, 2 * k, 2, 2) = rot2(a, b);
        N(1, 3) = 1;
        N(1, 6) = sg * sg / (2 * b);
        N(1, 7) = sg * cg * cd / (2 * b);
        N(2, 6) = sg * sg;
        N(2, 7) = sg * cg * cd;
        N(3, 6) = -sg * cg * cd;
        N(3, 7) = -cg * cg;
        N(4, 6) = sg * cg * sd;
        N(5, 7) = sg * cg * sd;
        return N;
    }
    throw std::out_of_range("unknown canonical family: " + id);
}

// ---- parameter read-off from an already-canonical N ----

std::optional<Params> read_params(const std::string& id, const Mat& N) {
    Params p;
    if (id == "R1.1") {
        p["lambda1"] = N(0, 0);
        p["lambda2"] = N(1, 1);
    } else if (id == "R1.2") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
    } else if (id == "R1.3") {
        p["lambda"] = N(0, 0);
        p["z"] = N(0, 1);
    } else if (id == "R1.4") {
        p["lambda"] = N(0, 0);
    } else if (id == "R1.5") {
        p["lambda"] = N(0, 0);
        p["r"] = N(0, 2);
    } else if (id == "R1.6") {
        p["lambda"] = N(0, 0);
        p["alpha"] = std::atan2(N(2, 3), N(1, 3));
    } else if (id == "R2.L1") {
        p["lambda"] = N(0, 0);
        p["z"] = N(1, 2);
    } else if (id == "R2.L2a") {
        p["lambda"] = N(0, 0);
    } else if (id == "R2.L2b") {
        p["lambda"] = N(0, 0);
        p["r1"] = -N(0, 2);
        p["r2"] = N(0, 4);
    } else if (id == "R2.L3a") {
        p["lambda"] = N(0, 0);
        p["z"] = N(1, 3);
    } else if (id == "R2.L3b") {
        p["lambda"] = N(0, 0);
        p["z"] = N(0, 2);
        p["r"] = N(1, 3);
    } else if (id == "R2.L4") {
        p["lambda"] = N(0, 0);
        p["z"] = N(1, 3);
        p["r"] = N(2, 4);
    } else if (id == "R2.L5a") {
        p["lambda"] = N(0, 0);
        p["r"] = N(4, 5);
    } else if (id == "R2.L5b") {
        p["lambda"] = N(0, 0);
        p["r1"] = N(1, 3);
        p["r2"] = N(4, 5);
    } else if (id == "R2.L6a") {
        p["lambda"] = N(0, 0);
        p["alpha"] = std::atan2(N(0, 3), N(0, 2));
    } else if (id == "R2.L6b") {
        p["lambda"] = N(0, 0);
        p["r"] = N(1, 2);
    } else if (id == "R2.L6c") {
        p["lambda"] = N(0, 0);
        p["z"] = N(0, 3);
    } else if (id == "R2.L6d") {
        p["lambda"] = N(0, 0);
    } else if (id == "R2.L7a") {
        p["lambda"] = N(0, 0);
        p["z"] = N(2, 3);
    } else if (id == "R2.L7b") {
        p["lambda"] = N(0, 0);
        p["r"] = N(1, 3);
        p["z"] = N(1, 4);
    } else if (id == "R2.L8a") {
        p["lambda"] = N(0, 0);
        p["r"] = N(1, 4);
    } else if (id == "R2.L8b") {
        p["lambda"] = N(0, 0);
        p["r"] = N(1, 4);
        p["alpha"] = std::atan2(N(2, 5), N(2, 4));
    } else if (id == "R2.L9") {
        p["lambda"] = N(0, 0);
        double alpha = std::atan2(N(3, 5), N(2, 5));
        double sa = std::sin(alpha);
        if (std::abs(sa) < 1e-12) return std::nullopt;
        p["alpha"] = alpha;
        p["beta"] = std::atan2(N(4, 6), -N(2, 6) / sa);
    } else if (id == "R2.L10a") {
        p["lambda"] = N(0, 0);
        p["alpha"] = std::atan2(N(2, 7), N(2, 6));
        p["beta"] = std::atan2(std::hypot(N(2, 6), N(2, 7)), N(4, 6));
    } else if (id == "R2.L10b") {
        p["lambda"] = N(0, 0);
        p["alpha"] = std::atan2(-N(3, 6), N(2, 6));
        p["beta"] = std::atan2(std::hypot(N(2, 6), N(3, 6)), N(4, 6));
        p["gamma"] = std::atan2(std::hypot(N(2, 7), N(3, 7)), N(5, 7));
    } else if (id == "R2.L11") {
        p["lambda1"] = N(0, 0);
        p["lambda2"] = N(2, 2);
        p["r"] = N(3, 2);
    } else if (id == "R2.L12") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
        p["lambda"] = N(2, 2);
    } else if (id == "R2.L13") {
        p["alpha1"] = N(0, 0);
        p["beta1"] = N(0, 1);
        p["alpha2"] = N(2, 2);
        p["beta2"] = std::abs(N(2, 3));
        p["z"] = N(2, 3) >= 0 ? 1.0 : -1.0;
    } else if (id == "R2.L14a") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
        p["gamma"] = wrap_2pi(std::atan2(N(0, 3), N(0, 2)));
    } else if (id == "R2.L14b") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
    } else if (id == "R2.L15a") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
        p["gamma"] = wrap_2pi(std::atan2(2 * N(2, 5), 2 * N(2, 4) - 1));
        p["r"] = N(0, 5);
    } else if (id == "R2.L15b") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
        p["r"] = N(0, 4);
    } else if (id == "R2.L16") {
        p["alpha"] = N(0, 0);
        p["beta"] = N(0, 1);
        double s2 = N(2, 6), c2 = -N(3, 7);
        if (s2 < 0 || c2 < 0) return std::nullopt;
        p["gamma"] = std::atan2(std::sqrt(s2), std::sqrt(c2));
        p["delta"] = std::atan2(N(4, 6), N(2, 7));
    } else {
        return std::nullopt;
    }
    return p;
}

// ---- validation ----

std::vector<std::string> domain_violations(const std::string& id, const Params& q) {
    std::vector<std::string> v;
    auto g = [&](const char* k) { return q.at(k); };
    auto need_pm1 = [&](const char* k) {
        if (!is_pm1(g(k))) v.push_back(std::string(k) + " in {-1,+1}");
    };
    auto need_open_0_pi = [&](const char* k) {
        if (!(strictly_less(0, g(k)) && strictly_less(g(k), kPi))) v.push_back(std::string("0 < ") + k + " < pi");
    };
    if (id == "R1.1") {
        if (!strictly_less(g("lambda1"), g("lambda2"))) v.push_back("lambda1 < lambda2");
    } else if (id == "R1.2" || id == "R2.L12" || id == "R2.L14a" || id == "R2.L14b" || id == "R2.L15a" ||
               id == "R2.L15b" || id == "R2.L16") {
        if (!strictly_less(0, g("beta"))) v.push_back("beta > 0");
        if (id == "R2.L14a") {
            if (!(g("gamma") >= -kBoundaryTol && strictly_less(g("gamma"), 2 * kPi)))
                v.push_back("0 <= gamma < 2*pi");
        }
        if (id == "R2.L15a") {
            if (!(g("gamma") >= -kBoundaryTol && strictly_less(g("gamma"), 2 * kPi)))
                v.push_back("0 <= gamma < 2*pi");
            if (std::abs(g("gamma") - kPi) <= kBoundaryTol) v.push_back("gamma != pi");
        }
        if (id == "R2.L16") {
            if (!(strictly_less(0, g("gamma")) && strictly_less(g("gamma"), kPi / 2)))
                v.push_back("0 < gamma < pi/2");
            if (!(strictly_less(0, g("delta")) && strictly_less(g("delta"), kPi)))
                v.push_back("0 < delta < pi");
        }
    } else if (id == "R1.3" || id == "R2.L1" || id == "R2.L3a" || id == "R2.L6c" || id == "R2.L7a") {
        need_pm1("z");
    } else if (id == "R1.6" || id == "R2.L6a" || id == "R2.L8b") {
        need_open_0_pi("alpha");
    } else if (id == "R2.L3b" || id == "R2.L6b") {
        if (!strictly_less(1, std::abs(g("r")))) v.push_back("|r| > 1");
        if (id == "R2.L3b") need_pm1("z");
    } else if (id == "R2.L4" || id == "R2.L7b") {
        if (!strictly_less(0, g("r"))) v.push_back("r > 0");
        need_pm1("z");
    } else if (id == "R2.L5a" || id == "R2.L8a") {
        if (!strictly_less(0, g("r"))) v.push_back("r > 0");
    } else if (id == "R2.L5b") {
        if (!strictly_less(0, g("r2"))) v.push_back("r2 > 0");
    } else if (id == "R2.L9") {
        need_open_0_pi("alpha");
        need_open_0_pi("beta");
    } else if (id == "R2.L10a") {
        need_open_0_pi("alpha");
        if (!(strictly_less(0, g("beta")) && strictly_less(g("beta"), kPi / 2))) v.push_back("0 < beta < pi/2");
    } else if (id == "R2.L10b") {
        need_open_0_pi("alpha");
        if (!(g("gamma") >= -kBoundaryTol && strictly_less(g("gamma"), g("beta")) &&
              strictly_less(g("beta"), kPi / 2)))
            v.push_back("0 <= gamma < beta < pi/2");
    } else if (id == "R2.L11") {
        if (std::abs(g("lambda1") - g("lambda2")) <= kBoundaryTol) v.push_back("lambda1 != lambda2");
        if (std::abs(g("r")) > kBoundaryTol && !strictly_less(g("lambda1"), g("lambda2")))
            v.push_back("lambda1 < lambda2 when r != 0");
    } else if (id == "R2.L13") {
        need_pm1("z");
        if (!strictly_less(0, g("beta1")) || !at_most(g("beta1"), g("beta2"))) v.push_back("0 < beta1 <= beta2");
        if (std::abs(g("beta1") - g("beta2")) <= kBoundaryTol && !strictly_less(g("alpha1"), g("alpha2")))
            v.push_back("alpha1 < alpha2 if beta1 = beta2");
    }
    return v;
}

std::vector<FamilyInfo> make_catalog() {
    std::vector<FamilyInfo> c;
    auto add = [&](FamilyInfo f) { c.push_back(std::move(f)); };
    using S = std::vector<std::string>;
    // ----- rank 1 (Theorem 1) -----
    add({"R1.1", 1, 2, BlockClass::TwoReal, 0, -1, false, false, "(1)", "(1)", S{"lambda1", "lambda2"},
         "lambda1 < lambda2"});
    add({"R1.2", 1, 2, BlockClass::SinglePair, 0, -1, false, false, "(2)", "(2)", S{"alpha", "beta"}, "beta > 0"});
    add({"R1.3", 1, 2, BlockClass::SingleReal, 1, -1, false, false, "(3)", "(3)", S{"lambda", "z"}, "z in {-1,+1}"});
    add({"R1.4", 1, 3, BlockClass::SingleReal, 1, -1, false, false, "(4)", "(4)", S{"lambda"}, "none"});
    add({"R1.5", 1, 3, BlockClass::SingleReal, 1, -1, false, false, "(5)", "(5)", S{"lambda", "r"}, "r real"});
    add({"R1.6", 1, 4, BlockClass::SingleReal, 1, -1, false, false, "(6)", "(6)", S{"lambda", "alpha"},
         "0 < alpha < pi"});
    // ----- rank 2 (Theorem 2) -----
    add({"R2.L1", 2, 4, BlockClass::SingleReal, 1, 0, true, false, "(9)", "(10)", S{"lambda", "z"}, "z in {-1,+1}"});
    add({"R2.L2a", 2, 5, BlockClass::SingleReal, 1, 0, true, false, "(11)", "(13)", S{"lambda"}, "none"});
    add({"R2.L2b", 2, 5, BlockClass::SingleReal, 1, 0, true, false, "(12)", "(13)", S{"lambda", "r1", "r2"},
         "r1, r2 real"});
    add({"R2.L3a", 2, 4, BlockClass::SingleReal, 1, 1, true, false, "(14)", "(16)", S{"lambda", "z"},
         "z in {-1,+1}"});
    add({"R2.L3b", 2, 4, BlockClass::SingleReal, 1, 1, true, false, "(15)", "(16)", S{"lambda", "z", "r"},
         "z in {-1,+1}, |r| > 1"});
    add({"R2.L4", 2, 5, BlockClass::SingleReal, 1, 1, true, false, "(17)", "(18)", S{"lambda", "z", "r"},
         "z in {-1,+1}, r > 0"});
    add({"R2.L5a", 2, 6, BlockClass::SingleReal, 1, 1, true, false, "(19)", "(21)", S{"lambda", "r"}, "r > 0"});
    add({"R2.L5b", 2, 6, BlockClass::SingleReal, 1, 1, true, false, "(20)", "(21)", S{"lambda", "r1", "r2"},
         "r2 > 0"});
    add({"R2.L6a", 2, 4, BlockClass::SingleReal, 2, -1, false, false, "(22)", "(26)", S{"lambda", "alpha"},
         "0 < alpha < pi"});
    add({"R2.L6b", 2, 4, BlockClass::SingleReal, 2, -1, false, false, "(23)", "(26)", S{"lambda", "r"}, "|r| > 1"});
    add({"R2.L6c", 2, 4, BlockClass::SingleReal, 2, -1, false, false, "(24)", "(26)", S{"lambda", "z"},
         "z in {-1,+1}"});
    add({"R2.L6d", 2, 4, BlockClass::SingleReal, 2, -1, false, false, "(25)", "(26)", S{"lambda"}, "none"});
    add({"R2.L7a", 2, 5, BlockClass::SingleReal, 2, -1, true, false, "(27)", "(29)", S{"lambda", "z"},
         "z in {-1,+1}"});
    add({"R2.L7b", 2, 5, BlockClass::SingleReal, 2, -1, true, false, "(28)", "(29)", S{"lambda", "z", "r"},
         "z in {-1,+1}, r > 0"});
    add({"R2.L8a", 2, 6, BlockClass::SingleReal, 2, -1, true, false, "(30)", "(32)", S{"lambda", "r"}, "r > 0"});
    add({"R2.L8b", 2, 6, BlockClass::SingleReal, 2, -1, true, false, "(31)", "(32)", S{"lambda", "r", "alpha"},
         "0 < alpha < pi"});
    add({"R2.L9", 2, 7, BlockClass::SingleReal, 2, -1, true, false, "(33)", "(34)", S{"lambda", "alpha", "beta"},
         "0 < alpha < pi, 0 < beta < pi"});
    add({"R2.L10a", 2, 8, BlockClass::SingleReal, 2, -1, true, false, "(35)", "(37)", S{"lambda", "alpha", "beta"},
         "0 < alpha < pi, 0 < beta < pi/2"});
    add({"R2.L10b", 2, 8, BlockClass::SingleReal, 2, -1, true, false, "(36)", "(37)",
         S{"lambda", "alpha", "beta", "gamma"}, "0 < alpha < pi, 0 <= gamma < beta < pi/2"});
    add({"R2.L11", 2, 4, BlockClass::TwoReal, 0, -1, true, false, "(38)", "(39)", S{"lambda1", "lambda2", "r"},
         "lambda1 < lambda2 when r != 0"});
    add({"R2.L12", 2, 4, BlockClass::RealPlusPair, 0, -1, false, false, "(40)", "(41)",
         S{"lambda", "alpha", "beta"}, "beta > 0"});
    add({"R2.L13", 2, 4, BlockClass::TwoPairs, 0, -1, false, false, "(42)", "(43)",
         S{"alpha1", "beta1", "alpha2", "beta2", "z"},
         "0 < beta1 <= beta2, alpha1 < alpha2 if beta1 = beta2, z in {-1,+1}"});
    add({"R2.L14a", 2, 4, BlockClass::SinglePair, 2, -1, false, false, "(44)", "(46)",
         S{"alpha", "beta", "gamma"}, "beta > 0, 0 <= gamma < 2*pi"});
    add({"R2.L14b", 2, 4, BlockClass::SinglePair, 2, -1, false, false, "(45)", "(46)", S{"alpha", "beta"},
         "beta > 0"});
    add({"R2.L15a", 2, 6, BlockClass::SinglePair, 2, -1, false, true, "(47)", "(49)",
         S{"alpha", "beta", "gamma", "r"}, "beta > 0, 0 <= gamma < 2*pi, gamma != pi, r real (unnormalized)"});
    add({"R2.L15b", 2, 6, BlockClass::SinglePair, 2, -1, false, true, "(48)", "(49)", S{"alpha", "beta", "r"},
         "beta > 0, r real (unnormalized)"});
    add({"R2.L16", 2, 8, BlockClass::SinglePair, 2, -1, false, false, "(50)", "(51)",
         S{"alpha", "beta", "gamma", "delta"}, "beta > 0, 0 < gamma < pi/2, 0 < delta < pi"});
    return c;
}

}  // namespace

const std::vector<FamilyInfo>& catalog() {
    static const std::vector<FamilyInfo> table = make_catalog();
    return table;
}

const FamilyInfo& family_info(const std::string& id) {
    for (const auto& f : catalog())
        if (f.id == id) return f;
    throw std::out_of_range("unknown canonical family: " + id);
}

std::vector<std::string> validate_params(const std::string& id, const Params& p) {
    const auto& info = family_info(id);
    std::vector<std::string> v;
    for (const auto& name : info.param_names)
        if (p.find(name) == p.end()) v.push_back("missing parameter " + name);
    if (!v.empty()) return v;
    auto dv = domain_violations(id, p);
    v.insert(v.end(), dv.begin(), dv.end());
    return v;
}

OperatorPair construct(const std::string& id, const Params& p, const TolerancePolicy& tol) {
    auto v = validate_params(id, p);
    if (!v.empty()) throw ParameterDomainViolation(std::move(v));
    return OperatorPair(build_N(id, p), build_H(id), tol);
}

std::vector<std::string> families_for(int n, int rank, BlockClass cls) {
    std::vector<std::string> out;
    for (const auto& f : catalog())
        if (f.n == n && f.rank == rank && f.cls == cls) out.push_back(f.id);
    return out;
}

std::optional<std::pair<std::string, Params>> recognize(const OperatorPair& pair, const TolerancePolicy& tol) {
    const int n = pair.dim();
    const double scale = 1.0 + pair.N().norm();
    const double atol = tol.eig_cluster_rel * scale;
    for (const auto& f : catalog()) {
        if (f.n != n) continue;
        Mat H = build_H(f.id);
        if ((pair.H() - H).norm() > atol) continue;
        auto p = read_params(f.id, pair.N());
        if (!p) continue;
        if (!validate_params(f.id, *p).empty()) continue;
        Mat Nc = build_N(f.id, *p);
        if ((pair.N() - Nc).norm() > atol) continue;
        // snap discrete parameters exactly
        for (auto& [k, val] : *p)
            if (k == "z") val = snap_pm1(val);
        return std::make_pair(f.id, *p);
    }
    return std::nullopt;
}

}  // namespace krein
