#include "krein/schur.hpp"

#include <cmath>

namespace krein {
namespace {

// Householder reduction to upper Hessenberg form, in place.
void to_hessenberg(Mat& A) {
    const int n = static_cast<int>(A.rows());
    for (int k = 0; k < n - 2; ++k) {
        Vec x = A.col(k).segment(k + 1, n - k - 1);
        double xnorm = x.norm();
        if (xnorm == 0.0) continue;
        Vec v = x;
        v(0) += (x(0) >= 0 ? xnorm : -xnorm);
        double vnorm = v.norm();
        if (vnorm == 0.0) continue;
        v /= vnorm;
        auto rows = A.block(k + 1, 0, n - k - 1, n);
        rows -= 2.0 * v * (v.transpose() * rows);
        auto cols = A.block(0, k + 1, n, n - k - 1);
        cols -= 2.0 * (cols * v) * v.transpose();
    }
}

// One Francis double-shift sweep on the active block [lo, hi] of H,
// with shift polynomial x^2 - s x + t.
void francis_sweep(Mat& H, int lo, int hi, double s, double t) {
    const int n = static_cast<int>(H.rows());
    double x = H(lo, lo) * H(lo, lo) + H(lo, lo + 1) * H(lo + 1, lo) - s * H(lo, lo) + t;
    double y = H(lo + 1, lo) * (H(lo, lo) + H(lo + 1, lo + 1) - s);
    double z = (lo + 2 <= hi) ? H(lo + 2, lo + 1) * H(lo + 1, lo) : 0.0;

    for (int k = lo; k <= hi - 1; ++k) {
        Eigen::Vector3d v(x, y, z);
        int m = (k + 2 <= hi) ? 3 : 2;
        Vec u = v.head(m);
        double unorm = u.norm();
        if (unorm > 0.0) {
            Vec w = u;
            w(0) += (u(0) >= 0 ? unorm : -unorm);
            double wnorm = w.norm();
            if (wnorm > 0.0) {
                w /= wnorm;
                int c0 = std::max(lo, k - 1);
                auto rows = H.block(k, c0, m, n - c0);
                rows -= 2.0 * w * (w.transpose() * rows);
                int rlim = std::min(hi, k + 3);
                auto cols = H.block(0, k, rlim + 1, m);
                cols -= 2.0 * (cols * w) * w.transpose();
            }
        }
        if (k < hi - 1) {
            x = H(k + 1, k);
            y = H(k + 2, k);
            z = (k + 3 <= hi) ? H(k + 3, k) : 0.0;
        }
    }
}

void eig2x2(double a, double b, double c, double d, std::vector<std::complex<double>>& out) {
    double tr = a + d;
    double det = a * d - b * c;
    double disc = tr * tr / 4.0 - det;
    if (disc >= 0) {
        double root = std::sqrt(disc);
        out.emplace_back(tr / 2.0 + root, 0.0);
        out.emplace_back(tr / 2.0 - root, 0.0);
    } else {
        double im = std::sqrt(-disc);
        out.emplace_back(tr / 2.0, im);
        out.emplace_back(tr / 2.0, -im);
    }
}

}  // namespace

std::vector<std::complex<double>> schur_eigenvalues(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<std::complex<double>> eigs;
    if (n == 0) return eigs;
    if (n == 1) {
        eigs.emplace_back(A(0, 0), 0.0);
        return eigs;
    }

    // Symmetric input: the double-shift iteration can cycle on involution-like
    // matrices (paired eigenvalues +-c), while the self-adjoint solver is exact.
    const double anorm = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(anorm, 1.0)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        for (int i = 0; i < n; ++i) eigs.emplace_back(es.eigenvalues()(i), 0.0);
        return eigs;
    }

    Mat H = A;
    to_hessenberg(H);
    const double eps = std::numeric_limits<double>::epsilon();
    const double hnorm = std::max(H.cwiseAbs().maxCoeff(), 1e-300);

    int hi = n - 1;
    int iter_budget = 80 * n;
    int block_iters = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eigs.emplace_back(H(0, 0), 0.0);
            break;
        }
        // find the start of the active unreduced block
        int lo = hi;
        while (lo > 0) {
            double sub = std::abs(H(lo, lo - 1));
            double scale = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
            if (scale == 0.0) scale = hnorm;
            if (sub <= eps * scale) {
                H(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eigs.emplace_back(H(hi, hi), 0.0);
            --hi;
            block_iters = 0;
            continue;
        }
        if (lo == hi - 1) {
            eig2x2(H(lo, lo), H(lo, hi), H(hi, lo), H(hi, hi), eigs);
            hi -= 2;
            block_iters = 0;
            continue;
        }
        if (--iter_budget < 0) {
            // Rare stall (shift cycling). Finish the remaining unreduced part
            // with the library solver rather than failing.
            Eigen::EigenSolver<Mat> es(H.topLeftCorner(hi + 1, hi + 1));
            for (int i = 0; i <= hi; ++i) eigs.push_back(es.eigenvalues()(i));
            return eigs;
        }
        double s = H(hi - 1, hi - 1) + H(hi, hi);
        double t = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
        if (++block_iters % 10 == 0) {
            // exceptional shifts to break symmetric cycles
            double w = std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2));
            s = 2.0 * (H(hi, hi) + 0.75 * w);
            t = (s / 2.0) * (s / 2.0) - 0.4375 * w * w;
        }
        francis_sweep(H, lo, hi, s, t);
    }
    return eigs;
}

}  // namespace krein
