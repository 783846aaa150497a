#include "krein/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

namespace {

std::vector<SpectralIndex> make_indices(const SpectrumPartition& part) {
    std::vector<SpectralIndex> idx;
    for (const auto& r : part.real_eigs) {
        SpectralIndex s;
        s.real = true;
        s.lambda = r.lambda;
        s.multiplicity = r.multiplicity;
        idx.push_back(s);
    }
    for (const auto& c : part.complex_pairs) {
        SpectralIndex s;
        s.real = false;
        s.alpha = c.alpha;
        s.beta = c.beta;
        s.multiplicity = 2 * c.multiplicity;
        idx.push_back(s);
    }
    return idx;
}

// Orthonormal basis of the joint span of two subspace bases.
Mat join_span(const Mat& A, const Mat& B, const TolerancePolicy& tol) {
    Mat C(A.rows(), A.cols() + B.cols());
    if (A.cols() > 0) C.leftCols(A.cols()) = A;
    if (B.cols() > 0) C.rightCols(B.cols()) = B;
    return orth(C, tol);
}

BlockClass classify_block(const std::vector<SpectralIndex>& indices, const std::vector<int>& ids) {
    if (ids.size() == 1) return indices[ids[0]].real ? BlockClass::SingleReal : BlockClass::SinglePair;
    bool r0 = indices[ids[0]].real;
    bool r1 = indices[ids[1]].real;
    if (r0 && r1) return BlockClass::TwoReal;
    if (!r0 && !r1) return BlockClass::TwoPairs;
    return BlockClass::RealPlusPair;
}

}  // namespace

Mat annihilator_power(const Mat& N, const SpectralIndex& idx, int power) {
    const int n = static_cast<int>(N.rows());
    Mat factor;
    if (idx.real) {
        factor = N - idx.lambda * Mat::Identity(n, n);
    } else {
        factor = N * N - 2.0 * idx.alpha * N + (idx.alpha * idx.alpha + idx.beta * idx.beta) * Mat::Identity(n, n);
    }
    // scale the zero test to the natural size of the factor; a semisimple
    // eigenvalue of full multiplicity makes the very first factor vanish
    double nn = N.norm();
    double fscale = idx.real ? nn + std::abs(idx.lambda) + 1
                             : nn * nn + 2 * std::abs(idx.alpha) * nn +
                                   idx.alpha * idx.alpha + idx.beta * idx.beta + 1;
    double fn = factor.norm();
    if (fn <= 1e-12 * fscale) return Mat::Zero(n, n);
    factor /= fn;
    Mat P = factor;
    for (int i = 1; i < power; ++i) {
        Mat Q = P * factor;
        double qn = Q.norm();
        // the product collapsed: this power annihilates the whole space,
        // and renormalizing would only amplify rounding noise
        if (qn <= 1e-12 * P.norm()) return Mat::Zero(n, n);
        P = Q / qn;
    }
    return P;
}

SubspaceBasis q_subspace(const OperatorPair& pair, const std::vector<SpectralIndex>& indices, int j, int k,
                         const TolerancePolicy& tol) {
    const int n = pair.dim();
    Mat Nadj = h_adjoint(pair.N(), pair.H(), tol);
    // m applications suffice for an index of multiplicity m; one spare
    // power guards against a cluster that merged close eigenvalues.
    int pj = std::min(n, indices[j].multiplicity + (indices[j].real ? 1 : 0));
    int pk = std::min(n, indices[k].multiplicity + (indices[k].real ? 1 : 0));
    Mat top = annihilator_power(pair.N(), indices[j], std::max(1, pj));
    Mat bot = annihilator_power(Nadj, indices[k], std::max(1, pk));
    Mat stacked(2 * n, n);
    stacked.topRows(n) = top;
    stacked.bottomRows(n) = bot;
    return kernel(stacked, tol);
}

Decomposition block_decompose(const OperatorPair& pair, const TolerancePolicy& tol) {
    auto normal = is_h_normal(pair, tol);
    if (!normal.ok) throw NotHNormal("block_decompose requires an H-normal pair", normal.residual);

    Decomposition dec;
    dec.indices = make_indices(real_spectrum(pair.N(), tol));
    const int m = static_cast<int>(dec.indices.size());
    const int n = pair.dim();

    // Q_jk for all ordered index pairs.
    std::vector<std::vector<Mat>> Q(m, std::vector<Mat>(m));
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) Q[j][k] = q_subspace(pair, dec.indices, j, k, tol).vectors;

    struct Candidate {
        std::vector<int> ids;
        Mat span;
    };
    std::vector<Candidate> cands;
    for (int j = 0; j < m; ++j)
        if (Q[j][j].cols() > 0) cands.push_back({{j}, orth(Q[j][j], tol)});
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
            Mat span = join_span(Q[j][k], Q[k][j], tol);
            if (span.cols() > 0) cands.push_back({{j, k}, span});
        }

    int total = 0;
    for (auto& c : cands) total += static_cast<int>(c.span.cols());
    if (total != n)
        throw DegenerateBlock("spectral subspaces do not fill the space; eigenvalue clusters may be unresolved");

    for (auto& c : cands) {
        const Mat& B = c.span;
        Mat G = B.transpose() * pair.H() * B;
        G = 0.5 * (G + G.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(G);
        double emax = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().cwiseAbs().minCoeff() <= tol.rank_rel * std::max(emax, 1e-300))
            throw DegenerateBlock("candidate summand is degenerate with respect to H");
        // H-orthonormalize: columns scaled so the Gram matrix is diag(+-1).
        Mat Bn = B * es.eigenvectors() * es.eigenvalues().cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
        Vec signs = es.eigenvalues().array().sign();
        Mat Gd = signs.asDiagonal();
        // Restriction of N: N B = B Nr, solve through the H-orthonormal frame:
        // Bn^T H N Bn = Gd Nr, so Nr = Gd (Bn^T H N Bn).
        Mat Nr = Gd * (Bn.transpose() * pair.H() * pair.N() * Bn);

        Block blk;
        blk.cls = classify_block(dec.indices, c.ids);
        blk.index_ids = c.ids;
        blk.basis = SubspaceBasis{Bn};
        blk.restricted_n = Nr;
        blk.restricted_h = Gd;
        dec.blocks.push_back(std::move(blk));
    }

    // deterministic ordering: by smallest participating index
    std::sort(dec.blocks.begin(), dec.blocks.end(),
              [](const Block& a, const Block& b) { return a.index_ids < b.index_ids; });
    return dec;
}

DecompositionCheck verify_decomposition(const OperatorPair& pair, const Decomposition& dec,
                                        const TolerancePolicy& tol) {
    DecompositionCheck out;
    const int n = pair.dim();
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        out.failures.push_back(msg);
    };
    auto track = [&](double res, double bound, const std::string& msg) {
        out.max_residual = std::max(out.max_residual, res);
        if (res > bound) fail(msg + " (residual " + std::to_string(res) + ")");
    };

    int total = 0;
    for (const auto& b : dec.blocks) total += b.basis.dim();
    if (total != n) fail("block dimensions do not sum to the ambient dimension");

    const double nscale = 1.0 + pair.N().norm();
    const double hscale = 1.0 + pair.H().norm();
    Mat Nadj = h_adjoint(pair.N(), pair.H(), tol);

    for (size_t i = 0; i < dec.blocks.size(); ++i) {
        const auto& b = dec.blocks[i];
        const Mat& B = b.basis.vectors;

        // Gram matrix is the recorded sign matrix
        track((B.transpose() * pair.H() * B - b.restricted_h).norm(), tol.residual_abs * hscale * 100,
              "block " + std::to_string(i) + ": basis is not H-orthonormal");

        // pairwise H-orthogonality
        for (size_t j = i + 1; j < dec.blocks.size(); ++j)
            track((B.transpose() * pair.H() * dec.blocks[j].basis.vectors).norm(), tol.residual_abs * hscale * 100,
                  "blocks " + std::to_string(i) + "," + std::to_string(j) + ": not H-orthogonal");

        // invariance under N and N^[*]: the restriction reproduces the action
        track((pair.N() * B - B * b.restricted_n).norm(), tol.residual_abs * nscale * 100,
              "block " + std::to_string(i) + ": not N-invariant");
        Mat NadjR = b.restricted_h * b.restricted_n.transpose() * b.restricted_h;
        track((Nadj * B - B * NadjR).norm(), tol.residual_abs * nscale * 100,
              "block " + std::to_string(i) + ": not invariant under the H-adjoint");

        // restricted pair is H-normal
        OperatorPair rp(b.restricted_n, b.restricted_h, tol);
        auto hn = is_h_normal(rp, tol);
        track(hn.residual, tol.residual_abs * (1.0 + b.restricted_n.squaredNorm()) * 100,
              "block " + std::to_string(i) + ": restriction is not H-normal");

        // spectrum of the restriction matches the advertised indices
        auto part = real_spectrum(b.restricted_n, tol);
        int expected_real = 0, expected_cplx = 0;
        for (int id : b.index_ids) (dec.indices[id].real ? expected_real : expected_cplx)++;
        if (part.p() != expected_real || part.q() != expected_cplx) {
            fail("block " + std::to_string(i) + ": restricted spectrum shape mismatch");
        } else {
            double gap = tol.eig_cluster_rel * part.cluster_scale * 100;
            for (int id : b.index_ids) {
                const auto& sx = dec.indices[id];
                bool found = false;
                if (sx.real) {
                    for (auto& r : part.real_eigs) found |= std::abs(r.lambda - sx.lambda) <= gap;
                } else {
                    for (auto& c : part.complex_pairs)
                        found |= std::hypot(c.alpha - sx.alpha, c.beta - sx.beta) <= gap;
                }
                if (!found) fail("block " + std::to_string(i) + ": advertised eigenvalue missing from restriction");
            }
        }
    }
    return out;
}

}  // namespace krein
