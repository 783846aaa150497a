#include "krein/classify.hpp"

#include "krein/core.hpp"
#include "krein/rank2.hpp"

namespace krein {

namespace {

Signature restricted_signature(const Mat& h_diag) {
    Signature s;
    for (int i = 0; i < h_diag.rows(); ++i) (h_diag(i, i) < 0 ? s.v_minus : s.v_plus)++;
    return s;
}

BlockReport classify_block(const Block& block, int index, const TolerancePolicy& tol) {
    BlockReport rep;
    rep.index = index;
    rep.cls = block.cls;
    rep.n = static_cast<int>(block.restricted_n.rows());
    rep.sig = restricted_signature(block.restricted_h);
    rep.rank = rep.sig.rank();

    if (rep.rank == 0) {
        // Definite restricted product: the block is a plain normal operator,
        // orthogonally diagonalizable into eigenlines and rotation planes.
        rep.status = BlockStatus::Definite;
        int sign = block.restricted_h(0, 0) < 0 ? -1 : 1;
        auto sp = real_spectrum(block.restricted_n, tol);
        for (const auto& re : sp.real_eigs)
            rep.definite_pieces.push_back({true, re.lambda, 0, 0, re.multiplicity, sign});
        for (const auto& cp : sp.complex_pairs)
            rep.definite_pieces.push_back({false, 0, cp.alpha, cp.beta, cp.multiplicity, sign});
        return rep;
    }

    if (rep.rank >= 3) {
        rep.status = BlockStatus::OutOfScope;
        rep.message = "space rank " + std::to_string(rep.rank) +
                      ": the canonical-form theorems cover ranks 1 and 2 only";
        return rep;
    }

    OperatorPair restricted(block.restricted_n, block.restricted_h, tol);
    try {
        rep.classification =
            rep.rank == 1 ? classify_rank1(restricted, tol) : classify_rank2(restricted, tol);
        rep.status = BlockStatus::Classified;
    } catch (const DecomposableInput& e) {
        rep.status = BlockStatus::OutOfScope;
        rep.message = std::string("decomposable within a single spectral class (") + e.what() +
                      "); finer reduction is outside the theorems";
    } catch (const DimensionOutOfTheorem& e) {
        rep.status = BlockStatus::OutOfScope;
        rep.message = std::string("dimension outside the theorem bounds: ") + e.what();
    } catch (const DeferredUnresolved& e) {
        rep.status = BlockStatus::Unresolved;
        rep.message = e.what();
    } catch (const AmbiguousFit& e) {
        rep.status = BlockStatus::Unresolved;
        rep.message = e.what();
    }
    return rep;
}

}  // namespace

bool ClassifyReport::all_classified() const {
    for (const auto& b : blocks)
        if (b.status != BlockStatus::Classified && b.status != BlockStatus::Definite) return false;
    return true;
}

ClassifyReport classify_pair(const OperatorPair& pair, const TolerancePolicy& tol) {
    ClassifyReport rep;
    rep.n = pair.dim();
    rep.sig = pair.signature();
    rep.h_negated = pair.h_negated();
    if (rep.h_negated)
        rep.warnings.push_back(
            "H was negated on input to enforce v- <= v+; parameters refer to the flipped product");

    rep.decomposition = block_decompose(pair, tol);
    rep.check = verify_decomposition(pair, rep.decomposition, tol);
    if (!rep.check.ok)
        for (const auto& f : rep.check.failures)
            rep.warnings.push_back("decomposition verification: " + f);

    int idx = 0;
    for (const auto& block : rep.decomposition.blocks) {
        rep.blocks.push_back(classify_block(block, idx++, tol));
        for (const auto& w :
             rep.blocks.back().classification ? rep.blocks.back().classification->warnings
                                              : std::vector<std::string>{})
            rep.warnings.push_back("block " + std::to_string(idx - 1) + ": " + w);
    }
    return rep;
}

}  // namespace krein
