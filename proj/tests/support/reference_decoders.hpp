// Independent reference implementations used only by tests.
//
// These deliberately avoid the tree recursion of the library decoders: each
// leaf LLR is evaluated straight-line from the channel vector, level by
// level, with left-sibling partial sums re-encoded on the spot. Slow, but
// direct transcriptions of the decoding definitions.
#pragma once

#include <cstdint>
#include <vector>

#include "polarbd/construction.hpp"
#include "polarbd/sc_decoder.hpp"
#include "polarbd/scl_decoder.hpp"

namespace polarbd::testsupport {

// LLR of leaf `i` given channel LLRs `y` and already-decided bits u[0..i).
inline double reference_leaf_llr(const LlrVec& y, const BitVec& u, int i) {
    std::vector<double> cur(y.begin(), y.end());
    int base = 0;
    for (int half = static_cast<int>(y.size()) / 2; half >= 1; half /= 2) {
        const bool right = (i & half) != 0;
        if (!right) {
            for (int j = 0; j < half; ++j) cur[static_cast<std::size_t>(j)] =
                f_op(cur[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j + half)]);
        } else {
            BitVec beta(u.begin() + base, u.begin() + base + half);
            polar_transform(beta);
            for (int j = 0; j < half; ++j) cur[static_cast<std::size_t>(j)] =
                g_op(cur[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j + half)],
                     beta[static_cast<std::size_t>(j)]);
            base += half;
        }
        cur.resize(static_cast<std::size_t>(half));
    }
    return cur[0];
}

struct ReferenceScResult {
    BitVec u_hat;
    double last_leaf_llr = 0.0;
};

inline ReferenceScResult reference_sc_decode(const PolarCodeSpec& spec, const LlrVec& y) {
    ReferenceScResult res;
    res.u_hat.assign(static_cast<std::size_t>(spec.n_len), 0);
    for (int i = 0; i < spec.n_len; ++i) {
        const double a = reference_leaf_llr(y, res.u_hat, i);
        res.last_leaf_llr = a;
        const bool frozen = spec.role[static_cast<std::size_t>(i)] == PolarCodeSpec::Role::Frozen;
        res.u_hat[static_cast<std::size_t>(i)] = (frozen || a >= 0.0) ? 0 : 1;
    }
    return res;
}

// Accumulated path-metric penalty of forcing the decoder along the full
// input word `u`.
inline double forced_path_metric(const LlrVec& y, const BitVec& u) {
    double pm = 0.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        const double a = reference_leaf_llr(y, u, i);
        pm = pm_update(pm, a, u[static_cast<std::size_t>(i)]);
    }
    return pm;
}

// Exhaustive minimum-penalty input word over all unfrozen-bit assignments.
inline std::pair<BitVec, double> exhaustive_ml_word(const PolarCodeSpec& spec, const LlrVec& y) {
    std::vector<int> free_positions;
    for (int i = 0; i < spec.n_len; ++i)
        if (spec.role[static_cast<std::size_t>(i)] != PolarCodeSpec::Role::Frozen)
            free_positions.push_back(i);
    BitVec best;
    double best_pm = 0.0;
    const std::uint64_t count = 1ull << free_positions.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        BitVec u(static_cast<std::size_t>(spec.n_len), 0);
        for (std::size_t b = 0; b < free_positions.size(); ++b)
            u[static_cast<std::size_t>(free_positions[b])] = static_cast<std::uint8_t>((mask >> b) & 1u);
        const double pm = forced_path_metric(y, u);
        if (best.empty() || pm < best_pm) {
            best = u;
            best_pm = pm;
        }
    }
    return {best, best_pm};
}

// Bhattacharyya parameter of a single bit-channel, by its index digits.
inline double reference_bhattacharyya(int index, int n_stages, double design_param) {
    double z = design_param;
    for (int b = 0; b < n_stages; ++b)
        z = ((index >> b) & 1) ? z * z : 2.0 * z - z * z;
    return z;
}

}  // namespace polarbd::testsupport
