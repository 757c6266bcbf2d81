// Successive-cancellation decoding over the binary code tree.
//
// Message passing per node: receive alpha, send alpha_l, receive beta_l,
// send alpha_r, receive beta_r, send beta. Left messages use the min-sum
// check update, right messages the sign-adjusted sum.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polarbd/construction.hpp"

namespace polarbd {

inline double f_op(double a, double b) {
    const double mag = std::min(std::abs(a), std::abs(b));
    const bool neg = (a < 0.0) != (b < 0.0);
    return neg ? -mag : mag;
}

inline double g_op(double a, double b, std::uint8_t beta_l) {
    return b + (beta_l ? -a : a);
}

inline BitVec combine(const BitVec& beta_l, const BitVec& beta_r) {
    if (beta_l.size() != beta_r.size()) throw std::invalid_argument("combine: half lengths differ");
    BitVec beta(beta_l.size() * 2);
    for (std::size_t i = 0; i < beta_l.size(); ++i) {
        beta[i] = (beta_l[i] ^ beta_r[i]) & 1u;
        beta[beta_l.size() + i] = beta_r[i] & 1u;
    }
    return beta;
}

struct ScResult {
    BitVec u_hat;          // all N estimated input bits; frozen positions are 0
    BitVec rnti_hat;       // bits read back from the RNTI positions
    double pm = 0.0;       // |leaf LLR of the last estimated bit|
    double last_leaf_llr = 0.0;
};

namespace detail {

// Depth-first SC sweep. Child alpha buffers are preallocated per depth; the
// right child reuses its level's buffer after the left subtree returns.
class ScEngine {
public:
    ScEngine(const PolarCodeSpec& spec, const LlrVec& y)
        : spec_(spec), u_hat_(y.size(), 0), beta_(y.size(), 0) {
        level_.resize(static_cast<std::size_t>(spec.n_stages));
        for (int d = 0; d < spec.n_stages; ++d)
            level_[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(spec.n_len >> (d + 1)));
        decode_node(y.data(), spec.n_len, 0, 0, beta_.data());
    }

    BitVec take_u_hat() { return std::move(u_hat_); }
    double last_leaf_llr() const { return last_leaf_llr_; }

private:
    void decode_node(const double* alpha, int len, int depth, int leaf_base, std::uint8_t* beta_out) {
        if (len == 1) {
            last_leaf_llr_ = alpha[0];
            const bool frozen = spec_.role[static_cast<std::size_t>(leaf_base)] == PolarCodeSpec::Role::Frozen;
            const std::uint8_t bit = (frozen || alpha[0] >= 0.0) ? 0 : 1;
            u_hat_[static_cast<std::size_t>(leaf_base)] = bit;
            beta_out[0] = bit;
            return;
        }
        const int half = len / 2;
        double* child = level_[static_cast<std::size_t>(depth)].data();

        for (int i = 0; i < half; ++i) child[i] = f_op(alpha[i], alpha[i + half]);
        decode_node(child, half, depth + 1, leaf_base, beta_out);

        for (int i = 0; i < half; ++i) child[i] = g_op(alpha[i], alpha[i + half], beta_out[i]);
        decode_node(child, half, depth + 1, leaf_base + half, beta_out + half);

        for (int i = 0; i < half; ++i) beta_out[i] ^= beta_out[half + i];
    }

    const PolarCodeSpec& spec_;
    std::vector<LlrVec> level_;
    BitVec u_hat_;
    BitVec beta_;
    double last_leaf_llr_ = 0.0;
};

}  // namespace detail

inline ScResult sc_decode(const PolarCodeSpec& spec, const LlrVec& y) {
    if (static_cast<int>(y.size()) != spec.n_len)
        throw std::invalid_argument("LLR vector length does not match N");
    detail::ScEngine engine(spec, y);
    ScResult res;
    res.u_hat = engine.take_u_hat();
    res.rnti_hat = extract_rnti(spec, res.u_hat);
    res.last_leaf_llr = engine.last_leaf_llr();
    res.pm = std::abs(res.last_leaf_llr);
    return res;
}

}  // namespace polarbd
