// BPSK over AWGN with soft output.
//
// Eb/N0 is normalized by the effective rate (K + rnti_len)/N, since the RNTI
// positions carry information in this scheme.
#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "polarbd/construction.hpp"

namespace polarbd {

struct ChannelConfig {
    double snr_db = 0.0;   // Eb/N0 in dB
    double rate = 0.5;     // effective rate used for Eb normalization
    std::uint64_t seed = 0;

    double noise_variance() const {
        if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must be in (0,1]");
        return 1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0));
    }
};

// Maps bit b to symbol 1-2b, adds N(0, sigma^2) noise and returns
// LLR_i = 2 r_i / sigma^2 (positive favours bit 0).
inline LlrVec transmit(const Codeword& cw, const ChannelConfig& cfg, std::mt19937_64& rng) {
    const double nvar = cfg.noise_variance();
    const double nstd = std::sqrt(nvar);
    std::normal_distribution<double> gauss(0.0, 1.0);
    LlrVec llr(cw.bits.size());
    for (std::size_t i = 0; i < cw.bits.size(); ++i) {
        const double sym = 1.0 - 2.0 * cw.bits[i];
        const double r = sym + nstd * gauss(rng);
        llr[i] = 2.0 * r / nvar;
    }
    return llr;
}

// Noise-free soft values for loopback tests: sign carries the bit, the
// magnitude is large enough that min-sum decoding is exact.
inline LlrVec noiseless_llrs(const Codeword& cw, double magnitude = 100.0) {
    LlrVec llr(cw.bits.size());
    for (std::size_t i = 0; i < cw.bits.size(); ++i)
        llr[i] = (1.0 - 2.0 * cw.bits[i]) * magnitude;
    return llr;
}

}  // namespace polarbd
