// LLR-based successive-cancellation list decoding with path-metric pruning
// and an optional RNTI early-stopping criterion.
//
// Each path owns flat per-level LLR and partial-sum arrays (levels 1..n;
// level 0 is the shared channel vector). Forks clone the parent state; when
// only one child of a parent survives pruning the parent state is reused.
//
// Early stopping: at every RNTI-position leaf, after the PM prune, a
// surviving path is deactivated when its channel estimate of that leaf (the
// hard decision on the leaf LLR it forked under) differs from the UE RNTI
// bit. Decoding stops once no path remains active. Keying the deactivation
// to the leaf-LLR estimate rather than the forked bit value is what lets a
// list decoder abandon a non-matching candidate: the forked children of one
// parent otherwise always include a bit that agrees with the UE RNTI.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polarbd/construction.hpp"
#include "polarbd/sc_decoder.hpp"

namespace polarbd {

// Path-metric step: no penalty when the estimate follows the LLR sign
// (sgn(0) counts as +), otherwise add |llr|.
inline double pm_update(double pm_prev, double llr, std::uint8_t u_hat) {
    const std::uint8_t hard = (llr >= 0.0) ? 0 : 1;
    return (u_hat == hard) ? pm_prev : pm_prev + std::abs(llr);
}

struct DecodePath {
    BitVec u_hat;
    double pm = 0.0;
    bool active = true;
};

struct SclResult {
    std::vector<DecodePath> paths;          // completed paths, ascending pm
    bool stopped_early = false;
    int bits_estimated = 0;                 // leaf estimation steps executed
    std::optional<int> rnti_match_path;     // index into `paths` of the best UE-RNTI match
};

namespace detail {

class SclEngine {
public:
    SclEngine(const PolarCodeSpec& spec, const LlrVec& y, int list_size)
        : spec_(spec), y_(y), n_(spec.n_stages), n_len_(spec.n_len), list_size_(list_size) {
        llr_off_.assign(static_cast<std::size_t>(n_ + 1), 0);
        bit_off_.assign(static_cast<std::size_t>(n_ + 1), 0);
        int lo = 0, bo = 0;
        for (int lam = 1; lam <= n_; ++lam) {
            llr_off_[static_cast<std::size_t>(lam)] = lo;
            bit_off_[static_cast<std::size_t>(lam)] = bo;
            lo += n_len_ >> lam;
            bo += 2 * (n_len_ >> lam);
        }
        llr_total_ = lo;
        bit_total_ = bo;
    }

    struct Path {
        LlrVec llr;    // levels 1..n concatenated
        BitVec bits;   // levels 1..n, two columns per level
        BitVec u_hat;
        double pm = 0.0;
        std::uint8_t leaf_est = 0;  // hard decision at the last forked leaf
    };

    SclResult run(const std::optional<BitVec>& ue_rnti, bool early_stop) {
        paths_.clear();
        paths_.push_back(make_path());

        SclResult res;
        for (int leaf = 0; leaf < n_len_; ++leaf) {
            for (auto& p : paths_) calc_llr(p, n_, leaf);

            const auto role = spec_.role[static_cast<std::size_t>(leaf)];
            if (role == PolarCodeSpec::Role::Frozen) {
                for (auto& p : paths_) {
                    const double a = leaf_llr(p);
                    p.pm = pm_update(p.pm, a, 0);
                    set_leaf_bit(p, leaf, 0);
                }
            } else {
                fork_and_prune(leaf);
                if (early_stop && role == PolarCodeSpec::Role::Rnti) {
                    const std::uint8_t want =
                        (*ue_rnti)[static_cast<std::size_t>(spec_.rnti_bit[static_cast<std::size_t>(leaf)])] & 1u;
                    std::erase_if(paths_, [want](const Path& p) { return p.leaf_est != want; });
                    if (paths_.empty()) {
                        res.stopped_early = true;
                        res.bits_estimated = leaf + 1;
                        return res;
                    }
                }
            }
            if (leaf & 1)
                for (auto& p : paths_) update_bits(p, n_, leaf);
        }
        res.bits_estimated = n_len_;

        res.paths.reserve(paths_.size());
        for (auto& p : paths_) res.paths.push_back(DecodePath{std::move(p.u_hat), p.pm, true});
        std::stable_sort(res.paths.begin(), res.paths.end(),
                         [](const DecodePath& a, const DecodePath& b) { return a.pm < b.pm; });
        if (ue_rnti) {
            for (std::size_t i = 0; i < res.paths.size(); ++i) {
                if (extract_rnti(spec_, res.paths[i].u_hat) == *ue_rnti) {
                    res.rnti_match_path = static_cast<int>(i);
                    break;
                }
            }
        }
        return res;
    }

private:
    Path make_path() const {
        Path p;
        p.llr.assign(static_cast<std::size_t>(llr_total_), 0.0);
        p.bits.assign(static_cast<std::size_t>(bit_total_), 0);
        p.u_hat.assign(static_cast<std::size_t>(n_len_), 0);
        return p;
    }

    double& leaf_llr(Path& p) { return p.llr[static_cast<std::size_t>(llr_off_[static_cast<std::size_t>(n_)])]; }

    void set_leaf_bit(Path& p, int leaf, std::uint8_t bit) {
        p.bits[static_cast<std::size_t>(bit_off_[static_cast<std::size_t>(n_)] + (leaf & 1))] = bit;
        p.u_hat[static_cast<std::size_t>(leaf)] = bit;
    }

    // Refresh the level-`lam` LLRs of path `p` for phase `phase` at that level.
    void calc_llr(Path& p, int lam, int phase) {
        if ((phase & 1) == 0 && lam > 1) calc_llr(p, lam - 1, phase >> 1);
        const int m = n_len_ >> lam;
        const double* par = (lam == 1) ? y_.data()
                                       : p.llr.data() + llr_off_[static_cast<std::size_t>(lam - 1)];
        double* dst = p.llr.data() + llr_off_[static_cast<std::size_t>(lam)];
        if ((phase & 1) == 0) {
            for (int i = 0; i < m; ++i) dst[i] = f_op(par[i], par[i + m]);
        } else {
            const std::uint8_t* left = p.bits.data() + bit_off_[static_cast<std::size_t>(lam)];
            for (int i = 0; i < m; ++i) dst[i] = g_op(par[i], par[i + m], left[i]);
        }
    }

    // Propagate partial sums upward after an odd phase completes level `lam`.
    void update_bits(Path& p, int lam, int phase) {
        if (lam <= 1) return;  // level-0 sums are never read
        const int m = n_len_ >> lam;
        const int psi = phase >> 1;
        const std::uint8_t* l = p.bits.data() + bit_off_[static_cast<std::size_t>(lam)];
        const std::uint8_t* r = l + m;
        std::uint8_t* dst = p.bits.data() + bit_off_[static_cast<std::size_t>(lam - 1)] + (psi & 1) * 2 * m;
        for (int i = 0; i < m; ++i) {
            dst[i] = (l[i] ^ r[i]) & 1u;
            dst[m + i] = r[i] & 1u;
        }
        if (psi & 1) update_bits(p, lam - 1, psi);
    }

    void fork_and_prune(int leaf) {
        struct Child {
            double pm;
            int parent;
            std::uint8_t bit;
            std::uint8_t est;
        };
        std::vector<Child> children;
        children.reserve(paths_.size() * 2);
        for (std::size_t pi = 0; pi < paths_.size(); ++pi) {
            const double a = leaf_llr(paths_[pi]);
            const std::uint8_t est = (a >= 0.0) ? 0 : 1;
            children.push_back({pm_update(paths_[pi].pm, a, 0), static_cast<int>(pi), 0, est});
            children.push_back({pm_update(paths_[pi].pm, a, 1), static_cast<int>(pi), 1, est});
        }
        if (static_cast<int>(children.size()) > list_size_) {
            // stable sort keeps (parent index, bit value) order among equal
            // metrics, so ties resolve to the lower path index and bit 0
            std::stable_sort(children.begin(), children.end(),
                             [](const Child& a, const Child& b) { return a.pm < b.pm; });
            children.resize(static_cast<std::size_t>(list_size_));
            std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
                return a.parent != b.parent ? a.parent < b.parent : a.bit < b.bit;
            });
        }

        std::vector<Path> next;
        next.reserve(children.size());
        for (std::size_t ci = 0; ci < children.size(); ++ci) {
            const Child& c = children[ci];
            const bool sibling_follows =
                ci + 1 < children.size() && children[ci + 1].parent == c.parent;
            Path np = sibling_follows ? paths_[static_cast<std::size_t>(c.parent)]
                                      : std::move(paths_[static_cast<std::size_t>(c.parent)]);
            np.pm = c.pm;
            np.leaf_est = c.est;
            set_leaf_bit(np, leaf, c.bit);
            next.push_back(std::move(np));
        }
        paths_ = std::move(next);
    }

    const PolarCodeSpec& spec_;
    const LlrVec& y_;
    int n_;
    int n_len_;
    int list_size_;
    int llr_total_ = 0;
    int bit_total_ = 0;
    std::vector<int> llr_off_;
    std::vector<int> bit_off_;
    std::vector<Path> paths_;
};

}  // namespace detail

inline SclResult scl_decode(const PolarCodeSpec& spec, const LlrVec& y, int list_size,
                            const std::optional<BitVec>& ue_rnti = std::nullopt,
                            bool early_stop = false) {
    if (static_cast<int>(y.size()) != spec.n_len)
        throw std::invalid_argument("LLR vector length does not match N");
    if (list_size < 1) throw std::invalid_argument("list size must be at least 1");
    if (early_stop && !ue_rnti)
        throw std::invalid_argument("early stopping requires the UE RNTI");
    if (ue_rnti && static_cast<int>(ue_rnti->size()) != spec.rnti_len)
        throw std::invalid_argument("UE RNTI length does not match spec");
    detail::SclEngine engine(spec, y, list_size);
    return engine.run(ue_rnti, early_stop);
}

}  // namespace polarbd
