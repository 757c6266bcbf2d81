// Monte Carlo experiment engine: BLER after stage-1 decoding, missed
// detection and false alarms through the full two-stage pipeline, and the
// average estimated-bit percentage under early stopping.
//
// Every random draw is a pure function of (seed, experiment, SNR point,
// trial), so a run is reproducible bit-for-bit regardless of thread count.
// All reported ratios are backed by integer numerator/denominator pairs and
// carry Wilson score intervals.
#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "polarbd/blind_detection.hpp"
#include "polarbd/channel.hpp"
#include "polarbd/construction.hpp"
#include "polarbd/rng.hpp"
#include "polarbd/sc_decoder.hpp"
#include "polarbd/scl_decoder.hpp"
#include "polarbd/util.hpp"

namespace polarbd {

inline constexpr const char* kVersion = "0.1.0";

enum class SimMetric { Bler, MdrFar, EstBits };

inline std::string to_string(SimMetric m) {
    switch (m) {
        case SimMetric::Bler: return "bler";
        case SimMetric::MdrFar: return "mdr_far";
        case SimMetric::EstBits: return "est_bits";
    }
    return "bler";
}

enum class RntiPolicy { Sequential, Random16 };

struct CodeDim {
    int n = 0;
    int k = 0;
};

struct ExperimentConfig {
    std::string name;
    SimMetric metric = SimMetric::Bler;
    std::vector<CodeDim> codes;
    RntiMode rnti_mode = RntiMode::RM1;
    int rnti_len = 16;
    double design_param = 0.5;
    int c1 = 44;
    int c2 = 7;
    int list_size = 8;
    std::vector<double> snr_grid_db;
    long trials = 1000;
    RntiPolicy rnti_policy = RntiPolicy::Sequential;
    double ue_sent_fraction = 0.5;
    bool early_stop = false;
    std::uint64_t seed = 1;

    void validate() const {
        if (codes.empty()) throw std::invalid_argument("experiment '" + name + "': no codes given");
        if (snr_grid_db.empty()) throw std::invalid_argument("experiment '" + name + "': empty snr grid");
        if (trials < 1) throw std::invalid_argument("experiment '" + name + "': trials must be >= 1");
        if (!(ue_sent_fraction >= 0.0 && ue_sent_fraction <= 1.0))
            throw std::invalid_argument("experiment '" + name + "': ue_sent_fraction outside [0,1]");
        if (metric != SimMetric::Bler) {
            if (codes.size() != 2)
                throw std::invalid_argument("experiment '" + name + "': detection metrics need exactly two codes");
            if (codes[0].k != codes[1].k)
                throw std::invalid_argument("experiment '" + name + "': both codes must share K");
            if (c1 < 2 || c1 % 2 != 0)
                throw std::invalid_argument("experiment '" + name + "': C1 must be even and >= 2");
            if (c2 < 1) throw std::invalid_argument("experiment '" + name + "': C2 must be >= 1");
            if (rnti_len < 1 || rnti_len > 30)
                throw std::invalid_argument("experiment '" + name + "': rnti_len out of range");
            if ((1L << rnti_len) <= c1)
                throw std::invalid_argument("experiment '" + name + "': RNTI space smaller than C1");
        }
        if (metric == SimMetric::EstBits && !early_stop)
            throw std::invalid_argument("experiment '" + name + "': est_bits requires early_stop");
    }
};

// --- statistics --------------------------------------------------------------

inline std::pair<double, double> wilson_interval(long num, long den, double z = 1.959963984540054) {
    if (den <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(den);
    const double p = static_cast<double>(num) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct RatioStat {
    long num = 0;
    long den = 0;

    double ratio() const { return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }
    double ci_low() const { return wilson_interval(num, den).first; }
    double ci_high() const { return wilson_interval(num, den).second; }
};

struct PointStats {
    std::string code_label;  // "128x57" or "mix(128x57,256x57)"
    int n = 0, k = 0;        // 0 for mixed rows
    double snr_db = 0.0;
    std::map<std::string, RatioStat> metrics;
};

struct SimStats {
    std::vector<PointStats> points;

    const PointStats& find(const std::string& code_label, double snr_db) const {
        for (const auto& p : points)
            if (p.code_label == code_label && std::abs(p.snr_db - snr_db) < 1e-12) return p;
        throw std::out_of_range("no stats for " + code_label);
    }
};

namespace detail {

inline BitVec value_to_bits(std::uint64_t value, int nbits) {
    BitVec bits(static_cast<std::size_t>(nbits));
    for (int i = 0; i < nbits; ++i)
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> (nbits - 1 - i)) & 1u);
    return bits;
}

template <typename Fn>
inline void parallel_trials(long trials, int threads, Fn&& body) {
    const int nthreads = std::max(1, threads);
    if (nthreads == 1 || trials < 2 * nthreads) {
        for (long t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    constexpr long kChunk = 16;
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const long base = next.fetch_add(kChunk);
                if (base >= trials) return;
                const long end = std::min(trials, base + kChunk);
                for (long t = base; t < end; ++t) body(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// --- BLER after stage-1 SC decoding ------------------------------------------

inline SimStats run_bler(const ExperimentConfig& cfg, int threads = 1) {
    cfg.validate();
    if (cfg.metric != SimMetric::Bler) throw std::invalid_argument("run_bler: wrong metric");
    SimStats stats;
    for (std::size_t ci = 0; ci < cfg.codes.size(); ++ci) {
        const CodeDim dim = cfg.codes[ci];
        const PolarCodeSpec spec = make_code_spec(dim.n, dim.k, cfg.rnti_len, cfg.rnti_mode, cfg.design_param);
        for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
            const double snr = cfg.snr_grid_db[si];
            ChannelConfig ch;
            ch.snr_db = snr;
            ch.rate = spec.effective_rate();
            const std::uint64_t stream = (static_cast<std::uint64_t>(ci) << 32) ^ si ^ 0xb1e5u;

            std::atomic<long> errors{0};
            detail::parallel_trials(cfg.trials, threads, [&](long trial) {
                auto rng = make_stream(cfg.seed, stream, static_cast<std::uint64_t>(trial));
                MessageWord msg{random_bits(rng, static_cast<std::size_t>(spec.k_info)),
                                random_bits(rng, static_cast<std::size_t>(spec.rnti_len))};
                const BitVec u = assemble_input(spec, msg);
                Codeword cw{u};
                polar_transform(cw.bits);
                const LlrVec y = transmit(cw, ch, rng);
                const ScResult sc = sc_decode(spec, y);
                if (sc.u_hat != u) errors.fetch_add(1, std::memory_order_relaxed);
            });

            PointStats p;
            p.code_label = std::to_string(dim.n) + "x" + std::to_string(dim.k);
            p.n = dim.n;
            p.k = dim.k;
            p.snr_db = snr;
            p.metrics["bler"] = RatioStat{errors.load(), cfg.trials};
            stats.points.push_back(std::move(p));
        }
    }
    return stats;
}

// --- detection pipeline experiments -------------------------------------------

namespace detail {

struct TrialTally {
    long sent = 0, notsent = 0;
    long missed = 0, fa1 = 0, fa2 = 0, correct = 0, no_detection = 0;
    // estimated-bit sums per (population: 0 sent / 1 not sent) and code slot
    std::array<std::array<long, 2>, 2> est_bits{{{0, 0}, {0, 0}}};
    std::array<std::array<long, 2>, 2> est_cnt{{{0, 0}, {0, 0}}};

    void add(const TrialTally& o) {
        sent += o.sent;
        notsent += o.notsent;
        missed += o.missed;
        fa1 += o.fa1;
        fa2 += o.fa2;
        correct += o.correct;
        no_detection += o.no_detection;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                est_bits[a][b] += o.est_bits[a][b];
                est_cnt[a][b] += o.est_cnt[a][b];
            }
    }
};

// One full detection round: build the C1 candidate pool, run the two-stage
// pipeline, classify against ground truth, and update the tally.
inline void detection_trial(const ExperimentConfig& cfg,
                            const std::array<std::shared_ptr<const PolarCodeSpec>, 2>& specs,
                            double snr_db, std::mt19937_64& rng, TrialTally& tally) {
    const int c1 = cfg.c1;
    const std::uint64_t rnti_space = 1ull << cfg.rnti_len;

    std::bernoulli_distribution sent_dist(cfg.ue_sent_fraction);
    const bool sent = cfg.ue_sent_fraction >= 1.0 ? true
                    : cfg.ue_sent_fraction <= 0.0 ? false
                                                  : sent_dist(rng);

    std::vector<std::uint64_t> rnti_values(static_cast<std::size_t>(c1));
    std::uint64_t ue_value = 0;
    int true_slot = -1;
    if (cfg.rnti_policy == RntiPolicy::Sequential) {
        for (int i = 0; i < c1; ++i) rnti_values[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i);
        ue_value = std::uniform_int_distribution<std::uint64_t>(0, static_cast<std::uint64_t>(c1 - 1))(rng);
        if (sent) {
            true_slot = static_cast<int>(ue_value);
        } else {
            // keep the UE RNTI out of the pool: its natural slot gets a value
            // from outside the sequential range
            rnti_values[static_cast<std::size_t>(ue_value)] =
                std::uniform_int_distribution<std::uint64_t>(static_cast<std::uint64_t>(c1), rnti_space - 1)(rng);
        }
    } else {
        std::unordered_set<std::uint64_t> used;
        std::uniform_int_distribution<std::uint64_t> draw(0, rnti_space - 1);
        for (auto& v : rnti_values) {
            do { v = draw(rng); } while (!used.insert(v).second);
        }
        do { ue_value = draw(rng); } while (used.count(ue_value));
        if (sent) {
            true_slot = static_cast<int>(std::uniform_int_distribution<int>(0, c1 - 1)(rng));
            rnti_values[static_cast<std::size_t>(true_slot)] = ue_value;
        }
    }
    const BitVec ue_rnti = value_to_bits(ue_value, cfg.rnti_len);

    std::vector<CandidateSlot> slots(static_cast<std::size_t>(c1));
    std::vector<BitVec> payloads(static_cast<std::size_t>(c1));
    for (int i = 0; i < c1; ++i) {
        const int code_idx = (i < c1 / 2) ? 0 : 1;
        const auto& spec = specs[static_cast<std::size_t>(code_idx)];
        MessageWord msg{random_bits(rng, static_cast<std::size_t>(spec->k_info)),
                        value_to_bits(rnti_values[static_cast<std::size_t>(i)], cfg.rnti_len)};
        payloads[static_cast<std::size_t>(i)] = msg.info_bits;
        Codeword cw = encode(*spec, msg);
        ChannelConfig ch;
        ch.snr_db = snr_db;
        ch.rate = spec->effective_rate();
        auto& slot = slots[static_cast<std::size_t>(i)];
        slot.index = i;
        slot.spec = spec;
        slot.llrs = transmit(cw, ch, rng);
    }

    DetectionOutcome out = detect(slots, ue_rnti, cfg.c2, cfg.list_size, cfg.early_stop);

    if (sent) {
        ++tally.sent;
        if (!out.selected) ++tally.missed;
        else if (*out.selected == true_slot && out.selected_payload &&
                 *out.selected_payload == payloads[static_cast<std::size_t>(true_slot)])
            ++tally.correct;
        else
            ++tally.fa2;
    } else {
        ++tally.notsent;
        if (out.selected) ++tally.fa1;
        else ++tally.no_detection;
    }

    const int pop = sent ? 0 : 1;
    for (const auto& s : out.stage2) {
        const int code_idx = (s.n_len == specs[0]->n_len) ? 0 : 1;
        tally.est_bits[pop][static_cast<std::size_t>(code_idx)] += s.bits_estimated;
        tally.est_cnt[pop][static_cast<std::size_t>(code_idx)] += 1;
    }
}

inline TrialTally run_detection_point(const ExperimentConfig& cfg,
                                      const std::array<std::shared_ptr<const PolarCodeSpec>, 2>& specs,
                                      std::size_t snr_index, int threads) {
    const double snr = cfg.snr_grid_db[snr_index];
    const std::uint64_t stream = (0xdec0deull << 32) ^ snr_index;
    const int nthreads = std::max(1, threads);
    std::vector<TrialTally> partial(static_cast<std::size_t>(nthreads));

    // strided trial assignment; per-trial streams make the split irrelevant
    std::vector<std::thread> pool;
    const long trials = cfg.trials;
    auto work = [&](TrialTally& local, long begin, long step) {
        for (long t = begin; t < trials; t += step) {
            auto rng = make_stream(cfg.seed, stream, static_cast<std::uint64_t>(t));
            detection_trial(cfg, specs, snr, rng, local);
        }
    };
    if (nthreads == 1) {
        work(partial[0], 0, 1);
    } else {
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w]() { work(partial[static_cast<std::size_t>(w)], w, nthreads); });
        for (auto& th : pool) th.join();
    }
    TrialTally total;
    for (const auto& p : partial) total.add(p);
    return total;
}

}  // namespace detail

inline SimStats run_mdr_far(const ExperimentConfig& cfg, int threads = 1) {
    cfg.validate();
    if (cfg.metric != SimMetric::MdrFar) throw std::invalid_argument("run_mdr_far: wrong metric");
    std::array<std::shared_ptr<const PolarCodeSpec>, 2> specs = {
        std::make_shared<PolarCodeSpec>(
            make_code_spec(cfg.codes[0].n, cfg.codes[0].k, cfg.rnti_len, cfg.rnti_mode, cfg.design_param)),
        std::make_shared<PolarCodeSpec>(
            make_code_spec(cfg.codes[1].n, cfg.codes[1].k, cfg.rnti_len, cfg.rnti_mode, cfg.design_param)),
    };
    const std::string label = "mix(" + std::to_string(cfg.codes[0].n) + "x" + std::to_string(cfg.codes[0].k) +
                              "," + std::to_string(cfg.codes[1].n) + "x" + std::to_string(cfg.codes[1].k) + ")";
    SimStats stats;
    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const auto tally = detail::run_detection_point(cfg, specs, si, threads);
        PointStats p;
        p.code_label = label;
        p.snr_db = cfg.snr_grid_db[si];
        p.metrics["mdr"] = RatioStat{tally.missed, tally.sent};
        p.metrics["far"] = RatioStat{tally.fa1 + tally.fa2, tally.sent + tally.notsent};
        p.metrics["far_type1"] = RatioStat{tally.fa1, tally.notsent};
        p.metrics["far_type2"] = RatioStat{tally.fa2, tally.sent};
        p.metrics["correct"] = RatioStat{tally.correct, tally.sent};
        stats.points.push_back(std::move(p));
    }
    return stats;
}

inline SimStats run_est_bits(const ExperimentConfig& cfg, int threads = 1) {
    cfg.validate();
    if (cfg.metric != SimMetric::EstBits) throw std::invalid_argument("run_est_bits: wrong metric");
    std::array<std::shared_ptr<const PolarCodeSpec>, 2> specs = {
        std::make_shared<PolarCodeSpec>(
            make_code_spec(cfg.codes[0].n, cfg.codes[0].k, cfg.rnti_len, cfg.rnti_mode, cfg.design_param)),
        std::make_shared<PolarCodeSpec>(
            make_code_spec(cfg.codes[1].n, cfg.codes[1].k, cfg.rnti_len, cfg.rnti_mode, cfg.design_param)),
    };
    SimStats stats;
    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const auto tally = detail::run_detection_point(cfg, specs, si, threads);
        for (int ci = 0; ci < 2; ++ci) {
            PointStats p;
            p.code_label = std::to_string(cfg.codes[static_cast<std::size_t>(ci)].n) + "x" +
                           std::to_string(cfg.codes[static_cast<std::size_t>(ci)].k);
            p.n = cfg.codes[static_cast<std::size_t>(ci)].n;
            p.k = cfg.codes[static_cast<std::size_t>(ci)].k;
            p.snr_db = cfg.snr_grid_db[si];
            const long n_len = cfg.codes[static_cast<std::size_t>(ci)].n;
            const auto& eb = tally.est_bits;
            const auto& ec = tally.est_cnt;
            if (ec[0][static_cast<std::size_t>(ci)] > 0)
                p.metrics["est_bits_pct_sent"] = RatioStat{eb[0][static_cast<std::size_t>(ci)],
                                                           ec[0][static_cast<std::size_t>(ci)] * n_len};
            if (ec[1][static_cast<std::size_t>(ci)] > 0)
                p.metrics["est_bits_pct_notsent"] = RatioStat{eb[1][static_cast<std::size_t>(ci)],
                                                              ec[1][static_cast<std::size_t>(ci)] * n_len};
            stats.points.push_back(std::move(p));
        }
    }
    return stats;
}

inline SimStats run_experiment(const ExperimentConfig& cfg, int threads = 1) {
    switch (cfg.metric) {
        case SimMetric::Bler: return run_bler(cfg, threads);
        case SimMetric::MdrFar: return run_mdr_far(cfg, threads);
        case SimMetric::EstBits: return run_est_bits(cfg, threads);
    }
    throw std::logic_error("unreachable");
}

// --- config file -------------------------------------------------------------
//
// One experiment per stanza:
//
//   [bler_sweep]
//   metric = bler
//   codes = 128:57 256:57
//   rnti_mode = rm1
//   snr_db = 0 0.5 1 1.5 2
//   trials = 10000
//   seed = 1
//
// Optional keys: rnti_len, design_param, c1, c2, list, rnti_policy,
// ue_sent_fraction, early_stop.

inline std::vector<ExperimentConfig> parse_experiment_configs(const std::string& text) {
    std::vector<ExperimentConfig> out;
    std::istringstream is(text);
    std::string line;
    ExperimentConfig* cur = nullptr;
    int lineno = 0;
    auto fail = [&lineno](const std::string& msg) {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) fail("malformed stanza header");
            out.emplace_back();
            cur = &out.back();
            cur->name = line.substr(1, line.size() - 2);
            continue;
        }
        if (!cur) fail("key outside of a [stanza]");
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (value.empty()) fail("empty value for '" + key + "'");

        std::istringstream vs(value);
        if (key == "metric") {
            if (value == "bler") cur->metric = SimMetric::Bler;
            else if (value == "mdr_far") cur->metric = SimMetric::MdrFar;
            else if (value == "est_bits") { cur->metric = SimMetric::EstBits; cur->early_stop = true; }
            else fail("unknown metric '" + value + "'");
        } else if (key == "codes") {
            cur->codes.clear();
            std::string tok;
            while (vs >> tok) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos) fail("codes must be N:K pairs");
                cur->codes.push_back(CodeDim{std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
            }
        } else if (key == "rnti_mode") {
            cur->rnti_mode = rnti_mode_from_string(value);
        } else if (key == "rnti_len") {
            vs >> cur->rnti_len;
        } else if (key == "design_param") {
            vs >> cur->design_param;
        } else if (key == "c1") {
            vs >> cur->c1;
        } else if (key == "c2") {
            vs >> cur->c2;
        } else if (key == "list") {
            vs >> cur->list_size;
        } else if (key == "snr_db") {
            cur->snr_grid_db.clear();
            double x;
            while (vs >> x) cur->snr_grid_db.push_back(x);
        } else if (key == "trials") {
            vs >> cur->trials;
        } else if (key == "rnti_policy") {
            if (value == "sequential") cur->rnti_policy = RntiPolicy::Sequential;
            else if (value == "random16") cur->rnti_policy = RntiPolicy::Random16;
            else fail("unknown rnti_policy '" + value + "'");
        } else if (key == "ue_sent_fraction") {
            vs >> cur->ue_sent_fraction;
        } else if (key == "early_stop") {
            if (value == "true" || value == "1") cur->early_stop = true;
            else if (value == "false" || value == "0") cur->early_stop = false;
            else fail("early_stop must be true or false");
        } else if (key == "seed") {
            vs >> cur->seed;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("config contains no experiment stanzas");
    for (const auto& cfg : out) cfg.validate();
    return out;
}

// --- output ------------------------------------------------------------------

inline std::string format_double(double x, const char* fmt = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, x);
    return buf;
}

inline std::string stats_to_csv(const std::vector<std::pair<std::string, SimStats>>& runs) {
    std::ostringstream os;
    os << "experiment,metric,code,snr_db,numerator,denominator,ratio,ci_low,ci_high\n";
    for (const auto& [name, stats] : runs) {
        for (const auto& p : stats.points) {
            for (const auto& [metric, rs] : p.metrics) {
                os << name << ',' << metric << ',' << p.code_label << ',' << format_double(p.snr_db, "%.6g")
                   << ',' << rs.num << ',' << rs.den << ',' << format_double(rs.ratio()) << ','
                   << format_double(rs.ci_low()) << ',' << format_double(rs.ci_high()) << "\n";
            }
        }
    }
    return os.str();
}

}  // namespace polarbd
