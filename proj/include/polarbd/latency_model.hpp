// Time-step accounting for the blind-detection pipeline.
//
// Analytic step counts for standard SC/SCL decoders:
//   T_SC(N)        = 2N - 2
//   T_SCL(N, K)    = 2N + K + rnti_b - 2
// and, for the tree-pruning decoder variants, an embedded table of published
// step counts (they depend on the frozen-bit pattern of each code and are
// treated as data here, not recomputed).
//
// Total detection time in steps:
//   T_bd = ceil(C1/N_SC) * (T_SC1 + T_SC2)/2 + T_sort + ceil(C2/N_SCL) * T_SCL
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarbd {

enum class DecoderAlgo { SC, FastSSC, SCL, SSCL, FastSSCL_L2 };

enum class AlgoPair { ScScl, FastSscSscl, FastSscFastSsclL2 };

inline std::string to_string(AlgoPair p) {
    switch (p) {
        case AlgoPair::ScScl: return "sc-scl";
        case AlgoPair::FastSscSscl: return "fastssc-sscl";
        case AlgoPair::FastSscFastSsclL2: return "fastssc-fastsscl-l2";
    }
    return "sc-scl";
}

inline AlgoPair algo_pair_from_string(const std::string& s) {
    if (s == "sc-scl") return AlgoPair::ScScl;
    if (s == "fastssc-sscl") return AlgoPair::FastSscSscl;
    if (s == "fastssc-fastsscl-l2") return AlgoPair::FastSscFastSsclL2;
    throw std::invalid_argument("unknown algorithm pair '" + s + "'");
}

inline long t_sc(int n_len) {
    if (n_len < 2 || (n_len & (n_len - 1)) != 0)
        throw std::invalid_argument("T_SC needs a power-of-two N");
    return 2L * n_len - 2;
}

inline long t_scl_one(int n_len, int k, int rnti_b = 16) { return 2L * n_len + k + rnti_b - 2; }

inline long t_scl(int n1, int k1, int n2, int k2, int rnti_b = 16) {
    return std::max(2L * n1 + k1, 2L * n2 + k2) + rnti_b - 2;
}

struct TimestepTable {
    // (N, K, algorithm) -> time steps
    std::map<std::tuple<int, int, DecoderAlgo>, long> steps;

    std::optional<long> lookup(int n, int k, DecoderAlgo algo) const {
        auto it = steps.find({n, k, algo});
        if (it == steps.end()) return std::nullopt;
        return it->second;
    }
};

// Step counts for the 12 reference codes under five decoding algorithms.
inline const TimestepTable& default_timestep_table() {
    static const TimestepTable table = [] {
        TimestepTable t;
        struct Row { int n, k; long sc, fast_ssc, scl, sscl, fast_sscl2; };
        static constexpr Row rows[] = {
            {128, 8, 254, 43, 278, 79, 71},
            {128, 16, 254, 46, 286, 81, 67},
            {128, 32, 254, 49, 302, 112, 86},
            {128, 57, 254, 52, 327, 134, 84},
            {256, 8, 510, 94, 534, 122, 120},
            {256, 16, 510, 97, 542, 130, 125},
            {256, 32, 510, 109, 558, 163, 149},
            {256, 57, 510, 127, 583, 226, 203},
            {512, 8, 1022, 37, 1046, 71, 64},
            {512, 16, 1022, 64, 1054, 110, 101},
            {512, 32, 1022, 85, 1070, 140, 124},
            {512, 57, 1022, 91, 1095, 193, 163},
        };
        for (const auto& r : rows) {
            t.steps[{r.n, r.k, DecoderAlgo::SC}] = r.sc;
            t.steps[{r.n, r.k, DecoderAlgo::FastSSC}] = r.fast_ssc;
            t.steps[{r.n, r.k, DecoderAlgo::SCL}] = r.scl;
            t.steps[{r.n, r.k, DecoderAlgo::SSCL}] = r.sscl;
            t.steps[{r.n, r.k, DecoderAlgo::FastSSCL_L2}] = r.fast_sscl2;
        }
        return t;
    }();
    return table;
}

struct LatencyConfig {
    int c1 = 44;
    int c2 = 7;
    int n_sc = 22;    // parallel stage-1 decoders
    int n_scl = 7;    // parallel stage-2 decoders
    double f_mhz = 800.0;
    int rnti_b = 16;
    std::optional<long> t_sort;  // defaults to C2 when unset
    AlgoPair algo_pair = AlgoPair::ScScl;
    int n1 = 512, k1 = 57;
    int n2 = 256, k2 = 57;

    void validate() const {
        if (c1 < 1 || c2 < 1 || n_sc < 1 || n_scl < 1)
            throw std::invalid_argument("decoder and candidate counts must be at least 1");
        if (!(f_mhz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
    }
};

struct LatencyResult {
    long steps = 0;
    double microseconds = 0.0;
};

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

inline LatencyResult t_bd(const LatencyConfig& cfg, const TimestepTable& table = default_timestep_table()) {
    cfg.validate();

    long stage1_a = 0, stage1_b = 0, stage2 = 0;
    auto table_steps = [&table](int n, int k, DecoderAlgo algo) {
        auto v = table.lookup(n, k, algo);
        if (!v)
            throw std::runtime_error("unsupported configuration: no time-step entry for N=" +
                                     std::to_string(n) + " K=" + std::to_string(k));
        return *v;
    };
    switch (cfg.algo_pair) {
        case AlgoPair::ScScl:
            stage1_a = t_sc(cfg.n1);
            stage1_b = t_sc(cfg.n2);
            stage2 = t_scl(cfg.n1, cfg.k1, cfg.n2, cfg.k2, cfg.rnti_b);
            break;
        case AlgoPair::FastSscSscl:
            stage1_a = table_steps(cfg.n1, cfg.k1, DecoderAlgo::FastSSC);
            stage1_b = table_steps(cfg.n2, cfg.k2, DecoderAlgo::FastSSC);
            stage2 = std::max(table_steps(cfg.n1, cfg.k1, DecoderAlgo::SSCL),
                              table_steps(cfg.n2, cfg.k2, DecoderAlgo::SSCL));
            break;
        case AlgoPair::FastSscFastSsclL2:
            stage1_a = table_steps(cfg.n1, cfg.k1, DecoderAlgo::FastSSC);
            stage1_b = table_steps(cfg.n2, cfg.k2, DecoderAlgo::FastSSC);
            stage2 = std::max(table_steps(cfg.n1, cfg.k1, DecoderAlgo::FastSSCL_L2),
                              table_steps(cfg.n2, cfg.k2, DecoderAlgo::FastSSCL_L2));
            break;
    }
    const long sort_steps = cfg.t_sort.value_or(cfg.c2);

    LatencyResult res;
    // (T1 + T2)/2 can be fractional for table-driven rows; keep exact halves.
    const double stage1 = static_cast<double>(ceil_div(cfg.c1, cfg.n_sc)) *
                          (static_cast<double>(stage1_a) / 2.0 + static_cast<double>(stage1_b) / 2.0);
    const double total = stage1 + static_cast<double>(sort_steps) +
                         static_cast<double>(ceil_div(cfg.c2, cfg.n_scl)) * static_cast<double>(stage2);
    res.steps = static_cast<long>(std::llround(std::ceil(total)));
    res.microseconds = static_cast<double>(res.steps) / cfg.f_mhz;
    return res;
}

// A report row for one evaluated configuration.
struct LatencyRow {
    AlgoPair pair;
    double f_mhz;
    int n_sc;
    int n_scl;
    int c2;
    long steps;
    double microseconds;
    bool meets_4us;
    bool meets_16us;
};

inline LatencyRow evaluate_latency(const LatencyConfig& cfg,
                                   const TimestepTable& table = default_timestep_table()) {
    const LatencyResult r = t_bd(cfg, table);
    return LatencyRow{cfg.algo_pair, cfg.f_mhz, cfg.n_sc,    cfg.n_scl,          cfg.c2,
                      r.steps,       r.microseconds, r.microseconds <= 4.0, r.microseconds <= 16.0};
}

// Reference operating points: the standard-decoder worst case and the
// published fast-decoder frequency ladder, all at the worst-case code pairs.
inline std::vector<LatencyConfig> preset_latency_configs(int c2 = 7) {
    std::vector<LatencyConfig> v;
    {
        LatencyConfig cfg;
        cfg.algo_pair = AlgoPair::ScScl;
        cfg.f_mhz = 800.0;
        cfg.n_sc = 22;
        cfg.n_scl = c2;
        cfg.c2 = c2;
        cfg.n1 = 512; cfg.k1 = 57;
        cfg.n2 = 256; cfg.k2 = 57;
        v.push_back(cfg);
    }
    struct FastRow { AlgoPair pair; double f; int n_sc; };
    static constexpr double kFreqs[] = {300, 400, 500, 600, 700};
    static constexpr int kNscSscl[] = {11, 8, 5, 4, 3};
    static constexpr int kNscFsscl[] = {11, 7, 5, 4, 3};
    for (int i = 0; i < 5; ++i) {
        LatencyConfig cfg;
        cfg.algo_pair = AlgoPair::FastSscSscl;
        cfg.f_mhz = kFreqs[i];
        cfg.n_sc = kNscSscl[i];
        cfg.n_scl = (c2 + 1) / 2;
        cfg.c2 = c2;
        cfg.n1 = 256; cfg.k1 = 57;
        cfg.n2 = 256; cfg.k2 = 32;
        v.push_back(cfg);
    }
    for (int i = 0; i < 5; ++i) {
        LatencyConfig cfg;
        cfg.algo_pair = AlgoPair::FastSscFastSsclL2;
        cfg.f_mhz = kFreqs[i];
        cfg.n_sc = kNscFsscl[i];
        cfg.n_scl = (c2 + 1) / 2;
        cfg.c2 = c2;
        cfg.n1 = 256; cfg.k1 = 57;
        cfg.n2 = 256; cfg.k2 = 32;
        v.push_back(cfg);
    }
    return v;
}

inline std::string latency_report_csv(const std::vector<LatencyRow>& rows) {
    std::ostringstream os;
    os << "algo_pair,f_mhz,n_sc,n_scl,c2,steps,microseconds,meets_4us,meets_16us\n";
    for (const auto& r : rows) {
        char us[32];
        std::snprintf(us, sizeof(us), "%.4f", r.microseconds);
        os << to_string(r.pair) << ',' << r.f_mhz << ',' << r.n_sc << ',' << r.n_scl << ',' << r.c2
           << ',' << r.steps << ',' << us << ',' << (r.meets_4us ? 1 : 0) << ','
           << (r.meets_16us ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace polarbd
