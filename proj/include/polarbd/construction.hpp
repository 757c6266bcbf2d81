// Polar code construction: bit-channel reliability ordering, frozen/info/RNTI
// position assignment, and encoding.
//
// Reliability comes from the Bhattacharyya-parameter recursion on a BEC with
// erasure probability `design_param`: each polarization split maps z to the
// pair {z + z - z*z, z*z}. Indices are ranked by ascending parameter; equal
// parameters rank the lower bit index first.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarbd/util.hpp"

namespace polarbd {

enum class RntiMode { RM1, RM2, RM3 };

inline std::string to_string(RntiMode m) {
    switch (m) {
        case RntiMode::RM1: return "RM1";
        case RntiMode::RM2: return "RM2";
        case RntiMode::RM3: return "RM3";
    }
    return "RM1";
}

inline RntiMode rnti_mode_from_string(const std::string& s) {
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (t == "RM1") return RntiMode::RM1;
    if (t == "RM2") return RntiMode::RM2;
    if (t == "RM3") return RntiMode::RM3;
    throw std::invalid_argument("unknown RNTI mode '" + s + "'");
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(int n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("N must be a power of two, got " + std::to_string(n));
    int m = 0;
    while ((1 << m) < n) ++m;
    return m;
}

struct ReliabilityOrder {
    std::vector<int> order;  // bit-channel indices, most reliable first
    double design_param = 0.5;
};

// Bhattacharyya parameters for all N bit-channels, indexed by input position.
inline std::vector<double> bhattacharyya_parameters(int n_len, double design_param) {
    const int n = log2_exact(n_len);
    if (n < 1) throw std::invalid_argument("N must be at least 2");
    if (!(design_param > 0.0 && design_param < 1.0))
        throw std::invalid_argument("design_param must be in (0,1)");
    std::vector<double> z(static_cast<std::size_t>(n_len), design_param);
    for (int stage = 0; stage < n; ++stage) {
        const int inc = 1 << stage;
        for (int j = 0; j < inc; ++j) {
            for (int i = 0; i < n_len; i += 2 * inc) {
                const double a = z[static_cast<std::size_t>(i + j)];
                const double b = z[static_cast<std::size_t>(i + j + inc)];
                z[static_cast<std::size_t>(i + j)] = a + b - a * b;
                z[static_cast<std::size_t>(i + j + inc)] = a * b;
            }
        }
    }
    return z;
}

inline ReliabilityOrder build_reliability_order(int n_len, double design_param = 0.5) {
    const std::vector<double> z = bhattacharyya_parameters(n_len, design_param);
    ReliabilityOrder ro;
    ro.design_param = design_param;
    ro.order.resize(static_cast<std::size_t>(n_len));
    std::iota(ro.order.begin(), ro.order.end(), 0);
    std::stable_sort(ro.order.begin(), ro.order.end(),
                     [&](int a, int b) { return z[static_cast<std::size_t>(a)] < z[static_cast<std::size_t>(b)]; });
    return ro;
}

struct PolarCodeSpec {
    int n_len = 0;       // code length N = 2^n
    int n_stages = 0;    // n
    int k_info = 0;      // information length K
    int rnti_len = 16;
    RntiMode rnti_mode = RntiMode::RM1;
    double design_param = 0.5;
    std::vector<int> info_positions;    // ascending
    std::vector<int> rnti_positions;    // ascending; RNTI bit i lives at rnti_positions[i]
    std::vector<int> frozen_positions;  // ascending

    // Per-position lookups derived from the lists above.
    enum class Role : std::uint8_t { Frozen, Info, Rnti };
    std::vector<Role> role;      // size N
    std::vector<int> rnti_bit;   // size N, rnti bit number or -1
    std::vector<int> info_bit;   // size N, info bit number or -1

    void finalize() {
        role.assign(static_cast<std::size_t>(n_len), Role::Frozen);
        rnti_bit.assign(static_cast<std::size_t>(n_len), -1);
        info_bit.assign(static_cast<std::size_t>(n_len), -1);
        for (std::size_t i = 0; i < info_positions.size(); ++i) {
            role[static_cast<std::size_t>(info_positions[i])] = Role::Info;
            info_bit[static_cast<std::size_t>(info_positions[i])] = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < rnti_positions.size(); ++i) {
            role[static_cast<std::size_t>(rnti_positions[i])] = Role::Rnti;
            rnti_bit[static_cast<std::size_t>(rnti_positions[i])] = static_cast<int>(i);
        }
    }

    double effective_rate() const { return static_cast<double>(k_info + rnti_len) / n_len; }
};

struct MessageWord {
    BitVec info_bits;
    BitVec rnti_bits;
};

struct Codeword {
    BitVec bits;
};

inline PolarCodeSpec build_code_spec(int n_len, int k_info, int rnti_len, RntiMode mode,
                                     const ReliabilityOrder& order) {
    if (static_cast<int>(order.order.size()) != n_len)
        throw std::invalid_argument("reliability order length does not match N");
    if (k_info < 0 || rnti_len < 0 || k_info + rnti_len > n_len)
        throw std::invalid_argument("K + rnti_len must not exceed N");

    PolarCodeSpec spec;
    spec.n_len = n_len;
    spec.n_stages = log2_exact(n_len);
    spec.k_info = k_info;
    spec.rnti_len = rnti_len;
    spec.rnti_mode = mode;
    spec.design_param = order.design_param;

    // S = the K + rnti_len most reliable positions.
    const int s_size = k_info + rnti_len;
    std::vector<int> s(order.order.begin(), order.order.begin() + s_size);

    std::vector<int> rnti, info;
    switch (mode) {
        case RntiMode::RM1:
            info.assign(s.begin(), s.begin() + k_info);
            rnti.assign(s.begin() + k_info, s.end());
            break;
        case RntiMode::RM2:
            rnti.assign(s.begin(), s.begin() + rnti_len);
            info.assign(s.begin() + rnti_len, s.end());
            break;
        case RntiMode::RM3: {
            // RNTI takes the leftmost (smallest bit index) members of S.
            std::vector<int> sorted_s = s;
            std::sort(sorted_s.begin(), sorted_s.end());
            rnti.assign(sorted_s.begin(), sorted_s.begin() + rnti_len);
            info.assign(sorted_s.begin() + rnti_len, sorted_s.end());
            break;
        }
    }
    std::sort(info.begin(), info.end());
    std::sort(rnti.begin(), rnti.end());

    std::vector<bool> in_s(static_cast<std::size_t>(n_len), false);
    for (int p : s) in_s[static_cast<std::size_t>(p)] = true;
    std::vector<int> frozen;
    frozen.reserve(static_cast<std::size_t>(n_len - s_size));
    for (int i = 0; i < n_len; ++i)
        if (!in_s[static_cast<std::size_t>(i)]) frozen.push_back(i);

    spec.info_positions = std::move(info);
    spec.rnti_positions = std::move(rnti);
    spec.frozen_positions = std::move(frozen);
    spec.finalize();
    return spec;
}

// In-place polar transform: n stages of XOR butterflies, equivalent to
// multiplying by the n-th Kronecker power of [1 0; 1 1] over GF(2). The
// transform is its own inverse.
inline void polar_transform(BitVec& bits) {
    const int n_len = static_cast<int>(bits.size());
    const int n = log2_exact(n_len);
    for (int stage = 0; stage < n; ++stage) {
        const int inc = 1 << stage;
        for (int j = 0; j < inc; ++j)
            for (int i = 0; i < n_len; i += 2 * inc)
                bits[static_cast<std::size_t>(i + j)] ^= bits[static_cast<std::size_t>(i + j + inc)];
    }
}

inline BitVec assemble_input(const PolarCodeSpec& spec, const MessageWord& msg) {
    if (static_cast<int>(msg.info_bits.size()) != spec.k_info ||
        static_cast<int>(msg.rnti_bits.size()) != spec.rnti_len)
        throw std::invalid_argument("message dimensions do not match code spec");
    BitVec u(static_cast<std::size_t>(spec.n_len), 0);
    for (std::size_t i = 0; i < msg.info_bits.size(); ++i)
        u[static_cast<std::size_t>(spec.info_positions[i])] = msg.info_bits[i] & 1u;
    for (std::size_t i = 0; i < msg.rnti_bits.size(); ++i)
        u[static_cast<std::size_t>(spec.rnti_positions[i])] = msg.rnti_bits[i] & 1u;
    return u;
}

inline Codeword encode(const PolarCodeSpec& spec, const MessageWord& msg) {
    BitVec u = assemble_input(spec, msg);
    polar_transform(u);
    return Codeword{std::move(u)};
}

inline BitVec extract_info(const PolarCodeSpec& spec, const BitVec& u) {
    BitVec out(static_cast<std::size_t>(spec.k_info));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = u[static_cast<std::size_t>(spec.info_positions[i])] & 1u;
    return out;
}

inline BitVec extract_rnti(const PolarCodeSpec& spec, const BitVec& u) {
    BitVec out(static_cast<std::size_t>(spec.rnti_len));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = u[static_cast<std::size_t>(spec.rnti_positions[i])] & 1u;
    return out;
}

// --- spec serialization ----------------------------------------------------
//
// Plain text, one field per line, so experiment setups replay bit-exactly:
//
//   polar-code-spec v1
//   N 128
//   K 57
//   rnti_len 16
//   rnti_mode RM3
//   design_param 0.5
//   info_positions 47 55 ...
//   rnti_positions 31 ...
//   frozen_positions 0 1 ...

inline std::string spec_to_text(const PolarCodeSpec& spec) {
    std::ostringstream os;
    os << "polar-code-spec v1\n";
    os << "N " << spec.n_len << "\n";
    os << "K " << spec.k_info << "\n";
    os << "rnti_len " << spec.rnti_len << "\n";
    os << "rnti_mode " << to_string(spec.rnti_mode) << "\n";
    os << "design_param " << spec.design_param << "\n";
    auto emit = [&os](const char* name, const std::vector<int>& v) {
        os << name;
        for (int p : v) os << ' ' << p;
        os << "\n";
    };
    emit("info_positions", spec.info_positions);
    emit("rnti_positions", spec.rnti_positions);
    emit("frozen_positions", spec.frozen_positions);
    return os.str();
}

inline PolarCodeSpec spec_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "polar-code-spec v1")
        throw std::invalid_argument("not a polar-code-spec v1 file");
    PolarCodeSpec spec;
    bool have_n = false, have_k = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto read_ints = [&ls]() {
            std::vector<int> v;
            int x;
            while (ls >> x) v.push_back(x);
            return v;
        };
        if (key == "N") { ls >> spec.n_len; have_n = true; }
        else if (key == "K") { ls >> spec.k_info; have_k = true; }
        else if (key == "rnti_len") ls >> spec.rnti_len;
        else if (key == "rnti_mode") { std::string m; ls >> m; spec.rnti_mode = rnti_mode_from_string(m); }
        else if (key == "design_param") ls >> spec.design_param;
        else if (key == "info_positions") spec.info_positions = read_ints();
        else if (key == "rnti_positions") spec.rnti_positions = read_ints();
        else if (key == "frozen_positions") spec.frozen_positions = read_ints();
        else throw std::invalid_argument("unknown spec field '" + key + "'");
    }
    if (!have_n || !have_k) throw std::invalid_argument("spec file missing N or K");
    spec.n_stages = log2_exact(spec.n_len);

    // The three lists must partition {0, ..., N-1}.
    std::vector<int> seen(static_cast<std::size_t>(spec.n_len), 0);
    for (const auto* v : {&spec.info_positions, &spec.rnti_positions, &spec.frozen_positions})
        for (int p : *v) {
            if (p < 0 || p >= spec.n_len) throw std::invalid_argument("position out of range in spec file");
            ++seen[static_cast<std::size_t>(p)];
        }
    for (int c : seen)
        if (c != 1) throw std::invalid_argument("positions do not partition 0..N-1 in spec file");
    if (static_cast<int>(spec.info_positions.size()) != spec.k_info ||
        static_cast<int>(spec.rnti_positions.size()) != spec.rnti_len)
        throw std::invalid_argument("position list sizes disagree with K/rnti_len");
    spec.finalize();
    return spec;
}

inline PolarCodeSpec make_code_spec(int n_len, int k_info, int rnti_len, RntiMode mode,
                                    double design_param = 0.5) {
    return build_code_spec(n_len, k_info, rnti_len, mode, build_reliability_order(n_len, design_param));
}

}  // namespace polarbd
