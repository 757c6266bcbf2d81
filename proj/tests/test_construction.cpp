#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "polarbd/construction.hpp"
#include "support/reference_decoders.hpp"

using namespace polarbd;

TEST_CASE("reliability order for N=2", "[construction]") {
    const auto ro = build_reliability_order(2, 0.5);
    REQUIRE(ro.order == std::vector<int>{1, 0});
}

TEST_CASE("reliability order for N=4 matches hand recursion", "[construction]") {
    // two splits of z=0.5: {0.9375, 0.4375, 0.5625, 0.0625}
    const auto z = bhattacharyya_parameters(4, 0.5);
    REQUIRE(z[0] == Catch::Approx(0.9375));
    REQUIRE(z[1] == Catch::Approx(0.4375));
    REQUIRE(z[2] == Catch::Approx(0.5625));
    REQUIRE(z[3] == Catch::Approx(0.0625));
    const auto ro = build_reliability_order(4, 0.5);
    REQUIRE(ro.order == std::vector<int>{3, 1, 2, 0});
}

TEST_CASE("bhattacharyya recursion agrees with per-index evaluation", "[construction]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    for (int n_len : {8, 32, 64}) {
        const double eps = dist(rng);
        const auto z = bhattacharyya_parameters(n_len, eps);
        const int n = log2_exact(n_len);
        for (int i = 0; i < n_len; ++i)
            REQUIRE(z[static_cast<std::size_t>(i)] ==
                    Catch::Approx(testsupport::reference_bhattacharyya(i, n, eps)).epsilon(1e-12));
    }
}

TEST_CASE("reliability order is a permutation", "[construction]") {
    for (double eps : {0.2, 0.5, 0.8}) {
        const auto ro = build_reliability_order(1024, eps);
        std::vector<int> sorted = ro.order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> want(1024);
        std::iota(want.begin(), want.end(), 0);
        REQUIRE(sorted == want);
    }
}

TEST_CASE("reliability order rejects bad arguments", "[construction]") {
    REQUIRE_THROWS_AS(build_reliability_order(48, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(build_reliability_order(0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(build_reliability_order(64, 1.5), std::invalid_argument);
}

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::set<int> unfrozen_union(const PolarCodeSpec& s) {
    std::set<int> u = as_set(s.info_positions);
    for (int p : s.rnti_positions) u.insert(p);
    return u;
}

}  // namespace

TEST_CASE("RM1 and RM2 share S but swap roles", "[construction]") {
    const auto ro = build_reliability_order(32, 0.5);
    const auto rm1 = build_code_spec(32, 8, 16, RntiMode::RM1, ro);
    const auto rm2 = build_code_spec(32, 8, 16, RntiMode::RM2, ro);
    REQUIRE(unfrozen_union(rm1) == unfrozen_union(rm2));
    REQUIRE(rm1.frozen_positions == rm2.frozen_positions);
    REQUIRE(as_set(rm1.info_positions) != as_set(rm2.info_positions));
    // RM1 info bits are the most reliable K of S; under RM2 those positions
    // belong to the RNTI block.
    const std::vector<int> s_by_rel(ro.order.begin(), ro.order.begin() + 24);
    for (int i = 0; i < 8; ++i)
        REQUIRE(std::count(rm1.info_positions.begin(), rm1.info_positions.end(), s_by_rel[i]) == 1);
    for (int i = 0; i < 16; ++i)
        REQUIRE(std::count(rm2.rnti_positions.begin(), rm2.rnti_positions.end(), s_by_rel[i]) == 1);
}

TEST_CASE("RM3 takes the leftmost members of S", "[construction]") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{64, 16}, {128, 57}, {256, 32}}) {
        const auto ro = build_reliability_order(n, 0.5);
        const auto spec = build_code_spec(n, k, 16, RntiMode::RM3, ro);
        std::vector<int> s(ro.order.begin(), ro.order.begin() + k + 16);
        std::sort(s.begin(), s.end());
        const std::vector<int> want(s.begin(), s.begin() + 16);
        REQUIRE(spec.rnti_positions == want);
        // all info positions sit to the right of every RNTI position
        REQUIRE(spec.rnti_positions.back() < spec.info_positions.front());
    }
}

TEST_CASE("frozen set size and partition", "[construction]") {
    const auto spec = make_code_spec(128, 57, 16, RntiMode::RM3);
    REQUIRE(spec.frozen_positions.size() == 55);

    for (RntiMode mode : {RntiMode::RM1, RntiMode::RM2, RntiMode::RM3}) {
        const auto s = make_code_spec(128, 57, 16, mode);
        std::vector<int> all;
        all.insert(all.end(), s.info_positions.begin(), s.info_positions.end());
        all.insert(all.end(), s.rnti_positions.begin(), s.rnti_positions.end());
        all.insert(all.end(), s.frozen_positions.begin(), s.frozen_positions.end());
        std::sort(all.begin(), all.end());
        std::vector<int> want(128);
        std::iota(want.begin(), want.end(), 0);
        REQUIRE(all == want);
    }
}

TEST_CASE("modes share the frozen set", "[construction]") {
    const auto ro = build_reliability_order(256, 0.5);
    const auto a = build_code_spec(256, 32, 16, RntiMode::RM1, ro);
    const auto b = build_code_spec(256, 32, 16, RntiMode::RM2, ro);
    const auto c = build_code_spec(256, 32, 16, RntiMode::RM3, ro);
    REQUIRE(a.frozen_positions == b.frozen_positions);
    REQUIRE(a.frozen_positions == c.frozen_positions);
}

TEST_CASE("code spec rejects oversized payloads", "[construction]") {
    const auto ro = build_reliability_order(32, 0.5);
    REQUIRE_THROWS_AS(build_code_spec(32, 20, 16, RntiMode::RM1, ro), std::invalid_argument);
}

TEST_CASE("encoding hand examples", "[construction]") {
    BitVec u{0, 0, 0, 1};
    polar_transform(u);
    REQUIRE(u == BitVec{1, 1, 1, 1});

    u = BitVec{1, 0, 0, 0};
    polar_transform(u);
    REQUIRE(u == BitVec{1, 0, 0, 0});

    u = BitVec(8, 0);
    polar_transform(u);
    REQUIRE(u == BitVec(8, 0));
}

TEST_CASE("polar transform is an involution and linear", "[construction]") {
    std::mt19937_64 rng(11);
    for (int n_len : {8, 64, 256}) {
        for (int rep = 0; rep < 50; ++rep) {
            BitVec a(static_cast<std::size_t>(n_len)), b(static_cast<std::size_t>(n_len));
            for (auto& x : a) x = rng() & 1u;
            for (auto& x : b) x = rng() & 1u;

            BitVec aa = a;
            polar_transform(aa);
            polar_transform(aa);
            REQUIRE(aa == a);

            BitVec xor_ab(static_cast<std::size_t>(n_len));
            for (int i = 0; i < n_len; ++i) xor_ab[i] = a[i] ^ b[i];
            polar_transform(xor_ab);
            BitVec ea = a, eb = b;
            polar_transform(ea);
            polar_transform(eb);
            for (int i = 0; i < n_len; ++i) REQUIRE(xor_ab[i] == (ea[i] ^ eb[i]));
        }
    }
}

TEST_CASE("encode scatters info and RNTI bits", "[construction]") {
    const auto spec = make_code_spec(32, 8, 16, RntiMode::RM1);
    std::mt19937_64 rng(3);
    MessageWord msg{BitVec(8), BitVec(16)};
    for (auto& b : msg.info_bits) b = rng() & 1u;
    for (auto& b : msg.rnti_bits) b = rng() & 1u;
    const Codeword cw = encode(spec, msg);
    BitVec u = cw.bits;
    polar_transform(u);  // invert
    REQUIRE(extract_info(spec, u) == msg.info_bits);
    REQUIRE(extract_rnti(spec, u) == msg.rnti_bits);
    for (int p : spec.frozen_positions) REQUIRE(u[static_cast<std::size_t>(p)] == 0);

    MessageWord bad{BitVec(7), BitVec(16)};
    REQUIRE_THROWS_AS(encode(spec, bad), std::invalid_argument);
}

TEST_CASE("spec text round trip", "[construction]") {
    const auto spec = make_code_spec(128, 57, 16, RntiMode::RM3, 0.4);
    const std::string text = spec_to_text(spec);
    const auto back = spec_from_text(text);
    REQUIRE(back.n_len == spec.n_len);
    REQUIRE(back.k_info == spec.k_info);
    REQUIRE(back.rnti_len == spec.rnti_len);
    REQUIRE(back.rnti_mode == spec.rnti_mode);
    REQUIRE(back.design_param == Catch::Approx(spec.design_param));
    REQUIRE(back.info_positions == spec.info_positions);
    REQUIRE(back.rnti_positions == spec.rnti_positions);
    REQUIRE(back.frozen_positions == spec.frozen_positions);

    REQUIRE_THROWS_AS(spec_from_text("garbage"), std::invalid_argument);
    // duplicating a position must break the partition check
    std::string broken = text;
    const auto pos = broken.find("frozen_positions");
    broken.insert(pos + std::string("frozen_positions").size(), " 0");
    REQUIRE_THROWS_AS(spec_from_text(broken), std::invalid_argument);
}
