#include "doctest.h"

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "sqn/construction.hpp"

using namespace sqn;

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

double max_pairwise_overlap(const std::vector<ProductState>& states) {
    double worst = 0;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            worst = std::max(worst, std::abs(inner_product(states[i], states[j])));
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("construction");

TEST_CASE("subset enumeration by parity") {
    const auto odd4 = enumerate_subsets(4, Parity::Odd);
    REQUIRE(odd4.size() == 8);
    CHECK(odd4[0] == std::vector<int>{1});
    CHECK(odd4[1] == std::vector<int>{2});
    CHECK(odd4[2] == std::vector<int>{3});
    CHECK(odd4[3] == std::vector<int>{4});
    CHECK(odd4[4] == std::vector<int>{1, 2, 3});
    CHECK(odd4[5] == std::vector<int>{1, 2, 4});
    CHECK(odd4[6] == std::vector<int>{1, 3, 4});
    CHECK(odd4[7] == std::vector<int>{2, 3, 4});

    const auto odd2 = enumerate_subsets(2, Parity::Odd);
    CHECK(odd2 == std::vector<std::vector<int>>{{1}, {2}});

    const auto even5 = enumerate_subsets(5, Parity::Even);
    REQUIRE(even5.size() == 16);
    CHECK(even5.front().empty());
    CHECK(even5.back() == std::vector<int>{2, 3, 4, 5});

    for (int n : {2, 3, 4, 5, 6}) {
        CHECK(enumerate_subsets(n, Parity::Odd).size() == (1u << (n - 1)));
        CHECK(enumerate_subsets(n, Parity::Even).size() == (1u << (n - 1)));
    }
}

TEST_CASE("block recursion matches the worked 4-party cases") {
    const std::vector<int> dims{3, 3, 3, 3};
    CHECK(build_block({{1}, BlockClass::C}, dims) == test::make_block('C', {1}, "AZZZ"));
    CHECK(build_block({{2, 3, 4}, BlockClass::D}, dims) ==
          test::make_block('D', {2, 3, 4}, "TABA"));
    const std::vector<int> dims5{3, 3, 3, 3, 3};
    CHECK(build_block({{1, 2}, BlockClass::C}, dims5) ==
          test::make_block('C', {1, 2}, "ABTTT"));
    CHECK_THROWS_AS(build_block({{1}, BlockClass::C}, std::vector<int>{3, 2, 3}),
                    std::invalid_argument);
}

TEST_CASE("block expansion sizes and ordering") {
    const std::vector<int> dims{3, 3, 3, 3};
    const auto b = build_block({{1}, BlockClass::C}, dims);
    const auto states = expand_block(b, dims, 7);
    REQUIRE(states.size() == 2);
    CHECK(states[0].origin->block == 7);
    CHECK(states[0].origin->tuple == std::vector<int>{0});
    CHECK(states[1].origin->tuple == std::vector<int>{1});
    // eta_+ 0 0 0 then eta_- 0 0 0
    CHECK(states[0].factors[0].amps == std::vector<cx>{1.0, 1.0, 0.0});
    CHECK(states[1].factors[0].amps == std::vector<cx>{1.0, -1.0, 0.0});

    // empty q expands to the single fixed state
    const auto empty_block = build_block({{}, BlockClass::C}, {3, 3, 3});
    CHECK(expand_block(empty_block, {3, 3, 3}, 0).size() == 1);

    // mixed dims: q = {1,2} with d = (4,3,..) gives 3*2 states
    const std::vector<int> dims43{4, 3, 3, 3};
    const auto wide = build_block({{1, 2}, BlockClass::C}, dims43);
    CHECK(expand_block(wide, dims43, 0).size() == 6);
}

TEST_CASE("family cardinalities") {
    CHECK(cardinality({3, 3}) == 8);
    CHECK(cardinality({3, 3, 3, 3, 3, 3}) == 728);
    CHECK(cardinality({4, 4, 4, 4}) == 240);
    CHECK(cardinality({3, 3, 3, 4}) == 106);

    CHECK(expand_set(build_e(4)).size() == 80);
    CHECK(build_e(4).blocks.size() == 16);
    CHECK(expand_set(build_o({3, 3, 3, 3, 3})).size() == 242);
    CHECK(expand_set(build_f({3, 3, 3, 4})).size() == 106);
    CHECK(expand_set(build_f({4, 4, 4, 4})).size() == 240);

    // eight parties stays symbolic-cheap: 256 blocks, 3^8 - 1 states
    const StateSet e8 = build_e(8);
    CHECK(e8.blocks.size() == 256);
    long long total = 0;
    for (const auto& b : e8.blocks) total += b.expansion_size(e8.dims);
    CHECK(total == 6560);
    CHECK(cardinality(e8.dims) == 6560);

    CHECK_THROWS_AS(build_e(3), std::invalid_argument);
    CHECK_THROWS_AS(build_f({3, 3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(build_o({3, 3}), std::invalid_argument);
}

TEST_CASE("counting identity over odd subsets") {
    for (int n : {2, 4, 6, 8}) {
        long long total = 0;
        for (int i = 1; i <= n / 2; ++i)
            total += 2 * binom(n, 2 * i - 1) * (1LL << (2 * i - 1));
        long long power = 1;
        for (int k = 0; k < n; ++k) power *= 3;
        CHECK(total == power - 1);
    }
}

TEST_CASE("five-party reference family is reproduced verbatim") {
    const StateSet built = build_o({3, 3, 3, 3, 3});
    const StateSet expected = test::reference_o5();
    REQUIRE(built.blocks.size() == 32);
    for (std::size_t i = 0; i < 32; ++i) {
        CAPTURE(i);
        CHECK(built.blocks[i] == expected.blocks[i]);
    }
}

TEST_CASE("pairwise orthogonality of the built families") {
    CHECK(max_pairwise_overlap(expand_set(build_e(4))) < 1e-10);
    CHECK(max_pairwise_overlap(expand_set(build_o({3, 3, 3}))) < 1e-10);
    CHECK(max_pairwise_overlap(expand_set(build_f({3, 3, 3, 4}))) < 1e-10);
    CHECK(max_pairwise_overlap(expand_set(build_f({4, 3, 4, 5}))) < 1e-9);
}

TEST_CASE("every amplitude on a block's box is nonzero") {
    for (const auto& dims :
         {std::vector<int>{3, 3, 3, 3}, std::vector<int>{3, 4, 3, 5}}) {
        const StateSet set = build_f(dims);
        for (const auto& s : expand_set(set)) {
            for (const auto& f : s.factors) {
                bool on_support = false;
                for (const auto& a : f.amps) {
                    if (std::abs(a) > 0) on_support = true;
                }
                CHECK(on_support);
                // nonzero amplitudes all have modulus 1
                for (const auto& a : f.amps)
                    if (std::abs(a) > 0) CHECK(std::abs(a) == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("all-qutrit general family coincides with the qutrit builder") {
    const StateSet e4 = build_e(4);
    const StateSet f4 = build_f({3, 3, 3, 3});
    REQUIRE(e4.blocks.size() == f4.blocks.size());
    for (std::size_t i = 0; i < e4.blocks.size(); ++i) CHECK(e4.blocks[i] == f4.blocks[i]);
}

TEST_CASE("canonical order sorts class then size then lexicographic") {
    StateSet s = build_e(4);
    // scramble and re-canonicalize
    std::reverse(s.blocks.begin(), s.blocks.end());
    canonicalize(s);
    CHECK(s.blocks.front().spec.cls == BlockClass::C);
    CHECK(s.blocks.front().spec.q == std::vector<int>{1});
    CHECK(s.blocks.back().spec.cls == BlockClass::D);
    CHECK(s.blocks.back().spec.q == std::vector<int>{2, 3, 4});
}

TEST_SUITE_END();
