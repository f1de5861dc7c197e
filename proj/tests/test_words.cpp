#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "atnlab/rng.hpp"
#include "atnlab/words.hpp"

using namespace atnlab;

namespace {

FunnyWord random_word(const Support& support, int k, Rng& rng) {
    std::vector<int> symbols(support.size());
    for (int& s : symbols) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    return {support, std::move(symbols)};
}

Support random_support(Rng& rng, std::size_t size) {
    std::vector<std::int64_t> idx;
    std::int64_t v = static_cast<std::int64_t>(rng.below(7)) - 3;
    for (std::size_t i = 0; i < size; ++i) {
        idx.push_back(v);
        v += 1 + static_cast<std::int64_t>(rng.below(3));
    }
    return Support(std::move(idx));
}

} // namespace

TEST_CASE("support construction sorts and rejects duplicates") {
    const Support s({3, -1, 2});
    CHECK_EQ(s.indices(), std::vector<std::int64_t>{-1, 2, 3});
    CHECK_THROWS_AS(Support({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Support({}), std::invalid_argument);
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(0));
    CHECK(Support({2, 3}).is_subset_of(s));
    CHECK_FALSE(Support({0}).is_subset_of(s));
    CHECK_EQ(s.position_of(3), 2);
    CHECK_THROWS_AS(s.position_of(7), std::invalid_argument);
}

TEST_CASE("shift_support translates indices") {
    CHECK_EQ(shift_support(Support({0, 1, 2}), 3), Support({3, 4, 5}));
    const Support s({-1, 4});
    CHECK_EQ(shift_support(s, 0), s);
    CHECK_EQ(shift_support(s, -4), Support({-5, 0}));
    CHECK_EQ(shift_support(s, 2).size(), s.size());
}

TEST_CASE("hamming distance on fixed examples") {
    const Support lambda({-1, 0, 1});
    const FunnyWord w(lambda, {0, 1, 0});
    CHECK_EQ(hamming_distance(w, w), Rational(0, 1));
    CHECK_EQ(hamming_distance(w, FunnyWord(lambda, {0, 1, 1})), Rational(1, 3));

    const Support five = Support::interval(0, 4);
    const FunnyWord a(five, {0, 0, 0, 0, 0});
    const FunnyWord b(five, {1, 1, 1, 1, 1});
    CHECK_EQ(hamming_distance(a, b), Rational(1, 1));

    CHECK_THROWS_WITH_AS(hamming_distance(w, a), "support mismatch", std::invalid_argument);
}

TEST_CASE("hamming distance is a metric and translation invariant") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t size = 1 + rng.below(20);
        const int k = 2 + static_cast<int>(rng.below(4));
        const Support support = random_support(rng, size);
        const FunnyWord a = random_word(support, k, rng);
        const FunnyWord b = random_word(support, k, rng);
        const FunnyWord c = random_word(support, k, rng);
        const Rational ab = hamming_distance(a, b);
        const Rational bc = hamming_distance(b, c);
        const Rational ac = hamming_distance(a, c);
        CHECK_EQ(ab, hamming_distance(b, a));
        CHECK_EQ(hamming_distance(a, a), Rational(0, 1));
        CHECK((ab == Rational(0, 1)) == (a == b));
        // common denominator |support|: triangle inequality on mismatch counts
        CHECK(ac.numerator() * ab.denominator() * bc.denominator() <=
              ab.numerator() * ac.denominator() * bc.denominator() +
                  bc.numerator() * ac.denominator() * ab.denominator());
        const std::int64_t t = static_cast<std::int64_t>(rng.below(21)) - 10;
        CHECK_EQ(hamming_distance(shift_word(a, t), shift_word(b, t)), ab);
    }
}

TEST_CASE("restrict picks coordinates in support order") {
    const Word x(0, {4, 5, 6});
    const FunnyWord r = restrict_word(x, Support({0, 2}));
    CHECK_EQ(r.symbols(), std::vector<int>{4, 6});
    CHECK_EQ(r.support(), Support({0, 2}));

    const FunnyWord full = restrict_word(x, Support::interval(0, 2));
    CHECK_EQ(full, x.as_funny());

    CHECK_THROWS_WITH_AS(restrict_word(x, Support({5})), "support out of range",
                         std::invalid_argument);
    CHECK_THROWS_AS(restrict_word(x, Support({-1, 0})), std::invalid_argument);
}

TEST_CASE("restriction composes through intermediate intervals") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 4 + rng.below(8);
        std::vector<int> symbols(len);
        for (int& s : symbols) s = static_cast<int>(rng.below(3));
        const Word x(-2, symbols);
        const std::int64_t a = x.start() + static_cast<std::int64_t>(rng.below(2));
        const std::int64_t b = x.window().last - static_cast<std::int64_t>(rng.below(2));
        if (b < a) continue;
        const Support mid = Support::interval(a, b); // interval superset
        std::vector<std::int64_t> inner_idx;
        for (std::int64_t i = a; i <= b; ++i)
            if (rng.below(2) == 0) inner_idx.push_back(i);
        if (inner_idx.empty()) inner_idx.push_back(a);
        const Support inner(inner_idx);
        const FunnyWord via = restrict_word(
            Word(a, restrict_word(x, mid).symbols()), inner);
        CHECK_EQ(via, restrict_word(x, inner));
    }
}

TEST_CASE("funny word text serialization round trips") {
    const FunnyWord w(Support({-1, 0, 2}), {0, 1, 0});
    const std::string text = to_text(w);
    CHECK_EQ(text, "Λ=[-1,0,2]; W=[1,2,1]");
    CHECK_EQ(funny_word_from_text(text), w);
    CHECK_EQ(funny_word_from_text("L=[0,2]; W=[1,3]"), FunnyWord(Support({0, 2}), {0, 2}));
    CHECK_THROWS_AS(funny_word_from_text("W=[1]"), std::invalid_argument);
    CHECK_THROWS_AS(funny_word_from_text("L=[0]; W=[0]"), std::invalid_argument); // 1-based
}

TEST_CASE("rational comparison against doubles is exact") {
    // double(0.1) is strictly above 1/10, double(1/3) strictly below 1/3
    CHECK(Rational(1, 10).less_than(0.1));
    CHECK_FALSE(Rational(1, 3).less_than(1.0 / 3.0));
    CHECK(Rational(1, 4).less_than(0.25) == false); // exactly representable
    CHECK(Rational(0, 5).less_than(1e-300));
    CHECK_FALSE(Rational(1, 2).less_than(0.5));
    CHECK(Rational(1, 2).less_than(0.5000000000000001));
    CHECK(Rational(3, 7).less_than(1.0));
    CHECK_FALSE(Rational(3, 7).less_than(0.0));
}

TEST_CASE("mismatch budget matches the strict inequality, boundaries included") {
    CHECK_EQ(mismatch_budget(4, 0.3), 1);
    CHECK_EQ(mismatch_budget(12, 0.25), 2);  // 3.0 exact: strict < excludes 3
    CHECK_EQ(mismatch_budget(8, 0.25), 1);
    CHECK_EQ(mismatch_budget(10, 0.5), 4);
    CHECK_EQ(mismatch_budget(12, 1.0 / 3.0), 3);
    CHECK_EQ(mismatch_budget(50, 0.1), 5);   // double(0.1)*50 is above 5
    CHECK_EQ(mismatch_budget(7, 1e-12), 0);
    CHECK_EQ(mismatch_budget(5, 0.999999), 4);

    Rng rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::int64_t m = 1 + static_cast<std::int64_t>(rng.below(64));
        double eps = rng.uniform01();
        if (eps == 0.0) eps = 0.5;
        const int budget = mismatch_budget(m, eps);
        for (int j = 0; j <= m; ++j)
            CHECK_EQ(Rational(j, m).less_than(eps), j <= budget);
    }
}
