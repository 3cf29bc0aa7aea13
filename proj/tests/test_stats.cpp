#include <catch2/catch_amalgamated.hpp>

#include "dmiat/stats.hpp"

using namespace dmiat;
using Catch::Matchers::WithinAbs;

namespace {
ClassDistribution dist(std::vector<std::int64_t> counts) {
    ClassDistribution d;
    d.counts = std::move(counts);
    for (auto c : d.counts) d.total += c;
    return d;
}
}   // namespace

TEST_CASE("entropy: pure, uniform, 40/60") {
    CHECK(entropy(dist({10})) == 0.0);
    CHECK_THAT(entropy(dist({5, 5})), WithinAbs(1.0, 1e-12));
    // direct evaluation of -0.4 log2 0.4 - 0.6 log2 0.6
    CHECK_THAT(entropy(dist({40, 60})), WithinAbs(0.97095, 5e-6));
    CHECK_THROWS_AS(entropy(dist({0, 0})), std::domain_error);
}

TEST_CASE("entropy stays within the class-count bound") {
    CHECK(entropy(dist({3, 3, 3})) <= std::log2(3.0) + 1e-12);
    CHECK(entropy(dist({1, 0, 7, 0})) <= 1.0 + 1e-12);   // two nonzero classes
}

TEST_CASE("lift: worked example and neutral subset") {
    // 40-of-100 in the subset vs 50-of-1000 overall
    CHECK_THAT(lift(dist({40, 60}), dist({50, 950}), 0), WithinAbs(8.0, 1e-12));
    const auto whole = dist({12, 30, 58});
    CHECK_THAT(lift(whole, whole, 1), WithinAbs(1.0, 1e-12));
}

TEST_CASE("lift: 23-of-33 subset with a ~0.1 base rate lands near 7") {
    const auto sub = dist({23, 10});
    const auto whole = dist({20, 180});
    CHECK_THAT(lift(sub, whole, 0), WithinAbs(6.97, 0.01));
}

TEST_CASE("lift domain errors") {
    CHECK_THROWS_AS(lift(dist({0, 0}), dist({5, 5}), 0), std::domain_error);
    CHECK_THROWS_AS(lift(dist({1, 1}), dist({0, 5}), 0), std::domain_error);
}
