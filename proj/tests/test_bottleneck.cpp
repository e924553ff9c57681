#include <catch2/catch_amalgamated.hpp>

#include "invpers/bottleneck.hpp"
#include "oracles.hpp"

using namespace invpers;

namespace {

std::vector<RealBar> random_bars(unsigned seed, int max_bars) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<RealBar> out;
    int n = static_cast<int>(rng() % static_cast<unsigned>(max_bars + 1));
    for (int i = 0; i < n; ++i) {
        double a = u(rng), b = u(rng);
        out.push_back({std::min(a, b), std::max(a, b)});
    }
    return out;
}

}  // namespace

TEST_CASE("bottleneck distance basics") {
    std::vector<RealBar> b1 = {{0, 2}};
    CHECK(bottleneck_distance(b1, b1) == 0.0);
    CHECK(bottleneck_distance(b1, {}) == Catch::Approx(1.0));  // matched to the diagonal
    CHECK(bottleneck_distance({{0, 4}}, {{1, 5}}) == Catch::Approx(1.0));
    CHECK(bottleneck_distance({}, {}) == 0.0);
}

TEST_CASE("bottleneck agrees with the exhaustive matcher") {
    for (unsigned seed = 0; seed < 60; ++seed) {
        auto a = random_bars(2 * seed, 4);
        auto b = random_bars(2 * seed + 1, 4);
        double fast = bottleneck_distance(a, b);
        double slow = oracles::exhaustive_bottleneck(a, b);
        CHECK(fast == Catch::Approx(slow).margin(1e-12));
    }
}

TEST_CASE("bottleneck metric axioms on small barcodes") {
    std::vector<std::vector<RealBar>> sets;
    for (unsigned seed = 100; seed < 112; ++seed) sets.push_back(random_bars(seed, 4));
    for (const auto& a : sets) {
        CHECK(bottleneck_distance(a, a) == 0.0);
        for (const auto& b : sets) {
            double dab = bottleneck_distance(a, b);
            CHECK(dab == bottleneck_distance(b, a));
            CHECK(dab >= 0.0);
            for (const auto& c : sets)
                CHECK(dab <= bottleneck_distance(a, c) + bottleneck_distance(c, b) + 1e-12);
        }
    }
}

TEST_CASE("the reported matching realizes the distance") {
    auto a = random_bars(7, 4);
    auto b = random_bars(8, 4);
    BottleneckMatching match;
    double d = bottleneck_distance(a, b, &match);
    std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
    double realized = 0;
    for (auto [i, j] : match.pairs) {
        REQUIRE(i >= 0);
        REQUIRE(i < static_cast<int>(a.size()));
        REQUIRE(j >= 0);
        REQUIRE(j < static_cast<int>(b.size()));
        CHECK(!used_a[static_cast<std::size_t>(i)]);
        CHECK(!used_b[static_cast<std::size_t>(j)]);
        used_a[static_cast<std::size_t>(i)] = used_b[static_cast<std::size_t>(j)] = 1;
        realized = std::max(realized, linf_cost(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!used_a[i]) realized = std::max(realized, diagonal_cost(a[i]));
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!used_b[j]) realized = std::max(realized, diagonal_cost(b[j]));
    CHECK(realized == Catch::Approx(d).margin(1e-12));
}

TEST_CASE("barcode-level bottleneck uses the embedded scale") {
    Barcode a;
    a.dimension = 1;
    a.bars = {{2, 3, 1}};
    a.labels = {2, 3};
    a.label_values = {0.5, 0.125};  // eps-style, decreasing
    Barcode b = a;
    CHECK(bottleneck_distance(a, b, BarMapping::embedded) == 0.0);
    CHECK(bottleneck_distance(a, b, BarMapping::raw) == 0.0);

    Barcode c = a;
    c.label_values = {0.6, 0.125};
    CHECK(bottleneck_distance(a, c, BarMapping::embedded) == Catch::Approx(0.1));

    Barcode d;
    d.dimension = 0;
    CHECK_THROWS_AS(bottleneck_distance(a, d, BarMapping::raw), Error);
}

TEST_CASE("multiplicity expands into copies") {
    Barcode a;
    a.dimension = 1;
    a.bars = {{0, 2, 3}};
    auto bars = real_bars(a, BarMapping::raw);
    CHECK(bars.size() == 3);
    // three copies against two: one goes to the diagonal at cost 1
    Barcode b;
    b.dimension = 1;
    b.bars = {{0, 2, 2}};
    CHECK(bottleneck_distance(a, b, BarMapping::raw) == Catch::Approx(1.0));
}
