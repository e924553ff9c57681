#include <catch2/catch_amalgamated.hpp>

#include "invpers/fas.hpp"
#include "invpers/generators.hpp"
#include "oracles.hpp"

using namespace invpers;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("epsilon_approximation strategies") {
    auto g = sample_triadic_interval(3);
    const auto& s = g.space;

    SECTION("a given valid subset is accepted unchanged") {
        IndexSet a2 = g.approximations[1];  // {k/3}
        CHECK(epsilon_approximation(s, 1.0 / 3, ApproxStrategy::given, &a2) == a2);
    }
    SECTION("given subsets that do not cover are rejected with the witnesses") {
        IndexSet just_zero = {0};
        CHECK_THROWS_MATCHES(epsilon_approximation(s, 1.0 / 3, ApproxStrategy::given, &just_zero), Error,
                             Catch::Matchers::MessageMatches(ContainsSubstring("uncovered")));
    }
    SECTION("epsilon above the diameter admits a single greedy point") {
        IndexSet a = epsilon_approximation(s, 1.5 * s.diameter() + 1, ApproxStrategy::greedy);
        CHECK(a.size() == 1);
    }
    SECTION("all-points is always valid") {
        IndexSet a = epsilon_approximation(s, 1e-6, ApproxStrategy::all_points);
        CHECK(static_cast<int>(a.size()) == s.size());
        CHECK(gamma_of(s, a) == 0.0);
    }
    SECTION("greedy is deterministic in the seed") {
        auto a = epsilon_approximation(s, 0.1, ApproxStrategy::greedy, nullptr, 5);
        auto b = epsilon_approximation(s, 0.1, ApproxStrategy::greedy, nullptr, 5);
        CHECK(a == b);
        for (int x = 0; x < s.size(); ++x) CHECK(dist_to_set(s, x, a) < 0.1);
    }
}

TEST_CASE("gamma_of values") {
    auto g3 = sample_triadic_interval(3);
    CHECK(gamma_of(g3.space, g3.approximations[1]) == Catch::Approx(4.0 / 27).margin(1e-12));
    IndexSet all(static_cast<std::size_t>(g3.space.size()));
    std::iota(all.begin(), all.end(), 0);
    CHECK(gamma_of(g3.space, all) == 0.0);

    // on the level-3 Warsaw sample the reference A_2 attains gamma = 1/8 exactly
    auto w3 = sample_warsaw(3);
    double gw = gamma_of(w3.space, w3.approximations[1]);
    CHECK(gw == Catch::Approx(1.0 / 8).margin(1e-12));
    CHECK(gw <= w3.continuum_gammas[1] + 1e-12);
}

TEST_CASE("adjusted_bound") {
    CHECK(adjusted_bound(1.0 / 3, 1.0 / 6) == Catch::Approx(1.0 / 12));
    CHECK(1.0 / 27 < adjusted_bound(1.0 / 3, 1.0 / 6));
    CHECK(adjusted_bound(0.5, 0.0) == Catch::Approx(0.25));
    double e2 = std::sqrt(2.0) / 8, g2 = 1.0 / 8;
    CHECK(adjusted_bound(e2, g2) == Catch::Approx((std::sqrt(2.0) - 1) / 16));
    CHECK(std::sqrt(2.0) / 64 < adjusted_bound(e2, g2));
    CHECK_THROWS_AS(adjusted_bound(0.1, 0.1), Error);
    CHECK_THROWS_AS(adjusted_bound(0.1, 0.2), Error);
}

TEST_CASE("nearby_set ties and membership") {
    auto f = oracles::triadic_with_midpoint(2);  // {0,1/3,2/3,1, 1/2}
    IndexSet a2 = f.approximations[1];
    IndexSet near_mid = nearby_set(f.space, a2, f.midpoint);
    CHECK(near_mid == IndexSet{1, 2});  // {1/3, 2/3} both minimize
    CHECK(nearby_set(f.space, a2, 1) == IndexSet{1});  // member maps to itself
}

TEST_CASE("transition_image on the triadic sequence") {
    auto f = oracles::triadic_with_midpoint(3);
    FasSequence fas = oracles::triadic_midpoint_fas(f);
    REQUIRE(fas.last_level() == 4);
    REQUIRE(fas.stabilized_at == 4);

    // indices in the sample: grid point k/27 has index k
    SECTION("singleton reduces to the nearby set") {
        CHECK(transition_image(fas, 2, {1}) == IndexSet{0});   // 1/27 -> {0}
        CHECK(transition_image(fas, 2, {13}) == IndexSet{9});  // 13/27 -> {1/3}
    }
    SECTION("pairs take unions") {
        CHECK(transition_image(fas, 2, {1, 2}) == IndexSet{0});
        CHECK(transition_image(fas, 2, {13, 14}) == IndexSet{9, 18});  // -> {1/3, 2/3}
    }
    SECTION("diameter precondition") {
        CHECK_THROWS_AS(transition_image(fas, 2, {0, 27}), Error);
    }
}

TEST_CASE("build_fas validates explicit schedules") {
    auto g = sample_triadic_interval(2);
    FasOptions opt;
    opt.explicit_epsilons = {2.0, 0.9};  // 0.9 >= (2-1)/2
    opt.strategy = ApproxStrategy::given;
    opt.given_levels = g.approximations;
    opt.max_levels = 2;
    CHECK_THROWS_MATCHES(build_fas(g.space, opt), Error,
                         Catch::Matchers::MessageMatches(ContainsSubstring("level 2")));
}

TEST_CASE("build_fas rejects gamma overrides below the sample value") {
    auto g = sample_triadic_interval(2);
    FasOptions opt;
    opt.explicit_epsilons = g.epsilons;
    opt.strategy = ApproxStrategy::given;
    opt.given_levels = g.approximations;
    opt.max_levels = 2;
    opt.gamma_override = {{1, 0.5}};  // sample gamma_1 = 1
    CHECK_THROWS_AS(build_fas(g.space, opt), Error);
}

TEST_CASE("gamma override feeds the schedule bounds") {
    auto g = sample_triadic_interval(3);
    FasOptions opt;
    opt.explicit_epsilons = g.epsilons;
    opt.strategy = ApproxStrategy::given;
    opt.given_levels = g.approximations;
    opt.max_levels = 3;
    opt.gamma_override = {{2, 1.0 / 6}};  // continuum value, above the sample max 4/27
    FasSequence fas = build_fas(g.space, opt);
    CHECK(fas.level(2).gamma == Catch::Approx(4.0 / 27));
    CHECK(fas.level(2).gamma_used == Catch::Approx(1.0 / 6));
    CHECK(fas.level(2).eps_upper() == Catch::Approx((1.0 / 3 + 1.0 / 6) / 2));
}

TEST_CASE("schedule invariants hold on built sequences") {
    std::vector<FasSequence> built;
    {
        auto f = oracles::triadic_with_midpoint(3);
        built.push_back(oracles::triadic_midpoint_fas(f));
    }
    {
        auto w = sample_warsaw(3);
        FasOptions opt;
        opt.explicit_epsilons = w.epsilons;
        opt.strategy = ApproxStrategy::given;
        opt.given_levels = w.approximations;
        opt.max_levels = 4;
        built.push_back(build_fas(w.space, opt));
    }
    {
        FasOptions opt;
        opt.max_levels = 12;
        built.push_back(build_fas(oracles::random_cloud(3, 10), opt));
    }
    for (const auto& fas : built) {
        const auto& lv = fas.levels;
        for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
            CHECK(lv[i + 1].epsilon < (lv[i].epsilon - lv[i].gamma_used) / 2);  // adjustedness
            CHECK(lv[i + 1].epsilon < lv[i].epsilon);
        }
        for (std::size_t i = 1; i < lv.size(); ++i)
            CHECK(lv[i].epsilon < lv[0].epsilon / std::ldexp(1.0, static_cast<int>(i)));  // decay
        for (std::size_t n = 0; n < lv.size(); ++n) {
            double acc = 0;
            for (std::size_t m = n; m < lv.size(); ++m) {
                acc += lv[m].gamma_used;
                if (m > n) CHECK(acc < lv[n].eps_upper());  // partial-sum bound
            }
        }
        for (const auto& l : lv) {
            CHECK(l.gamma_used < l.epsilon);
            CHECK(l.eps_upper() + l.eps_lower() == Catch::Approx(l.epsilon));
        }
    }
}

TEST_CASE("auto schedule on a random cloud stabilizes") {
    auto s = oracles::random_cloud(42, 10);
    FasOptions opt;
    opt.max_levels = 16;
    FasSequence fas = build_fas(s, opt);
    REQUIRE(fas.stabilized_at.has_value());
    int st = *fas.stabilized_at;
    CHECK(st == fas.last_level());
    CHECK(static_cast<int>(fas.level(st).approx.size()) == s.size());  // A_s = X
    CHECK(2 * fas.level(st).epsilon < s.min_positive_distance());      // U all singletons
    // nearest sets of the last transition land on singletons at the stabilized level
    for (int x = 0; x < s.size(); ++x) CHECK(nearby_set(s, fas.level(st).approx, x) == IndexSet{x});
}

TEST_CASE("nearby-map locality: A(y) subset of A(x) near x") {
    struct Fixture {
        FiniteMetricSpace space;
        IndexSet a;
    };
    std::vector<Fixture> fixtures;
    {
        auto f = oracles::triadic_with_midpoint(3);
        fixtures.push_back({f.space, f.approximations[1]});
    }
    {
        auto w = sample_warsaw(2);
        fixtures.push_back({w.space, w.approximations[1]});
    }
    for (const auto& [space, a] : fixtures) {
        for (int x = 0; x < space.size(); ++x) {
            IndexSet ax = nearby_set(space, a, x);
            IndexSet rest;
            for (int p : a)
                if (!std::binary_search(ax.begin(), ax.end(), p)) rest.push_back(p);
            if (rest.empty()) continue;  // A(x) = A, nothing to show
            double delta_minus = dist_to_set(space, x, a);
            double delta_plus = dist_to_set(space, x, rest);
            double delta = (delta_plus - delta_minus) / 2;
            REQUIRE(delta > 0);
            // open ball with the library's tie guard: points within tol of the
            // radius are boundary points and fall outside the strict ball
            for (int y = 0; y < space.size(); ++y)
                if (space.d(x, y) < delta - 1e-9) CHECK(subset_of(nearby_set(space, a, y), ax));
        }
    }
}

TEST_CASE("chain proximity: points of p_{n,m}({a_m}) stay within eps_upper_n") {
    auto f = oracles::triadic_with_midpoint(3);
    FasSequence fas = oracles::triadic_midpoint_fas(f);
    for (int m = 2; m <= fas.last_level(); ++m)
        for (int n = 1; n < m; ++n)
            for (int am : fas.level(m).approx) {
                IndexSet img = transition_image_iterated(fas, n, m, {am});
                for (int an : img) CHECK(fas.space.d(an, am) < fas.level(n).eps_upper());
            }
}

TEST_CASE("ultrametric approximations have disjoint balls") {
    auto g = sample_ultrametric_cantor(3);
    const auto& s = g.space;

    IndexSet a06 = ultrametric_approximation(s, 0.6);
    CHECK(a06.size() == 2);
    IndexSet a03 = ultrametric_approximation(s, 0.3);
    CHECK(a03.size() == 4);
    IndexSet a2 = ultrametric_approximation(s, 2.0);
    CHECK(a2.size() == 1);

    for (const auto& [a, eps] : {std::pair<IndexSet, double>{a06, 0.6}, {a03, 0.3}}) {
        // coverage
        for (int x = 0; x < s.size(); ++x) CHECK(dist_to_set(s, x, a) < eps);
        // exhaustive ball disjointness
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j)
                for (int y = 0; y < s.size(); ++y)
                    CHECK_FALSE((s.d(y, a[i]) < eps && s.d(y, a[j]) < eps));
    }

    auto euclid = oracles::random_cloud(1, 5);
    CHECK_THROWS_AS(ultrametric_approximation(euclid, 0.5), Error);
}

TEST_CASE("nearby sets are singletons along a disjoint-ball sequence") {
    auto g = sample_ultrametric_cantor(4);
    const auto& s = g.space;
    FasOptions opt;
    opt.explicit_epsilons = {2.2, 0.55};
    opt.strategy = ApproxStrategy::ultrametric;
    opt.max_levels = 4;
    FasSequence fas = build_fas(s, opt);
    REQUIRE(fas.stabilized_at.has_value());
    for (const auto& lv : fas.levels)
        for (int x = 0; x < s.size(); ++x) CHECK(nearby_set(s, lv.approx, x).size() == 1);
}

TEST_CASE("trace_point on the triadic sequence") {
    auto f = oracles::triadic_with_midpoint(3);
    FasSequence fas = oracles::triadic_midpoint_fas(f);
    const int depth = fas.last_level();

    SECTION("x = 0 traces to {0} at every level") {
        TraceResult tr = trace_point(fas, 0, depth);
        for (const auto& lv : tr.levels) {
            CHECK(lv.x_star == IndexSet{0});
            CHECK(lv.stabilized);
            CHECK(lv.hausdorff_to_x < fas.level(lv.level).epsilon);
        }
    }
    SECTION("x = 1/2 traces to the two middle grid points") {
        TraceResult tr = trace_point(fas, f.midpoint, depth);
        CHECK(tr.levels[0].x_star == IndexSet{0});
        CHECK(tr.levels[1].x_star == IndexSet{9, 18});    // {1/3, 2/3}
        CHECK(tr.levels[2].x_star == IndexSet{13, 14});   // {13/27, 14/27}
        CHECK(tr.levels[3].x_star == IndexSet{f.midpoint});
        for (const auto& lv : tr.levels) CHECK(lv.hausdorff_to_x < fas.level(lv.level).epsilon);
    }
    SECTION("a grid point traces to itself from its first level on") {
        TraceResult tr = trace_point(fas, 9, depth);  // 1/3
        for (const auto& lv : tr.levels)
            if (lv.level >= 2) CHECK(lv.x_star == IndexSet{9});
    }
    SECTION("depth beyond the built range is an error") {
        CHECK_THROWS_AS(trace_point(fas, 0, depth + 1), Error);
    }
    SECTION("unstabilized truncations are flagged, not asserted") {
        FasOptions opt;
        opt.explicit_epsilons = f.epsilons;
        opt.strategy = ApproxStrategy::given;
        opt.given_levels = f.approximations;
        opt.max_levels = 3;  // stop before stabilization
        FasSequence shallow = build_fas(f.space, opt);
        CHECK_FALSE(shallow.stabilized_at.has_value());
        TraceResult tr = trace_point(shallow, f.midpoint, 3);
        for (const auto& lv : tr.levels) CHECK_FALSE(lv.stabilized);
        CHECK(tr.levels[1].x_star == IndexSet{9, 18});  // values still correct
    }
}
