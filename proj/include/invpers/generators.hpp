#ifndef INVPERS_GENERATORS_HPP
#define INVPERS_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <set>

#include "invpers/metric_space.hpp"

namespace invpers {

/// A generated sample space together with its reference approximation
/// schedule: per-level epsilons, subsets A_n (indices into `space`), and the
/// closed-form gamma of the underlying continuum space where one is known.
struct GeneratedSpace {
    FiniteMetricSpace space;
    std::vector<double> epsilons;        // eps_1..eps_n; empty if no reference schedule
    std::vector<IndexSet> approximations;
    std::vector<double> continuum_gammas;
    std::string name;
};

namespace detail {

// Axis-aligned segment with dyadic endpoints, scaled by 2^scale_exp so that
// all coordinates are integers.
struct DyadicSegment {
    std::int64_t x0, y0, x1, y1;
};

// The Warsaw "ladder": three outer segments plus the four families a_m,
// b_m1, b_m2, c_m for every m whose coordinates are integral at this scale.
// Families beyond that resolution cannot meet the grid and are dropped.
inline std::vector<DyadicSegment> warsaw_segments(int scale_exp) {
    const std::int64_t S = std::int64_t(1) << scale_exp;
    std::vector<DyadicSegment> segs = {
        {0, S, 0, 0},  // left side
        {0, 0, S, 0},  // bottom
        {S, 0, S, S},  // right side
    };
    for (int m = 1; 2 * m - 1 <= scale_exp; ++m) {
        const std::int64_t xe = S >> (2 * m - 2);  // 1/2^(2m-2)
        const std::int64_t xo = S >> (2 * m - 1);  // 1/2^(2m-1)
        segs.push_back({xe, S, xo, S});            // a_m: top run
        if (m >= 2) segs.push_back({xe, S / 2, xe, S});  // b_m1: rail going up
        segs.push_back({xo, S, xo, S / 2});        // b_m2: rail going down
        if (2 * m <= scale_exp)
            segs.push_back({xo, S / 2, S >> (2 * m), S / 2});  // c_m: bottom run
    }
    return segs;
}

// Grid points (multiples of `step`) lying on W at the given scale.
inline std::set<std::pair<std::int64_t, std::int64_t>> warsaw_grid_points(int scale_exp, std::int64_t step) {
    std::set<std::pair<std::int64_t, std::int64_t>> pts;
    for (const auto& s : warsaw_segments(scale_exp)) {
        if (s.x0 == s.x1) {
            if (s.x0 % step) continue;
            auto [lo, hi] = std::minmax(s.y0, s.y1);
            for (std::int64_t y = ((lo + step - 1) / step) * step; y <= hi; y += step)
                pts.insert({s.x0, y});
        } else {
            if (s.y0 % step) continue;
            auto [lo, hi] = std::minmax(s.x0, s.x1);
            for (std::int64_t x = ((lo + step - 1) / step) * step; x <= hi; x += step)
                pts.insert({x, s.y0});
        }
    }
    return pts;
}

// A_k of the Warsaw construction, expressed at the scale of level n >= k.
inline std::set<std::pair<std::int64_t, std::int64_t>> warsaw_level_points(int k, int scale_exp) {
    if (k == 1) return {{0, 0}};
    const std::int64_t S = std::int64_t(1) << scale_exp;
    // grid side 1/2^(3k-4), centers at x = 1/2^(3k-3)
    auto pts = warsaw_grid_points(scale_exp, S >> (3 * k - 4));
    const std::int64_t cx = S >> (3 * k - 3);
    const std::int64_t n_centers = std::int64_t(1) << (3 * k - 5);
    for (std::int64_t kk = 1; kk <= n_centers; ++kk) pts.insert({cx, S - (2 * kk - 1) * cx});
    return pts;
}

inline std::string dyadic_label(std::int64_t x, std::int64_t y, int scale_exp) {
    auto one = [scale_exp](std::int64_t v) {
        std::int64_t num = v, den = std::int64_t(1) << scale_exp;
        while (num % 2 == 0 && den > 1) num /= 2, den /= 2;
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    };
    return one(x) + "," + one(y);
}

}  // namespace detail

/// Computational Warsaw circle sample A_n: the grid of side 1/2^(3n-4)
/// intersected with W, plus the 2^(3n-5) center points next to the
/// unresolved tail.  n = 1 degenerates to the single point (0,0).
inline GeneratedSpace sample_warsaw(int grid_level) {
    if (grid_level < 1) throw Error(Error::Kind::argument, "sample_warsaw: level must be >= 1");
    GeneratedSpace g;
    g.name = "warsaw:" + std::to_string(grid_level);
    const int n = grid_level;
    if (n == 1) {
        g.space = space_from_points({{0.0, 0.0}}, {"0,0"});
        g.epsilons = {2 * std::sqrt(2.0)};
        g.approximations = {{0}};
        g.continuum_gammas = {std::sqrt(2.0)};
        return g;
    }
    const int scale_exp = 3 * n - 3;
    const double S = static_cast<double>(std::int64_t(1) << scale_exp);
    auto pts = detail::warsaw_level_points(n, scale_exp);
    std::vector<std::vector<double>> coords;
    std::vector<std::string> ids;
    std::map<std::pair<std::int64_t, std::int64_t>, int> index_of;
    for (const auto& p : pts) {
        index_of[p] = static_cast<int>(coords.size());
        coords.push_back({static_cast<double>(p.first) / S, static_cast<double>(p.second) / S});
        ids.push_back(detail::dyadic_label(p.first, p.second, scale_exp));
    }
    g.space = space_from_points(std::move(coords), std::move(ids));
    for (int k = 1; k <= n; ++k) {
        // eps_1 = 2*sqrt(2) > diam; eps_k = sqrt(2)/2^(3k-3) afterwards
        g.epsilons.push_back(k == 1 ? 2 * std::sqrt(2.0)
                                    : std::sqrt(2.0) / static_cast<double>(std::int64_t(1) << (3 * k - 3)));
        g.continuum_gammas.push_back(k == 1 ? std::sqrt(2.0)
                                            : 1.0 / static_cast<double>(std::int64_t(1) << (3 * k - 3)));
        IndexSet a;
        for (const auto& p : detail::warsaw_level_points(k, scale_exp)) a.push_back(index_of.at(p));
        g.approximations.push_back(sorted_unique(std::move(a)));
    }
    return g;
}

/// Triadic subdivision of the unit interval: A_n = { k/3^(2n-3) }.
inline GeneratedSpace sample_triadic_interval(int level) {
    if (level < 1) throw Error(Error::Kind::argument, "sample_triadic_interval: level must be >= 1");
    GeneratedSpace g;
    g.name = "triadic:" + std::to_string(level);
    const int n = level;
    auto pow3 = [](int e) {
        std::int64_t v = 1;
        while (e-- > 0) v *= 3;
        return v;
    };
    if (n == 1) {
        g.space = space_from_points({{0.0}}, {"0"});
        g.epsilons = {2.0};
        g.approximations = {{0}};
        g.continuum_gammas = {1.0};
        return g;
    }
    const std::int64_t D = pow3(2 * n - 3);
    std::vector<std::vector<double>> coords;
    std::vector<std::string> ids;
    for (std::int64_t k = 0; k <= D; ++k) {
        coords.push_back({static_cast<double>(k) / static_cast<double>(D)});
        ids.push_back(std::to_string(k) + "/" + std::to_string(D));
    }
    g.space = space_from_points(std::move(coords), std::move(ids));
    for (int k = 1; k <= n; ++k) {
        if (k == 1) {
            g.epsilons.push_back(2.0);
            g.continuum_gammas.push_back(1.0);
            g.approximations.push_back({0});
            continue;
        }
        const std::int64_t Dk = pow3(2 * k - 3);
        g.epsilons.push_back(1.0 / static_cast<double>(Dk));
        g.continuum_gammas.push_back(0.5 / static_cast<double>(Dk));
        IndexSet a;
        const std::int64_t step = D / Dk;
        for (std::int64_t j = 0; j <= Dk; ++j) a.push_back(static_cast<int>(j * step));
        g.approximations.push_back(std::move(a));
    }
    return g;
}

/// Leaves of a depth-d binary tree with d(x,y) = 2^-(depth of the deepest
/// common ancestor).  The space is ultrametric; no reference schedule is
/// attached (use the disjoint-ball strategy to build approximations).
inline GeneratedSpace sample_ultrametric_cantor(int depth) {
    if (depth < 1) throw Error(Error::Kind::argument, "sample_ultrametric_cantor: depth must be >= 1");
    GeneratedSpace g;
    g.name = "cantor:" + std::to_string(depth);
    const int n = 1 << depth;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        std::string bits;
        for (int b = depth - 1; b >= 0; --b) bits += ((i >> b) & 1) ? '1' : '0';
        ids.push_back(bits);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int common = 0;
            for (int b = depth - 1; b >= 0; --b) {
                if (((i >> b) & 1) != ((j >> b) & 1)) break;
                ++common;
            }
            m[i][j] = std::ldexp(1.0, -common);  // 2^-common
        }
    g.space = space_from_matrix(std::move(m), std::move(ids));
    if (!g.space.ultrametric)
        throw Error(Error::Kind::internal, "cantor sample failed the strong triangle inequality");
    return g;
}

/// Parses "warsaw:<n>", "triadic:<n>", "cantor:<depth>".
inline GeneratedSpace generate_space(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error(Error::Kind::argument, "generator spec must look like name:<level>, got '" + spec + "'");
    std::string name = spec.substr(0, colon);
    int level = 0;
    try {
        level = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(Error::Kind::argument, "generator spec has a non-numeric level: '" + spec + "'");
    }
    if (name == "warsaw") return sample_warsaw(level);
    if (name == "triadic") return sample_triadic_interval(level);
    if (name == "cantor") return sample_ultrametric_cantor(level);
    throw Error(Error::Kind::argument, "unknown generator '" + name + "' (expected warsaw, triadic, cantor)");
}

}  // namespace invpers

#endif
