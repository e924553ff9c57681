#ifndef INVPERS_FAS_HPP
#define INVPERS_FAS_HPP

#include <map>
#include <numeric>
#include <optional>
#include <random>

#include "invpers/metric_space.hpp"

namespace invpers {

/// One level of a finite approximative sequence: scale eps_n, approximation
/// A_n, and the worst covering distance gamma_n.  `gamma` is the exact max
/// over sample points; `gamma_used` is the value the schedule was validated
/// against (differs only under an explicit override).
struct ApproximationLevel {
    int index = 0;  // 1-based level number
    double epsilon = 0;
    IndexSet approx;
    double gamma = 0;
    double gamma_used = 0;

    double eps_upper() const { return (epsilon + gamma_used) / 2; }
    double eps_lower() const { return (epsilon - gamma_used) / 2; }
};

/// A finite approximative sequence over a fixed sample space: levels with
/// strictly decreasing adjusted epsilons plus the nearby-map transition data
/// (for each a' in A_{n+1}, its set of nearest points in A_n).
struct FasSequence {
    FiniteMetricSpace space;
    std::vector<ApproximationLevel> levels;
    // nearest_sets[l][j]: the subset of levels[l].approx nearest to the j-th
    // member of levels[l+1].approx (the data of p_{l+1, l+2} in 1-based
    // level numbers)
    std::vector<std::vector<IndexSet>> nearest_sets;
    std::optional<int> stabilized_at;  // first level with A = X and singleton U
    Tol tol;

    int last_level() const { return levels.empty() ? 0 : levels.back().index; }

    const ApproximationLevel& level(int n) const {
        if (n < 1 || n > last_level())
            throw Error(Error::Kind::argument, "level " + std::to_string(n) + " not built");
        return levels[static_cast<std::size_t>(n - 1)];
    }
};

enum class ApproxStrategy {
    greedy,       // farthest-point insertion until covered
    all_points,   // A = X
    given,        // per-level subsets supplied by the caller, verified
    ultrametric,  // greedy disjoint-ball sweep (ultrametric spaces only)
};

struct FasOptions {
    std::vector<double> explicit_epsilons;  // consumed first; may be empty
    double auto_factor = 0.9;               // eps_{n+1} = c * (eps_n - gamma_n)/2 past the list
    ApproxStrategy strategy = ApproxStrategy::greedy;
    std::vector<IndexSet> given_levels;     // for ApproxStrategy::given
    int max_levels = 8;
    std::map<int, double> gamma_override;   // level -> gamma to use for the schedule
    unsigned seed = 0;                      // greedy start point selection
    Tol tol;
};

/// gamma = max over all sample points of the distance to A; 0 iff A = X.
inline double gamma_of(const FiniteMetricSpace& s, const IndexSet& a) {
    if (a.empty()) throw Error(Error::Kind::argument, "gamma_of: empty approximation");
    double g = 0;
    for (int x = 0; x < s.size(); ++x) g = std::max(g, dist_to_set(s, x, a));
    return g;
}

/// Threshold below which the next scale must stay for the nearby maps to be
/// well defined: (eps - gamma)/2.
inline double adjusted_bound(double epsilon, double gamma) {
    if (!(gamma < epsilon))
        throw Error(Error::Kind::validation, "adjusted_bound: gamma must be strictly below epsilon");
    return (epsilon - gamma) / 2;
}

/// A(x): the set of points of A realizing the minimum distance to x, with
/// everything within tol.tie of the minimum included.  If x itself lies in A
/// the result is exactly {x}.
inline IndexSet nearby_set(const FiniteMetricSpace& s, const IndexSet& a, int x, Tol tol = {}) {
    if (a.empty()) throw Error(Error::Kind::argument, "nearby_set: empty approximation");
    double best = dist_to_set(s, x, a);
    if (best == 0.0) return {x};
    IndexSet out;
    for (int cand : a)
        if (s.d(x, cand) <= best + tol.tie) out.push_back(cand);
    return out;
}

inline IndexSet uncovered_points(const FiniteMetricSpace& s, const IndexSet& a, double epsilon, Tol tol) {
    IndexSet out;
    for (int x = 0; x < s.size(); ++x)
        if (!tol.lt(dist_to_set(s, x, a), epsilon)) out.push_back(x);
    return out;
}

/// Builds an eps-approximation: a subset A with every point of the space
/// strictly within eps of A.
inline IndexSet epsilon_approximation(const FiniteMetricSpace& s, double epsilon,
                                      ApproxStrategy strategy = ApproxStrategy::greedy,
                                      const IndexSet* given = nullptr, unsigned seed = 0, Tol tol = {}) {
    if (!(epsilon > 0)) throw Error(Error::Kind::argument, "epsilon_approximation: epsilon must be positive");
    const int n = s.size();
    switch (strategy) {
        case ApproxStrategy::all_points: {
            IndexSet all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        case ApproxStrategy::given: {
            if (!given) throw Error(Error::Kind::argument, "epsilon_approximation: no subset supplied");
            IndexSet a = sorted_unique(*given);
            if (a.empty() || a.front() < 0 || a.back() >= n)
                throw Error(Error::Kind::argument, "epsilon_approximation: invalid subset");
            IndexSet bad = uncovered_points(s, a, epsilon, tol);
            if (!bad.empty()) {
                std::string msg = "subset is not an epsilon-approximation; uncovered points:";
                for (int x : bad) msg += " " + s.point_ids[static_cast<std::size_t>(x)];
                throw Error(Error::Kind::validation, msg);
            }
            return a;
        }
        case ApproxStrategy::ultrametric: {
            if (!s.ultrametric)
                throw Error(Error::Kind::precondition,
                            "disjoint-ball approximation requires an ultrametric space");
            IndexSet chosen;
            for (int x = 0; x < n; ++x) {
                bool inside = false;
                for (int c : chosen)
                    if (tol.lt(s.d(x, c), epsilon)) { inside = true; break; }
                if (!inside) chosen.push_back(x);
            }
            return chosen;
        }
        case ApproxStrategy::greedy:
        default: {
            std::mt19937 rng(seed);
            int start = static_cast<int>(rng() % static_cast<unsigned>(n));
            IndexSet a = {start};
            std::vector<double> mind(static_cast<std::size_t>(n));
            for (int x = 0; x < n; ++x) mind[static_cast<std::size_t>(x)] = s.d(x, start);
            while (true) {
                int far = 0;
                for (int x = 1; x < n; ++x)
                    if (mind[static_cast<std::size_t>(x)] > mind[static_cast<std::size_t>(far)]) far = x;
                if (tol.lt(mind[static_cast<std::size_t>(far)], epsilon)) break;
                a.push_back(far);
                for (int x = 0; x < n; ++x)
                    mind[static_cast<std::size_t>(x)] = std::min(mind[static_cast<std::size_t>(x)], s.d(x, far));
            }
            return sorted_unique(std::move(a));
        }
    }
}

/// eps-approximation of an ultrametric space whose eps-balls are pairwise
/// disjoint (greedy sweep; the strong triangle inequality guarantees
/// disjointness).
inline IndexSet ultrametric_approximation(const FiniteMetricSpace& s, double epsilon, Tol tol = {}) {
    return epsilon_approximation(s, epsilon, ApproxStrategy::ultrametric, nullptr, 0, tol);
}

namespace detail {

inline void validate_fas_invariants(const FasSequence& fas) {
    const auto& lv = fas.levels;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        if (!(lv[i].gamma_used < lv[i].epsilon))
            throw Error(Error::Kind::internal, "fas invariant: gamma >= epsilon at level " +
                                                   std::to_string(lv[i].index));
        if (i > 0 && !(lv[i].epsilon < (lv[i - 1].epsilon - lv[i - 1].gamma_used) / 2))
            throw Error(Error::Kind::internal,
                        "fas invariant: adjustedness fails at level " + std::to_string(lv[i].index));
        if (i > 0 && !(lv[i].epsilon < lv[0].epsilon / std::ldexp(1.0, static_cast<int>(i))))
            throw Error(Error::Kind::internal,
                        "fas invariant: geometric decay fails at level " + std::to_string(lv[i].index));
    }
    // partial-sum bound: sum_{l=n..m} gamma_l < (eps_n + gamma_n)/2
    for (std::size_t n = 0; n < lv.size(); ++n) {
        double acc = 0;
        for (std::size_t m = n; m < lv.size(); ++m) {
            acc += lv[m].gamma_used;
            if (m > n && !(acc < lv[n].eps_upper()))
                throw Error(Error::Kind::internal, "fas invariant: partial gamma sum exceeds eps_upper");
        }
    }
}

}  // namespace detail

/// Runs the level-by-level construction: choose A_n for eps_n, measure
/// gamma_n, derive the bound for eps_{n+1}, repeat.  Explicit epsilons are
/// validated against the bound (error names the offending level); once the
/// list runs out the schedule continues geometrically with `auto_factor`.
/// Stops at `max_levels` or one level past stabilization, whichever is
/// first; `stabilized_at` records the first level with eps below half the
/// minimum positive pairwise distance, which forces A = X, makes every
/// U_2eps element a singleton, and turns all further transitions into
/// identities.
inline FasSequence build_fas(const FiniteMetricSpace& space, const FasOptions& opt) {
    if (space.size() == 0) throw Error(Error::Kind::argument, "build_fas: empty space");
    if (!(opt.auto_factor > 0 && opt.auto_factor < 1))
        throw Error(Error::Kind::argument, "build_fas: auto factor must lie in (0,1)");
    FasSequence fas;
    fas.space = space;
    fas.tol = opt.tol;
    const double min_pos = space.min_positive_distance();
    const double diam = space.diameter();

    double eps = 0;
    for (int n = 1; n <= opt.max_levels; ++n) {
        if (n == 1) {
            if (!opt.explicit_epsilons.empty())
                eps = opt.explicit_epsilons[0];
            else
                eps = diam > 0 ? 2 * diam : 1.0;  // any single point covers
            if (!(eps > 0)) throw Error(Error::Kind::validation, "schedule: eps_1 must be positive");
        } else {
            const auto& prev = fas.levels.back();
            double bound = adjusted_bound(prev.epsilon, prev.gamma_used);
            if (static_cast<std::size_t>(n) <= opt.explicit_epsilons.size()) {
                eps = opt.explicit_epsilons[static_cast<std::size_t>(n - 1)];
                if (!(eps > 0 && eps < bound))
                    throw Error(Error::Kind::validation,
                                "schedule: eps at level " + std::to_string(n) + " (" + std::to_string(eps) +
                                    ") violates the adjusted bound " + std::to_string(bound));
            } else {
                eps = opt.auto_factor * bound;
            }
        }

        ApproximationLevel lv;
        lv.index = n;
        lv.epsilon = eps;
        const bool forced_full = opt.tol.lt(eps, min_pos / 2);
        if (forced_full) {
            // below half the minimum distance each point covers only itself
            lv.approx.resize(static_cast<std::size_t>(space.size()));
            std::iota(lv.approx.begin(), lv.approx.end(), 0);
        } else if (opt.strategy == ApproxStrategy::given) {
            if (static_cast<std::size_t>(n) > opt.given_levels.size())
                throw Error(Error::Kind::argument,
                            "build_fas: no given subset for level " + std::to_string(n));
            const IndexSet& g = opt.given_levels[static_cast<std::size_t>(n - 1)];
            lv.approx = epsilon_approximation(space, eps, ApproxStrategy::given, &g, opt.seed, opt.tol);
        } else {
            lv.approx = epsilon_approximation(space, eps, opt.strategy, nullptr, opt.seed, opt.tol);
        }

        lv.gamma = gamma_of(space, lv.approx);
        auto ov = opt.gamma_override.find(n);
        lv.gamma_used = ov == opt.gamma_override.end() ? lv.gamma : ov->second;
        if (lv.gamma_used < lv.gamma)
            throw Error(Error::Kind::validation,
                        "gamma override at level " + std::to_string(n) +
                            " is below the sample maximum " + std::to_string(lv.gamma));
        if (!(lv.gamma_used < eps))
            throw Error(Error::Kind::validation,
                        "level " + std::to_string(n) + ": gamma " + std::to_string(lv.gamma_used) +
                            " is not strictly below epsilon " + std::to_string(eps));
        fas.levels.push_back(std::move(lv));

        if (forced_full && !fas.stabilized_at) fas.stabilized_at = n;
        if (fas.stabilized_at) break;  // everything from here on is the identity
    }

    // nearby-map data for consecutive levels
    for (std::size_t l = 0; l + 1 < fas.levels.size(); ++l) {
        std::vector<IndexSet> sets;
        sets.reserve(fas.levels[l + 1].approx.size());
        for (int ap : fas.levels[l + 1].approx)
            sets.push_back(nearby_set(space, fas.levels[l].approx, ap, opt.tol));
        fas.nearest_sets.push_back(std::move(sets));
    }

    detail::validate_fas_invariants(fas);
    return fas;
}

namespace detail {

inline const IndexSet& nearest_of(const FasSequence& fas, int level_from /*n+1*/, int point) {
    const auto& lv = fas.level(level_from);
    auto it = std::lower_bound(lv.approx.begin(), lv.approx.end(), point);
    if (it == lv.approx.end() || *it != point)
        throw Error(Error::Kind::argument, "point is not a member of A_" + std::to_string(level_from));
    return fas.nearest_sets[static_cast<std::size_t>(level_from - 2)]
                           [static_cast<std::size_t>(it - lv.approx.begin())];
}

}  // namespace detail

/// p_{n,n+1} applied to a subset C of A_{n+1}: the union of the nearest
/// sets of its members.  Requires diam(C) < 2 eps_{n+1}; the image is
/// guaranteed (and checked) to have diam < 2 eps_n.
inline IndexSet transition_image(const FasSequence& fas, int n, const IndexSet& c) {
    if (n < 1 || n + 1 > fas.last_level())
        throw Error(Error::Kind::argument, "transition_image: levels " + std::to_string(n) + "," +
                                               std::to_string(n + 1) + " not built");
    if (c.empty()) throw Error(Error::Kind::argument, "transition_image: empty subset");
    const double two_eps_src = 2 * fas.level(n + 1).epsilon;
    if (!fas.tol.lt(diameter_of(fas.space, c), two_eps_src))
        throw Error(Error::Kind::precondition,
                    "transition_image: subset diameter is not below 2 eps_" + std::to_string(n + 1));
    IndexSet img;
    for (int p : c) img = set_union(img, detail::nearest_of(fas, n + 1, p));
    if (!fas.tol.lt(diameter_of(fas.space, img), 2 * fas.level(n).epsilon))
        throw Error(Error::Kind::internal,
                    "transition_image: image diameter exceeds 2 eps_" + std::to_string(n) +
                        " (broken schedule)");
    return img;
}

/// Iterated transition p_{n,m} on a subset of A_m (n < m).
inline IndexSet transition_image_iterated(const FasSequence& fas, int n, int m, IndexSet c) {
    if (n > m) throw Error(Error::Kind::argument, "transition_image_iterated: need n <= m");
    for (int l = m - 1; l >= n; --l) c = transition_image(fas, l, c);
    return c;
}

/// Finite-depth trace of a sample point through the sequence:
/// X^n = B(x, eps_n) cap A_n and X*_n = intersection over n < m <= depth of
/// p_{n,m}(X^m).
struct TraceLevel {
    int level = 0;
    IndexSet x_n;        // B(x, eps_n) cap A_n
    IndexSet x_star;     // nested intersection at this truncation depth
    bool stabilized = false;
    double hausdorff_to_x = 0;
};

struct TraceResult {
    int point = 0;
    int depth = 0;
    std::vector<TraceLevel> levels;
};

inline TraceResult trace_point(const FasSequence& fas, int x, int depth) {
    if (x < 0 || x >= fas.space.size()) throw Error(Error::Kind::argument, "trace_point: bad point index");
    if (depth < 1 || depth > fas.last_level())
        throw Error(Error::Kind::argument, "trace_point: depth exceeds built levels");

    std::vector<IndexSet> xn(static_cast<std::size_t>(depth));
    for (int n = 1; n <= depth; ++n) {
        const auto& lv = fas.level(n);
        IndexSet b;
        for (int a : lv.approx)
            if (fas.tol.lt(fas.space.d(x, a), lv.epsilon)) b.push_back(a);
        if (b.empty())
            throw Error(Error::Kind::internal, "trace_point: empty ball at level " + std::to_string(n) +
                                                   " (A_n is not an eps_n-approximation)");
        xn[static_cast<std::size_t>(n - 1)] = std::move(b);
    }

    const bool whole_trace_stable = fas.stabilized_at && *fas.stabilized_at <= depth;
    TraceResult res;
    res.point = x;
    res.depth = depth;
    for (int n = 1; n <= depth; ++n) {
        TraceLevel tl;
        tl.level = n;
        tl.x_n = xn[static_cast<std::size_t>(n - 1)];
        // X*_n = intersection of p_{n,m}(X^m) over n < m <= depth; the images
        // are nested in m (asserted), so this is the deepest image.  At
        // n = depth the empty intersection is read as X^n itself.
        IndexSet inter = tl.x_n;
        std::vector<IndexSet> images;
        for (int m = n + 1; m <= depth; ++m)
            images.push_back(transition_image_iterated(fas, n, m, xn[static_cast<std::size_t>(m - 1)]));
        for (std::size_t i = 1; i < images.size(); ++i)
            if (!subset_of(images[i], images[i - 1]))
                throw Error(Error::Kind::internal, "trace_point: p_{n,m}(X^m) is not nested in m");
        for (const auto& im : images) {
            IndexSet next;
            std::set_intersection(inter.begin(), inter.end(), im.begin(), im.end(),
                                  std::back_inserter(next));
            inter = std::move(next);
        }
        tl.x_star = std::move(inter);
        if (tl.x_star.empty())
            throw Error(Error::Kind::internal, "trace_point: empty X*_n truncation");
        tl.stabilized = whole_trace_stable;
        tl.hausdorff_to_x = hausdorff_distance(fas.space, {x}, tl.x_star);
        if (tl.stabilized && !(tl.hausdorff_to_x < fas.level(n).epsilon))
            throw Error(Error::Kind::internal,
                        "trace_point: d_H(x, X*_n) >= eps_n at stabilized depth (level " +
                            std::to_string(n) + ")");
        res.levels.push_back(std::move(tl));
    }
    return res;
}

}  // namespace invpers

#endif
