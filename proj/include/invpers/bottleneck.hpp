#ifndef INVPERS_BOTTLENECK_HPP
#define INVPERS_BOTTLENECK_HPP

#include "invpers/persistence.hpp"

namespace invpers {

/// A bar mapped to real endpoints, lo <= hi.
struct RealBar {
    double lo = 0, hi = 0;
};

inline double linf_cost(const RealBar& a, const RealBar& b) {
    return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

/// L-infinity distance to the diagonal: half the persistence.
inline double diagonal_cost(const RealBar& a) { return (a.hi - a.lo) / 2; }

/// How barcode indices are turned into real endpoints before matching.
enum class BarMapping {
    raw,       // use the integer birth/death labels as-is
    embedded,  // use the barcode's label -> value table (eps_n / critical value)
};

/// Expands multiplicities and maps a barcode to real intervals.
inline std::vector<RealBar> real_bars(const Barcode& bc, BarMapping mapping = BarMapping::raw) {
    std::vector<RealBar> out;
    for (const Bar& b : bc.bars) {
        RealBar rb;
        if (mapping == BarMapping::embedded) {
            double v1 = bc.value_of_label(b.birth), v2 = bc.value_of_label(b.death);
            rb = {std::min(v1, v2), std::max(v1, v2)};
        } else {
            rb = {static_cast<double>(b.birth), static_cast<double>(b.death)};
        }
        for (int c = 0; c < b.multiplicity; ++c) out.push_back(rb);
    }
    return out;
}

/// A partial matching realizing a bottleneck value: pairs (i, j) of indices
/// into the two expanded bar lists; bars absent from `pairs` go to the
/// diagonal.
struct BottleneckMatching {
    double distance = 0;
    std::vector<std::pair<int, int>> pairs;
};

namespace detail {

// Kuhn augmenting-path matching on the classic augmented graph:
// left = B1 + shadow(B2), right = B2 + shadow(B1); b1-b2 edges need cost <= t,
// a bar may pair with its own shadow if its diagonal cost <= t, shadows pair
// freely with each other.  A perfect matching exists iff t is feasible.
struct BottleneckFeasibility {
    const std::vector<RealBar>& b1;
    const std::vector<RealBar>& b2;
    int n1, n2, n;  // n = n1 + n2 nodes per side

    explicit BottleneckFeasibility(const std::vector<RealBar>& x, const std::vector<RealBar>& y)
        : b1(x), b2(y), n1(static_cast<int>(x.size())), n2(static_cast<int>(y.size())), n(n1 + n2) {}

    bool edge(int l, int r, double t) const {
        bool l_real = l < n1, r_real = r < n2;
        if (l_real && r_real) return linf_cost(b1[static_cast<std::size_t>(l)], b2[static_cast<std::size_t>(r)]) <= t;
        if (l_real && !r_real) return r - n2 == l && diagonal_cost(b1[static_cast<std::size_t>(l)]) <= t;
        if (!l_real && r_real) return l - n1 == r && diagonal_cost(b2[static_cast<std::size_t>(r)]) <= t;
        return true;  // shadow-shadow
    }

    bool try_augment(int l, double t, std::vector<int>& match_r, std::vector<char>& seen) const {
        for (int r = 0; r < n; ++r) {
            if (seen[static_cast<std::size_t>(r)] || !edge(l, r, t)) continue;
            seen[static_cast<std::size_t>(r)] = 1;
            if (match_r[static_cast<std::size_t>(r)] < 0 || try_augment(match_r[static_cast<std::size_t>(r)], t, match_r, seen)) {
                match_r[static_cast<std::size_t>(r)] = l;
                return true;
            }
        }
        return false;
    }

    bool feasible(double t, std::vector<int>* out_match = nullptr) const {
        std::vector<int> match_r(static_cast<std::size_t>(n), -1);
        for (int l = 0; l < n; ++l) {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            if (!try_augment(l, t, match_r, seen)) return false;
        }
        if (out_match) *out_match = std::move(match_r);
        return true;
    }
};

}  // namespace detail

/// Exact bottleneck distance between two sets of real intervals: the minimum
/// over partial matchings of the maximum of matched L-infinity costs and
/// unmatched half-persistences.  Computed by binary search over the finite
/// candidate set (all pairwise costs and all diagonal costs) with a bipartite
/// matching feasibility test.
inline double bottleneck_distance(const std::vector<RealBar>& b1, const std::vector<RealBar>& b2,
                                  BottleneckMatching* out = nullptr) {
    std::vector<double> candidates = {0.0};
    for (const auto& a : b1) candidates.push_back(diagonal_cost(a));
    for (const auto& b : b2) candidates.push_back(diagonal_cost(b));
    for (const auto& a : b1)
        for (const auto& b : b2) candidates.push_back(linf_cost(a, b));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    detail::BottleneckFeasibility fz(b1, b2);
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (fz.feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    double t = candidates[lo];
    if (out) {
        std::vector<int> match_r;
        fz.feasible(t, &match_r);
        out->distance = t;
        out->pairs.clear();
        for (int r = 0; r < fz.n2; ++r) {
            int l = match_r[static_cast<std::size_t>(r)];
            if (l >= 0 && l < fz.n1) out->pairs.push_back({l, r});
        }
    }
    return t;
}

/// Bottleneck distance between barcodes of the same homology dimension under
/// the chosen endpoint mapping.
inline double bottleneck_distance(const Barcode& a, const Barcode& b, BarMapping mapping,
                                  BottleneckMatching* out = nullptr) {
    if (a.dimension != b.dimension)
        throw Error(Error::Kind::argument, "bottleneck_distance: homology dimensions differ");
    return bottleneck_distance(real_bars(a, mapping), real_bars(b, mapping), out);
}

}  // namespace invpers

#endif
