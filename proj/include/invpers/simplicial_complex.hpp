#ifndef INVPERS_SIMPLICIAL_COMPLEX_HPP
#define INVPERS_SIMPLICIAL_COMPLEX_HPP

#include <bit>
#include <numeric>
#include <unordered_set>

#include "invpers/metric_space.hpp"

namespace invpers {

/// Abstract simplicial complex: a downward-closed family of vertex-id sets,
/// stored by dimension and sorted lexicographically within each dimension.
struct SimplicialComplex {
    int vertex_count = 0;
    std::vector<std::vector<IndexSet>> by_dim;

    int dim() const { return static_cast<int>(by_dim.size()) - 1; }

    std::size_t simplex_count() const {
        std::size_t n = 0;
        for (const auto& v : by_dim) n += v.size();
        return n;
    }

    const std::vector<IndexSet>& simplices(int d) const {
        static const std::vector<IndexSet> empty;
        return (d >= 0 && d <= dim()) ? by_dim[static_cast<std::size_t>(d)] : empty;
    }

    bool contains(const IndexSet& s) const {
        int d = static_cast<int>(s.size()) - 1;
        if (d < 0 || d > dim()) return false;
        const auto& bucket = by_dim[static_cast<std::size_t>(d)];
        return std::binary_search(bucket.begin(), bucket.end(), s);
    }

    void sort_buckets() {
        for (auto& bucket : by_dim) std::sort(bucket.begin(), bucket.end());
    }
};

/// Vertex map between complexes.  Degenerate images (repeated vertices) are
/// legal; they deduplicate to a lower-dimensional simplex.
struct SimplicialMap {
    const SimplicialComplex* source = nullptr;
    const SimplicialComplex* target = nullptr;
    std::vector<int> vertex_map;

    IndexSet image_of(const IndexSet& simplex) const {
        IndexSet img;
        img.reserve(simplex.size());
        for (int v : simplex) img.push_back(vertex_map[static_cast<std::size_t>(v)]);
        return sorted_unique(std::move(img));
    }
};

inline bool is_valid_simplicial_map(const SimplicialMap& f) {
    if (!f.source || !f.target) return false;
    if (static_cast<int>(f.vertex_map.size()) != f.source->vertex_count) return false;
    for (int v : f.vertex_map)
        if (v < 0 || v >= f.target->vertex_count) return false;
    for (int d = 0; d <= f.source->dim(); ++d)
        for (const auto& s : f.source->simplices(d))
            if (!f.target->contains(f.image_of(s))) return false;
    return true;
}

namespace detail {

// Plain bitset over machine words; enough graph machinery for clique walks.
struct Bitset {
    std::vector<std::uint64_t> w;
    explicit Bitset(int n = 0) : w(static_cast<std::size_t>((n + 63) / 64), 0) {}
    void set(int i) { w[static_cast<std::size_t>(i >> 6)] |= std::uint64_t(1) << (i & 63); }
    bool test(int i) const { return (w[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1; }
    void and_with(const Bitset& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] &= o.w[k];
    }
    template <typename F>
    void for_each_from(int lo, F&& f) const {
        for (std::size_t k = static_cast<std::size_t>(lo >> 6); k < w.size(); ++k) {
            std::uint64_t word = w[k];
            if (k == static_cast<std::size_t>(lo >> 6) && (lo & 63)) word &= ~std::uint64_t(0) << (lo & 63);
            while (word) {
                int b = std::countr_zero(word);
                f(static_cast<int>(k) * 64 + b);
                word &= word - 1;
            }
        }
    }
};

struct CliqueEnumeration {
    std::vector<IndexSet> cliques;  // in local indices of the vertex list
    int boundary_hits = 0;          // pairs excluded as lying on the threshold
};

// All cliques (not only maximal ones) of the graph "d(a,b) strictly below
// `bound`" on the points of `a`, up to max_card vertices.  A subset is a
// clique exactly when its diameter is below the bound, so this enumerates
// the elements of U_bound(a).
inline CliqueEnumeration diameter_cliques(const FiniteMetricSpace& s, const IndexSet& a, double bound,
                                          int max_card, std::size_t max_elements, Tol tol) {
    const int n = static_cast<int>(a.size());
    CliqueEnumeration out;
    std::vector<Bitset> adj(static_cast<std::size_t>(n), Bitset(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = s.d(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
            if (tol.lt(d, bound)) {
                adj[static_cast<std::size_t>(i)].set(j);
                adj[static_cast<std::size_t>(j)].set(i);
            } else if (tol.near(d, bound)) {
                ++out.boundary_hits;
            }
        }

    IndexSet current;
    auto emit = [&](const IndexSet& c) {
        if (out.cliques.size() >= max_elements)
            throw Error(Error::Kind::resource,
                        "complex enumeration exceeded the element ceiling (" +
                            std::to_string(max_elements) + "); lower the scale or set a size cap");
        out.cliques.push_back(c);
    };
    // depth-first extension by higher-indexed common neighbours; every clique
    // is produced exactly once, in increasing vertex order
    auto extend = [&](auto&& self, const Bitset& cand, int lo) -> void {
        if (static_cast<int>(current.size()) >= max_card) return;
        cand.for_each_from(lo, [&](int v) {
            current.push_back(v);
            emit(current);
            Bitset next = cand;
            next.and_with(adj[static_cast<std::size_t>(v)]);
            self(self, next, v + 1);
            current.pop_back();
        });
    };
    Bitset all(n);
    for (int i = 0; i < n; ++i) all.set(i);
    extend(extend, all, 0);
    return out;
}

}  // namespace detail

/// Vietoris-Rips complex of the subset `a` at parameter `epsilon` with the
/// strict convention: a simplex is included iff diam < epsilon.  Vertices
/// are numbered by position in `a`.  `dim_cap` truncates to a skeleton.
inline SimplicialComplex vr_complex(const FiniteMetricSpace& s, const IndexSet& a, double epsilon,
                                    int dim_cap = -1, std::size_t max_elements = 0, Tol tol = {},
                                    int* boundary_hits = nullptr) {
    if (!(epsilon > 0)) throw Error(Error::Kind::argument, "vr_complex: epsilon must be positive");
    if (a.empty()) throw Error(Error::Kind::argument, "vr_complex: empty vertex set");
    if (!max_elements) max_elements = default_element_ceiling();
    int max_card = dim_cap < 0 ? static_cast<int>(a.size()) : dim_cap + 1;
    auto enumeration = detail::diameter_cliques(s, a, epsilon, max_card, max_elements, tol);
    if (boundary_hits) *boundary_hits = enumeration.boundary_hits;
    SimplicialComplex k;
    k.vertex_count = static_cast<int>(a.size());
    for (auto& c : enumeration.cliques) {
        int d = static_cast<int>(c.size()) - 1;
        if (d >= static_cast<int>(k.by_dim.size())) k.by_dim.resize(static_cast<std::size_t>(d) + 1);
        k.by_dim[static_cast<std::size_t>(d)].push_back(std::move(c));
    }
    k.sort_buckets();
    return k;
}

/// Convenience overload over the whole space.
inline SimplicialComplex vr_complex(const FiniteMetricSpace& s, double epsilon, int dim_cap = -1,
                                    std::size_t max_elements = 0, Tol tol = {}) {
    IndexSet all(static_cast<std::size_t>(s.size()));
    std::iota(all.begin(), all.end(), 0);
    return vr_complex(s, all, epsilon, dim_cap, max_elements, tol);
}

}  // namespace invpers

#endif
