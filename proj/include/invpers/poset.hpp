#ifndef INVPERS_POSET_HPP
#define INVPERS_POSET_HPP

#include <unordered_map>

#include "invpers/fas.hpp"
#include "invpers/simplicial_complex.hpp"

namespace invpers {

/// Finite T0 space presented as a poset: elements are canonical sorted index
/// tuples, the order is subset containment.  Elements are sorted by
/// cardinality then lexicographically, so comparable elements always have
/// increasing positions.
struct Poset {
    std::vector<IndexSet> elements;
    double diameter_bound = std::numeric_limits<double>::infinity();  // 2eps for U-spaces
    int size_cap = -1;        // max element cardinality, -1 when unbounded
    int boundary_hits = 0;    // pairs excluded as lying on the 2eps threshold

    std::unordered_map<IndexSet, int, IndexSetHash> position;

    int size() const { return static_cast<int>(elements.size()); }

    void finalize() {
        std::sort(elements.begin(), elements.end(), card_lex_less);
        position.clear();
        position.reserve(elements.size());
        for (int i = 0; i < size(); ++i) position[elements[static_cast<std::size_t>(i)]] = i;
    }

    int find(const IndexSet& e) const {
        auto it = position.find(e);
        return it == position.end() ? -1 : it->second;
    }

    /// For each element, the positions of its strict supersets (ascending).
    std::vector<std::vector<int>> strict_supersets() const {
        std::vector<std::vector<int>> sup(elements.size());
        for (int i = 0; i < size(); ++i)
            for (int j = i + 1; j < size(); ++j) {
                const auto& a = elements[static_cast<std::size_t>(i)];
                const auto& b = elements[static_cast<std::size_t>(j)];
                if (a.size() < b.size() && subset_of(a, b)) sup[static_cast<std::size_t>(i)].push_back(j);
            }
        return sup;
    }

    bool downward_closed() const {
        for (const auto& e : elements) {
            if (e.size() <= 1) continue;
            for (std::size_t skip = 0; skip < e.size(); ++skip) {
                IndexSet face;
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (i != skip) face.push_back(e[i]);
                if (position.find(face) == position.end()) return false;
            }
        }
        return true;
    }
};

/// U_2eps(A): all non-empty subsets of A with diameter strictly below
/// `two_epsilon`, ordered by containment.  This is the face poset of the
/// Vietoris-Rips complex V_2eps(A); enumeration walks the cliques of the
/// proximity graph rather than scanning 2^A.
inline Poset u_space(const FiniteMetricSpace& s, const IndexSet& a, double two_epsilon,
                     int size_cap = -1, std::size_t max_elements = 0, Tol tol = {}) {
    if (a.empty()) throw Error(Error::Kind::argument, "u_space: empty approximation");
    if (!(two_epsilon > 0)) throw Error(Error::Kind::argument, "u_space: bound must be positive");
    if (!max_elements) max_elements = default_element_ceiling();
    int max_card = size_cap < 0 ? static_cast<int>(a.size()) : size_cap;
    auto enumeration = detail::diameter_cliques(s, a, two_epsilon, max_card, max_elements, tol);
    Poset p;
    p.diameter_bound = two_epsilon;
    p.size_cap = size_cap;
    p.boundary_hits = enumeration.boundary_hits;
    p.elements.reserve(enumeration.cliques.size());
    for (auto& c : enumeration.cliques) {
        IndexSet e;
        e.reserve(c.size());
        for (int local : c) e.push_back(a[static_cast<std::size_t>(local)]);
        p.elements.push_back(std::move(e));  // `a` sorted, so e is sorted
    }
    p.finalize();
    return p;
}

/// Order complex K(P): one vertex per element, one simplex per chain
/// C_0 < C_1 < ... < C_s.  For a face poset this is the barycentric
/// subdivision of the underlying complex.
inline SimplicialComplex order_complex(const Poset& p, std::size_t max_elements = 0) {
    if (!max_elements) max_elements = default_element_ceiling();
    SimplicialComplex k;
    k.vertex_count = p.size();
    auto sup = p.strict_supersets();
    std::size_t produced = 0;
    IndexSet chain;
    auto emit = [&]() {
        if (++produced > max_elements)
            throw Error(Error::Kind::resource, "order complex exceeded the element ceiling");
        int d = static_cast<int>(chain.size()) - 1;
        if (d >= static_cast<int>(k.by_dim.size())) k.by_dim.resize(static_cast<std::size_t>(d) + 1);
        k.by_dim[static_cast<std::size_t>(d)].push_back(chain);
    };
    auto grow = [&](auto&& self, int last) -> void {
        emit();
        for (int nxt : sup[static_cast<std::size_t>(last)]) {
            chain.push_back(nxt);
            self(self, nxt);
            chain.pop_back();
        }
    };
    for (int i = 0; i < p.size(); ++i) {
        chain = {i};
        grow(grow, i);
    }
    k.sort_buckets();
    return k;
}

/// Face poset X(K): elements are the simplices of K ordered by inclusion.
/// order_complex(face_poset(K)) is the barycentric subdivision of K.
inline Poset face_poset(const SimplicialComplex& k) {
    Poset p;
    for (int d = 0; d <= k.dim(); ++d)
        for (const auto& s : k.simplices(d)) p.elements.push_back(s);
    p.finalize();
    return p;
}

/// Order-preserving assignment between posets, stored positionally.
struct PosetMap {
    const Poset* source = nullptr;
    const Poset* target = nullptr;
    std::vector<int> assignment;  // source position -> target position
};

inline bool is_order_preserving(const PosetMap& f) {
    if (!f.source || !f.target) return false;
    auto sup = f.source->strict_supersets();
    for (int i = 0; i < f.source->size(); ++i) {
        const auto& img_i = f.target->elements[static_cast<std::size_t>(f.assignment[static_cast<std::size_t>(i)])];
        for (int j : sup[static_cast<std::size_t>(i)]) {
            const auto& img_j =
                f.target->elements[static_cast<std::size_t>(f.assignment[static_cast<std::size_t>(j)])];
            if (!subset_of(img_i, img_j)) return false;
        }
    }
    return true;
}

/// The transition p_{n,n+1} as a map of U-posets: C |-> union of nearest
/// sets.  Fails with a cap-violation error if the target was built with a
/// size cap that cuts off some image.
inline PosetMap induced_poset_map(const FasSequence& fas, int n, const Poset& source, const Poset& target) {
    PosetMap f;
    f.source = &source;
    f.target = &target;
    f.assignment.reserve(source.elements.size());
    for (const auto& c : source.elements) {
        IndexSet img = transition_image(fas, n, c);
        int pos = target.find(img);
        if (pos < 0) {
            if (target.size_cap >= 0 && static_cast<int>(img.size()) > target.size_cap)
                throw Error(Error::Kind::resource,
                            "induced_poset_map: target size cap " + std::to_string(target.size_cap) +
                                " truncates an image of cardinality " + std::to_string(img.size()) +
                                "; rebuild the target with size_cap >= " + std::to_string(img.size()));
            throw Error(Error::Kind::internal, "induced_poset_map: image element missing from target poset");
        }
        f.assignment.push_back(pos);
    }
    return f;
}

/// K(f): the simplicial map between order complexes induced by an
/// order-preserving poset map.  Chains map to chains; repeated vertices
/// collapse at the simplex level.
inline SimplicialMap induced_simplicial_map(const PosetMap& f, const SimplicialComplex& source_complex,
                                            const SimplicialComplex& target_complex) {
    if (!is_order_preserving(f))
        throw Error(Error::Kind::precondition, "induced_simplicial_map: map is not order preserving");
    if (source_complex.vertex_count != f.source->size() || target_complex.vertex_count != f.target->size())
        throw Error(Error::Kind::argument, "induced_simplicial_map: complexes do not match the posets");
    SimplicialMap sm;
    sm.source = &source_complex;
    sm.target = &target_complex;
    sm.vertex_map = f.assignment;
    return sm;
}

}  // namespace invpers

#endif
