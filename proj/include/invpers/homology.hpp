#ifndef INVPERS_HOMOLOGY_HPP
#define INVPERS_HOMOLOGY_HPP

#include "invpers/fp_linear.hpp"
#include "invpers/simplicial_complex.hpp"

namespace invpers {

/// Simplicial chain complex over F_p.  Simplices carry the orientation given
/// by sorted vertex order; boundary signs alternate over that order (they
/// vanish for p = 2).
struct ChainComplex {
    Fp p = 2;
    std::vector<std::vector<IndexSet>> basis;  // basis[k]: k-simplices, lex-sorted
    std::vector<std::unordered_map<IndexSet, int, IndexSetHash>> index;
    std::vector<std::vector<SparseFpVec>> boundary;  // boundary[k]: C_k -> C_{k-1}, k >= 1

    int dim() const { return static_cast<int>(basis.size()) - 1; }

    int count(int k) const {
        return (k >= 0 && k <= dim()) ? static_cast<int>(basis[static_cast<std::size_t>(k)].size()) : 0;
    }

    int index_of(int k, const IndexSet& s) const {
        if (k < 0 || k > dim()) return -1;
        auto it = index[static_cast<std::size_t>(k)].find(s);
        return it == index[static_cast<std::size_t>(k)].end() ? -1 : it->second;
    }
};

inline ChainComplex chain_complex(const SimplicialComplex& k, Fp p) {
    if (!is_prime(p)) throw Error(Error::Kind::argument, "chain_complex: p must be prime");
    ChainComplex cc;
    cc.p = p;
    FpField f(p);
    const int dim = k.dim();
    cc.basis.resize(static_cast<std::size_t>(dim) + 1);
    cc.index.resize(static_cast<std::size_t>(dim) + 1);
    cc.boundary.resize(static_cast<std::size_t>(dim) + 1);
    for (int d = 0; d <= dim; ++d) {
        cc.basis[static_cast<std::size_t>(d)] = k.simplices(d);  // already lex-sorted
        auto& idx = cc.index[static_cast<std::size_t>(d)];
        idx.reserve(cc.basis[static_cast<std::size_t>(d)].size());
        for (int i = 0; i < cc.count(d); ++i) idx[cc.basis[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)]] = i;
    }
    for (int d = 1; d <= dim; ++d) {
        auto& cols = cc.boundary[static_cast<std::size_t>(d)];
        cols.reserve(cc.basis[static_cast<std::size_t>(d)].size());
        for (const auto& s : cc.basis[static_cast<std::size_t>(d)]) {
            SparseFpVec col;
            for (std::size_t skip = 0; skip < s.size(); ++skip) {
                IndexSet face;
                face.reserve(s.size() - 1);
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != skip) face.push_back(s[i]);
                int fi = cc.index_of(d - 1, face);
                if (fi < 0) throw Error(Error::Kind::internal, "chain_complex: missing face (complex not closed)");
                Fp sign = (skip % 2 == 0) ? 1 : f.neg(1);
                col.push_back({fi, sign});
            }
            std::sort(col.begin(), col.end());
            cols.push_back(std::move(col));
        }
    }
    return cc;
}

/// Basis of H_k: betti, one cycle representative per generator, and an
/// echelon "witness" that can express any cycle in these generators modulo
/// boundaries.
struct HomologyBasis {
    int k = 0;
    Fp p = 2;
    int betti = 0;
    std::vector<SparseFpVec> cycle_reps;
    FpEchelon witness;  // boundary columns untagged, generators tagged 0..betti-1

    HomologyBasis() : witness(FpField(2)) {}
    explicit HomologyBasis(FpField f) : witness(f) {}
};

inline HomologyBasis homology_basis(const ChainComplex& cc, int k) {
    if (k < 0) throw Error(Error::Kind::argument, "homology_basis: negative dimension");
    FpField f(cc.p);
    HomologyBasis h(f);
    h.k = k;
    h.p = cc.p;
    if (k > cc.dim()) return h;

    int rank_bk = 0;  // rank of boundary_{k+1}
    if (k + 1 <= cc.dim())
        for (const auto& col : cc.boundary[static_cast<std::size_t>(k + 1)])
            if (!h.witness.add(col).empty()) ++rank_bk;

    std::vector<SparseFpVec> kernel;
    if (k == 0) {
        kernel.reserve(static_cast<std::size_t>(cc.count(0)));
        for (int i = 0; i < cc.count(0); ++i) kernel.push_back({{i, 1}});
    } else {
        kernel = kernel_basis(f, cc.boundary[static_cast<std::size_t>(k)]);
    }

    for (auto& z : kernel) {
        SparseFpVec rep = h.witness.add(std::move(z), h.betti);
        if (!rep.empty()) {
            h.cycle_reps.push_back(std::move(rep));
            ++h.betti;
        }
    }

    int rank_dk = k >= 1 ? cc.count(k) - static_cast<int>(kernel.size()) : 0;
    if (h.betti != cc.count(k) - rank_dk - rank_bk)
        throw Error(Error::Kind::internal, "homology_basis: rank bookkeeping mismatch");
    return h;
}

/// Rank-only Betti number (no representatives); cheaper for large complexes.
inline int betti_number(const ChainComplex& cc, int k) {
    if (k < 0 || k > cc.dim()) return 0;
    FpField f(cc.p);
    auto rank_of = [&](int d) {
        if (d < 1 || d > cc.dim()) return 0;
        FpEchelon e(f);
        int r = 0;
        for (const auto& col : cc.boundary[static_cast<std::size_t>(d)])
            if (!e.add(col).empty()) ++r;
        return r;
    };
    return cc.count(k) - rank_of(k) - rank_of(k + 1);
}

/// Coordinates of a cycle in the homology basis (modulo boundaries).
/// The cycle must be homologous to a combination of the generators.
inline std::vector<Fp> coords_in_basis(const HomologyBasis& h, SparseFpVec cycle) {
    std::unordered_map<int, Fp> coeffs;
    SparseFpVec residual = h.witness.reduce(std::move(cycle), &coeffs);
    if (!residual.empty())
        throw Error(Error::Kind::internal, "coords_in_basis: vector is not a cycle modulo boundaries");
    std::vector<Fp> out(static_cast<std::size_t>(h.betti), 0);
    for (auto [tag, c] : coeffs) out[static_cast<std::size_t>(tag)] = c;
    return out;
}

namespace detail {

inline int sort_permutation_sign(std::vector<int>& v) {
    // counts inversions; vectors here are tiny
    int sign = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] > v[j]) sign = -sign;
    return sign;
}

}  // namespace detail

/// Pushes a k-chain through a simplicial map: an oriented simplex goes to
/// its image with the sign of the sorting permutation, or to 0 when
/// vertices collide.
inline SparseFpVec push_chain(const SimplicialMap& f, const ChainComplex& src, const ChainComplex& tgt,
                              int k, const SparseFpVec& chain) {
    FpField field(tgt.p);
    std::unordered_map<int, Fp> acc;
    for (auto [si, coeff] : chain) {
        const IndexSet& s = src.basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(si)];
        std::vector<int> image;
        image.reserve(s.size());
        for (int v : s) image.push_back(f.vertex_map[static_cast<std::size_t>(v)]);
        std::vector<int> sorted_img = image;
        std::sort(sorted_img.begin(), sorted_img.end());
        if (std::adjacent_find(sorted_img.begin(), sorted_img.end()) != sorted_img.end())
            continue;  // degenerate image collapses to zero
        int ti = tgt.index_of(k, sorted_img);
        if (ti < 0)
            throw Error(Error::Kind::precondition, "push_chain: image of a simplex is not a target simplex");
        int sign = detail::sort_permutation_sign(image);
        Fp val = sign > 0 ? coeff : field.neg(coeff);
        Fp& slot = acc[ti];
        slot = field.add(slot, val);
    }
    SparseFpVec out;
    out.reserve(acc.size());
    for (auto [i, c] : acc)
        if (c) out.push_back({i, c});
    std::sort(out.begin(), out.end());
    return out;
}

/// Matrix of H_k(f): columns are the coordinates, in the target homology
/// basis, of the pushforwards of the source generators.
inline FpMatrix induced_homology_map(const SimplicialMap& f, int k, const ChainComplex& src,
                                     const HomologyBasis& src_h, const ChainComplex& tgt,
                                     const HomologyBasis& tgt_h) {
    if (src.p != tgt.p) throw Error(Error::Kind::argument, "induced_homology_map: field mismatch");
    FpMatrix m(tgt_h.betti, src_h.betti, src.p);
    for (int j = 0; j < src_h.betti; ++j) {
        SparseFpVec img = push_chain(f, src, tgt, k, src_h.cycle_reps[static_cast<std::size_t>(j)]);
        std::vector<Fp> col = coords_in_basis(tgt_h, std::move(img));
        for (int i = 0; i < tgt_h.betti; ++i) m.at(i, j) = col[static_cast<std::size_t>(i)];
    }
    return m;
}

/// Convenience overload that builds the chain complexes and bases itself.
inline FpMatrix induced_homology_map(const SimplicialMap& f, int k, Fp p) {
    ChainComplex src = chain_complex(*f.source, p);
    ChainComplex tgt = chain_complex(*f.target, p);
    HomologyBasis sh = homology_basis(src, k);
    HomologyBasis th = homology_basis(tgt, k);
    return induced_homology_map(f, k, src, sh, tgt, th);
}

}  // namespace invpers

#endif
