#ifndef INVPERS_PERSISTENCE_HPP
#define INVPERS_PERSISTENCE_HPP

#include <map>
#include <numeric>

#include "invpers/homology.hpp"
#include "invpers/poset.hpp"

namespace invpers {

/// A finite persistence module.  Internally the arrows always run in
/// composite order t -> t+1; for inverse modules position t corresponds to
/// FAS level (hi - t), so that the homology maps of the transitions are
/// composable as stored.
struct PersistenceModule {
    enum class Direction { forward, inverse };

    Direction direction = Direction::forward;
    int k = 0;
    Fp p = 2;
    std::vector<int> dims;           // by position
    std::vector<FpMatrix> maps;      // maps[t]: position t -> t+1 (dims[t+1] x dims[t])
    std::vector<int> labels;         // user-facing index per position (FAS level / critical index)
    std::vector<double> values;      // scale per position (eps_n / critical distance)

    int length() const { return static_cast<int>(dims.size()); }
};

/// r[i][j] = rank of the composite map from position i to position j
/// (r[i][i] = dims[i]).
struct RankFunction {
    int length = 0;
    std::vector<std::vector<int>> r;  // triangular: r[i][j - i]

    int at(int i, int j) const {
        if (i < 0 || j >= length || i > j) return 0;
        return r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)];
    }
};

inline RankFunction rank_function(const PersistenceModule& m) {
    RankFunction rf;
    rf.length = m.length();
    rf.r.resize(static_cast<std::size_t>(m.length()));
    for (int i = 0; i < m.length(); ++i) {
        FpMatrix comp = FpMatrix::identity(m.dims[static_cast<std::size_t>(i)], m.p);
        rf.r[static_cast<std::size_t>(i)].push_back(m.dims[static_cast<std::size_t>(i)]);
        for (int j = i; j + 1 < m.length(); ++j) {
            comp = m.maps[static_cast<std::size_t>(j)].mul(comp);
            rf.r[static_cast<std::size_t>(i)].push_back(comp.rank());
        }
    }
    return rf;
}

struct Bar {
    int birth = 0;  // in label coordinates, birth <= death
    int death = 0;
    int multiplicity = 1;

    bool operator==(const Bar&) const = default;
};

struct Barcode {
    PersistenceModule::Direction direction = PersistenceModule::Direction::forward;
    int dimension = 0;
    Fp field = 2;
    std::vector<Bar> bars;
    std::vector<int> labels;          // ascending
    std::vector<double> label_values; // parallel to labels

    double value_of_label(int label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label)
            throw Error(Error::Kind::argument, "barcode has no label " + std::to_string(label));
        return label_values[static_cast<std::size_t>(it - labels.begin())];
    }
};

/// Interval decomposition via the rank function: the multiplicity of the
/// bar [i,j] in positions is
///   mu[i][j] = r[i][j] - r[i-1][j] - r[i][j+1] + r[i-1][j+1].
/// The result is checked against the defining reconstruction identities
/// (sum of multiplicities over bars containing [i,j] equals r[i][j]) before
/// being returned in label coordinates.
inline Barcode interval_decomposition(const PersistenceModule& m) {
    RankFunction rf = rank_function(m);
    const int L = m.length();
    std::vector<std::vector<int>> mu(static_cast<std::size_t>(L), std::vector<int>(static_cast<std::size_t>(L), 0));
    for (int i = 0; i < L; ++i)
        for (int j = i; j < L; ++j) {
            int v = rf.at(i, j) - rf.at(i - 1, j) - rf.at(i, j + 1) + rf.at(i - 1, j + 1);
            if (v < 0)
                throw Error(Error::Kind::internal,
                            "interval_decomposition: negative multiplicity (module is inconsistent)");
            mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        }
    // reconstruction identity: sum of multiplicities of bars containing
    // [i,j] must equal r[i][j]; checked exactly via 2D suffix/prefix sums
    {
        std::vector<std::vector<long long>> cover(static_cast<std::size_t>(L),
                                                  std::vector<long long>(static_cast<std::size_t>(L), 0));
        for (int b = 0; b < L; ++b) {
            long long suffix = 0;
            for (int d = L - 1; d >= b; --d) {
                suffix += mu[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)];
                cover[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)] = suffix;
            }
        }
        for (int i = 0; i < L; ++i)
            for (int j = i; j < L; ++j) {
                long long total = 0;
                for (int b = 0; b <= i; ++b) total += cover[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
                if (total != rf.at(i, j))
                    throw Error(Error::Kind::internal, "interval_decomposition: rank reconstruction failed");
            }
    }

    Barcode bc;
    bc.direction = m.direction;
    bc.dimension = m.k;
    bc.field = m.p;
    std::map<std::pair<int, int>, int> agg;
    for (int i = 0; i < L; ++i)
        for (int j = i; j < L; ++j) {
            int v = mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!v) continue;
            int la = m.labels[static_cast<std::size_t>(i)], lb = m.labels[static_cast<std::size_t>(j)];
            agg[{std::min(la, lb), std::max(la, lb)}] += v;
        }
    for (auto& [iv, mult] : agg) bc.bars.push_back({iv.first, iv.second, mult});
    std::map<int, double> lv;
    for (int t = 0; t < L; ++t) lv[m.labels[static_cast<std::size_t>(t)]] = m.values[static_cast<std::size_t>(t)];
    for (auto& [l, v] : lv) {
        bc.labels.push_back(l);
        bc.label_values.push_back(v);
    }
    return bc;
}

/// Per-level homology data of a FAS, reused by the inverse module and the
/// pipeline reports.
struct LevelComplex {
    int level = 0;
    Poset poset;
    SimplicialComplex complex;
    ChainComplex chains;
    std::map<int, HomologyBasis> bases;  // per requested dimension
};

struct InverseModuleOptions {
    int size_cap = -1;
    std::size_t max_elements = 0;  // 0 = library default
    Tol tol;
};

/// Builds U_2eps(A_n), its order complex and chain complex for one FAS level
/// (clamping to the stabilized level when n exceeds the built range).
inline LevelComplex build_level_complex(const FasSequence& fas, int level, Fp p, const std::vector<int>& ks,
                                        const InverseModuleOptions& opt = {}) {
    int effective = level;
    if (level > fas.last_level()) {
        if (!fas.stabilized_at)
            throw Error(Error::Kind::argument,
                        "level " + std::to_string(level) + " not built and the sequence is not stabilized");
        effective = fas.last_level();
    }
    const auto& lv = fas.level(effective);
    LevelComplex lc;
    lc.level = level;
    lc.poset = u_space(fas.space, lv.approx, 2 * lv.epsilon, opt.size_cap, opt.max_elements, opt.tol);
    lc.complex = order_complex(lc.poset, opt.max_elements ? opt.max_elements : default_element_ceiling());
    lc.chains = chain_complex(lc.complex, p);
    for (int k : ks) lc.bases.emplace(k, homology_basis(lc.chains, k));
    return lc;
}

/// The inverse persistence module of a FAS over levels [lo, hi]:
/// dims[t] = betti_k at level (hi - t), maps = homology matrices of the
/// induced transition maps, arrows running toward coarser levels.  A shared
/// cache (keyed by effective level) lets callers reuse the per-level
/// complexes across homology dimensions.
inline PersistenceModule inverse_module(const FasSequence& fas, int k, Fp p, int lo, int hi,
                                        const InverseModuleOptions& opt = {},
                                        std::map<int, LevelComplex>* shared_cache = nullptr) {
    if (lo < 1 || lo > hi) throw Error(Error::Kind::argument, "inverse_module: bad level range");
    const int last = fas.last_level();

    std::map<int, LevelComplex> own_cache;
    std::map<int, LevelComplex>& cache = shared_cache ? *shared_cache : own_cache;
    auto level_of = [&](int n) -> LevelComplex& {
        int eff = std::min(n, last);
        if (n > last && !fas.stabilized_at)
            throw Error(Error::Kind::argument,
                        "inverse_module: level " + std::to_string(n) + " not built and not stabilized");
        auto it = cache.find(eff);
        if (it == cache.end()) it = cache.emplace(eff, build_level_complex(fas, eff, p, {}, opt)).first;
        if (!it->second.bases.count(k)) it->second.bases.emplace(k, homology_basis(it->second.chains, k));
        return it->second;
    };

    PersistenceModule m;
    m.direction = PersistenceModule::Direction::inverse;
    m.k = k;
    m.p = p;
    for (int t = 0; t <= hi - lo; ++t) {
        int level = hi - t;
        LevelComplex& lc = level_of(level);
        m.dims.push_back(lc.bases.at(k).betti);
        m.labels.push_back(level);
        m.values.push_back(fas.level(std::min(level, last)).epsilon);
    }
    for (int t = 0; t + 1 <= hi - lo; ++t) {
        int src_level = hi - t;  // map src_level -> src_level - 1
        int tgt_level = src_level - 1;
        LevelComplex& src = level_of(src_level);
        LevelComplex& tgt = level_of(tgt_level);
        if (std::min(src_level, last) == std::min(tgt_level, last)) {
            // past stabilization the transitions are identities
            m.maps.push_back(FpMatrix::identity(src.bases.at(k).betti, p));
            continue;
        }
        PosetMap pm = induced_poset_map(fas, tgt_level, src.poset, tgt.poset);
        SimplicialMap sm = induced_simplicial_map(pm, src.complex, tgt.complex);
        m.maps.push_back(
            induced_homology_map(sm, k, src.chains, src.bases.at(k), tgt.chains, tgt.bases.at(k)));
    }
    return m;
}

/// build_fas -> inverse_module -> interval_decomposition in one call.
inline Barcode inverse_barcode(const FiniteMetricSpace& space, int k, Fp p, int lo, int hi,
                               const FasOptions& fas_opt, const InverseModuleOptions& mod_opt = {}) {
    FasSequence fas = build_fas(space, fas_opt);
    return interval_decomposition(inverse_module(fas, k, p, lo, hi, mod_opt));
}

/// Critical values of the VR filtration: 0 plus every pairwise distance
/// (values within tol.tie of each other are merged).
inline std::vector<double> vr_critical_values(const FiniteMetricSpace& s, Tol tol = {}) {
    std::vector<double> vals = {0.0};
    for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j) vals.push_back(s.d(i, j));
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double v : vals)
        if (out.empty() || v > out.back() + tol.tie) out.push_back(v);
    return out;
}

/// Standard forward VR persistence on the index set `grid` (defaults to all
/// critical values).  The complex at value c contains the simplices of
/// diameter <= c, i.e. the strict-diameter complex evaluated just past c;
/// inclusion maps make this a special case of the module machinery above.
inline PersistenceModule vr_filtration_module(const FiniteMetricSpace& s, int k, Fp p,
                                              std::vector<double> grid = {},
                                              std::size_t max_elements = 0, Tol tol = {}) {
    if (grid.empty()) grid = vr_critical_values(s, tol);
    std::sort(grid.begin(), grid.end());
    IndexSet all(static_cast<std::size_t>(s.size()));
    std::iota(all.begin(), all.end(), 0);
    if (!max_elements) max_elements = default_element_ceiling();

    PersistenceModule m;
    m.direction = PersistenceModule::Direction::forward;
    m.k = k;
    m.p = p;
    std::vector<ChainComplex> ccs;
    std::vector<HomologyBasis> bases;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        // diam <= c is "strictly below c + 2*tie" under the tie policy
        auto cliques = detail::diameter_cliques(s, all, grid[t] + 2 * tol.tie, k + 2, max_elements, tol);
        SimplicialComplex kc;
        kc.vertex_count = s.size();
        for (auto& c : cliques.cliques) {
            int d = static_cast<int>(c.size()) - 1;
            if (d >= static_cast<int>(kc.by_dim.size())) kc.by_dim.resize(static_cast<std::size_t>(d) + 1);
            kc.by_dim[static_cast<std::size_t>(d)].push_back(std::move(c));
        }
        kc.sort_buckets();
        ccs.push_back(chain_complex(kc, p));
        bases.push_back(homology_basis(ccs.back(), k));
        m.dims.push_back(bases.back().betti);
        m.labels.push_back(static_cast<int>(t));
        m.values.push_back(grid[t]);
    }
    // inclusion maps: identity on vertices
    SimplicialMap inc;
    inc.vertex_map.resize(static_cast<std::size_t>(s.size()));
    std::iota(inc.vertex_map.begin(), inc.vertex_map.end(), 0);
    for (std::size_t t = 0; t + 1 < grid.size(); ++t)
        m.maps.push_back(induced_homology_map(inc, k, ccs[t], bases[t], ccs[t + 1], bases[t + 1]));
    return m;
}

inline Barcode vr_filtration_persistence(const FiniteMetricSpace& s, int k, Fp p,
                                         std::vector<double> grid = {}, std::size_t max_elements = 0,
                                         Tol tol = {}) {
    return interval_decomposition(vr_filtration_module(s, k, p, std::move(grid), max_elements, tol));
}

}  // namespace invpers

#endif
