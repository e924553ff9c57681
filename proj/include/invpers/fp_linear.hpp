#ifndef INVPERS_FP_LINEAR_HPP
#define INVPERS_FP_LINEAR_HPP

#include <unordered_map>

#include "invpers/common.hpp"

namespace invpers {

using Fp = std::uint32_t;

inline bool is_prime(Fp p) {
    if (p < 2) return false;
    for (Fp d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Arithmetic in the prime field F_p.
struct FpField {
    Fp p = 2;

    explicit FpField(Fp p_ = 2) : p(p_) {
        if (!is_prime(p)) throw Error(Error::Kind::argument, "field characteristic must be prime");
    }

    Fp norm(long long v) const {
        long long r = v % static_cast<long long>(p);
        return static_cast<Fp>(r < 0 ? r + p : r);
    }
    Fp add(Fp a, Fp b) const { return (a + b) % p; }
    Fp sub(Fp a, Fp b) const { return (a + p - b) % p; }
    Fp mul(Fp a, Fp b) const { return static_cast<Fp>((static_cast<std::uint64_t>(a) * b) % p); }
    Fp neg(Fp a) const { return a == 0 ? 0 : p - a; }
    Fp inv(Fp a) const {
        if (a == 0) throw Error(Error::Kind::internal, "division by zero in F_p");
        // Fermat: a^(p-2)
        Fp result = 1, base = a;
        Fp e = p - 2;
        while (e) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
};

/// Sparse vector over F_p: (row, coeff) pairs sorted by row, coeffs nonzero.
using SparseFpVec = std::vector<std::pair<int, Fp>>;

inline int low_row(const SparseFpVec& v) { return v.empty() ? -1 : v.back().first; }

/// v := v - c * w, merged.
inline SparseFpVec axpy_sub(const FpField& f, const SparseFpVec& v, Fp c, const SparseFpVec& w) {
    SparseFpVec out;
    out.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(v[i++]);
        } else if (i == v.size() || w[j].first < v[i].first) {
            Fp val = f.neg(f.mul(c, w[j].second));
            if (val) out.push_back({w[j].first, val});
            ++j;
        } else {
            Fp val = f.sub(v[i].second, f.mul(c, w[j].second));
            if (val) out.push_back({v[i].first, val});
            ++i, ++j;
        }
    }
    return out;
}

/// Column-echelon accumulator with distinct pivot rows (pivot = highest row
/// index, normalized to coefficient 1).  Supports coefficient tracking for
/// tagged columns, which is how cycles get coordinates in a homology basis.
class FpEchelon {
public:
    explicit FpEchelon(FpField f) : f_(f) {}

    const FpField& field() const { return f_; }
    int rank() const { return static_cast<int>(cols_.size()); }
    const SparseFpVec& column(int i) const { return cols_[static_cast<std::size_t>(i)]; }
    int tag_of(int i) const { return tags_[static_cast<std::size_t>(i)]; }

    /// Fully reduces v against the stored columns.  When `coeffs` is given,
    /// records for every *tagged* column used the multiplier m such that
    /// v_in = sum m_i * col_i + residual.
    SparseFpVec reduce(SparseFpVec v, std::unordered_map<int, Fp>* coeffs = nullptr) const {
        while (!v.empty()) {
            auto it = pivot_col_.find(low_row(v));
            if (it == pivot_col_.end()) break;
            Fp m = v.back().second;  // stored pivots are 1
            const int ci = it->second;
            if (coeffs) {
                int tag = tags_[static_cast<std::size_t>(ci)];
                if (tag >= 0) {
                    Fp& slot = (*coeffs)[tag];
                    slot = f_.add(slot, m);
                }
            }
            v = axpy_sub(f_, v, m, cols_[static_cast<std::size_t>(ci)]);
        }
        return v;
    }

    /// Reduces and, if a nonzero residual remains, stores it (normalized) as
    /// a new echelon column.  Returns the residual (empty if v was dependent).
    SparseFpVec add(SparseFpVec v, int tag = -1) {
        v = reduce(std::move(v));
        if (v.empty()) return v;
        Fp scale = f_.inv(v.back().second);
        if (scale != 1)
            for (auto& e : v) e.second = f_.mul(e.second, scale);
        pivot_col_[low_row(v)] = static_cast<int>(cols_.size());
        cols_.push_back(v);
        tags_.push_back(tag);
        return v;
    }

private:
    FpField f_;
    std::vector<SparseFpVec> cols_;
    std::vector<int> tags_;
    std::unordered_map<int, int> pivot_col_;
};

/// Kernel basis of the matrix whose columns are `cols`, via reduction with a
/// companion identity: whenever a column reduces to zero, the tracked
/// combination is a kernel vector.  Deterministic in the input order.
inline std::vector<SparseFpVec> kernel_basis(const FpField& f, const std::vector<SparseFpVec>& cols) {
    struct Entry {
        SparseFpVec col, comp;
    };
    std::vector<Entry> stored;
    std::unordered_map<int, int> pivot_of;
    std::vector<SparseFpVec> kernel;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        SparseFpVec v = cols[static_cast<std::size_t>(j)];
        SparseFpVec comp = {{j, 1}};
        while (!v.empty()) {
            auto it = pivot_of.find(low_row(v));
            if (it == pivot_of.end()) break;
            const Entry& e = stored[static_cast<std::size_t>(it->second)];
            Fp m = v.back().second;
            v = axpy_sub(f, v, m, e.col);
            comp = axpy_sub(f, comp, m, e.comp);
        }
        if (v.empty()) {
            kernel.push_back(std::move(comp));
        } else {
            Fp scale = f.inv(v.back().second);
            if (scale != 1) {
                for (auto& e : v) e.second = f.mul(e.second, scale);
                for (auto& e : comp) e.second = f.mul(e.second, scale);
            }
            pivot_of[low_row(v)] = static_cast<int>(stored.size());
            stored.push_back({std::move(v), std::move(comp)});
        }
    }
    return kernel;
}

/// Dense matrix over F_p (row-major).  Small: homology-level maps only.
struct FpMatrix {
    int rows = 0, cols = 0;
    Fp p = 2;
    std::vector<Fp> a;

    FpMatrix() = default;
    FpMatrix(int r, int c, Fp p_) : rows(r), cols(c), p(p_), a(static_cast<std::size_t>(r) * c, 0) {}

    Fp& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    Fp at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static FpMatrix identity(int n, Fp p_) {
        FpMatrix m(n, n, p_);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    FpMatrix mul(const FpMatrix& o) const {
        if (cols != o.rows || p != o.p) throw Error(Error::Kind::internal, "FpMatrix: shape mismatch");
        FpField f(p);
        FpMatrix r(rows, o.cols, p);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                Fp v = at(i, k);
                if (!v) continue;
                for (int j = 0; j < o.cols; ++j)
                    r.at(i, j) = f.add(r.at(i, j), f.mul(v, o.at(k, j)));
            }
        return r;
    }

    int rank() const {
        FpField f(p);
        FpMatrix m = *this;
        int r = 0;
        for (int c = 0; c < cols && r < rows; ++c) {
            int piv = -1;
            for (int i = r; i < rows; ++i)
                if (m.at(i, c)) { piv = i; break; }
            if (piv < 0) continue;
            for (int j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
            Fp inv = f.inv(m.at(r, c));
            for (int j = 0; j < cols; ++j) m.at(r, j) = f.mul(m.at(r, j), inv);
            for (int i = 0; i < rows; ++i) {
                if (i == r || !m.at(i, c)) continue;
                Fp mult = m.at(i, c);
                for (int j = 0; j < cols; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(mult, m.at(r, j)));
            }
            ++r;
        }
        return r;
    }

    bool operator==(const FpMatrix& o) const {
        return rows == o.rows && cols == o.cols && p == o.p && a == o.a;
    }
};

}  // namespace invpers

#endif
